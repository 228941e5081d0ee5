"""The nine-vital triage vocabulary, the shipped default network, and the
probability-convention lint.

The default network encodes how visible trauma drives the hidden criticals
(hemorrhage, respiratory distress) and how both degrade alertness. Its
topology and most CPT values are an engineering reconstruction, not field
data; the file is versioned so a better-calibrated model can replace it
without code changes. Two anchors are fixed: closed eyes given head trauma
is exactly 0.70, and amputation-driven hemorrhage sits in the strong band.

CPT authoring follows three qualitative bands:

* Strong causal link: entry in [0.80, 0.95]
* Moderate correlation: entry in [0.40, 0.60]
* Weak dependency: within 0.10 of the child's no-evidence baseline

``validate_convention`` mechanizes the bands as a lint over annotation
files, so model edits that drift outside their declared band fail CI
instead of shipping silently.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from typing import Mapping, Sequence

from .inference import posterior_all
from .network import NetworkSpec, cpt_row_index, parse_network

VITAL_STATES: dict[str, tuple[str, ...]] = {
    "SevereHemorrhage": ("Present", "Absent"),
    "RespiratoryDistress": ("Present", "Absent"),
    "HeadTrauma": ("Wound", "Normal"),
    "TorsoTrauma": ("Wound", "Normal"),
    "LowerExtTrauma": ("Wound", "Amputation", "Normal"),
    "UpperExtTrauma": ("Wound", "Amputation", "Normal"),
    "OcularAlertness": ("Open", "Closed", "NT"),
    "VerbalAlertness": ("Normal", "Abnormal", "Absent", "NT"),
    "MotorAlertness": ("Normal", "Abnormal", "Absent", "NT"),
}

VITAL_FIELDS: tuple[str, ...] = tuple(VITAL_STATES)

# Scoring groups: the two binaries score individually, these score as groups.
TRAUMA_FIELDS = ("HeadTrauma", "TorsoTrauma", "LowerExtTrauma", "UpperExtTrauma")
ALERTNESS_FIELDS = ("OcularAlertness", "VerbalAlertness", "MotorAlertness")

CONVENTION_BANDS: dict[str, tuple[float, float]] = {
    "Strong": (0.80, 0.95),
    "Moderate": (0.40, 0.60),
}
WEAK_HALF_WIDTH = 0.10

_BAND_EPS = 1e-12  # keep closed-interval boundaries from float flakes

_DATA_PACKAGE = "chiron.data"
DEFAULT_MODEL_FILE = "chiron-default.bn.json"
DEFAULT_ANNOTATIONS_FILE = "chiron-default.annotations.json"


@dataclass(frozen=True)
class LinkAnnotation:
    """Declares which convention band a CPT entry is supposed to sit in.

    ``given`` may constrain any subset of the child's parents; the rest are
    averaged out under their no-evidence marginals before the band check.
    """

    child: str
    child_state: str
    given: Mapping[str, str]
    tag: str


class AnnotationError(ValueError):
    """An annotation references nodes, states or tags that do not resolve."""


def default_network() -> NetworkSpec:
    """The shipped nine-vital triage network (parsed fresh on every call)."""
    text = resources.files(_DATA_PACKAGE).joinpath(DEFAULT_MODEL_FILE).read_text("utf-8")
    return parse_network(text)


def default_annotations() -> list[LinkAnnotation]:
    """Band annotations shipped alongside the default network."""
    text = (
        resources.files(_DATA_PACKAGE)
        .joinpath(DEFAULT_ANNOTATIONS_FILE)
        .read_text("utf-8")
    )
    return parse_annotations(text)


def parse_annotations(text: str) -> list[LinkAnnotation]:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise AnnotationError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(raw, list):
        raise AnnotationError("annotation file must be a JSON array")
    out = []
    for i, item in enumerate(raw):
        if not isinstance(item, dict):
            raise AnnotationError(f"annotation {i}: expected an object")
        try:
            out.append(
                LinkAnnotation(
                    child=item["child"],
                    child_state=item["child_state"],
                    given=dict(item["given"]),
                    tag=item["tag"],
                )
            )
        except KeyError as exc:
            raise AnnotationError(f"annotation {i}: missing key {exc}") from None
    return out


def _resolve(spec: NetworkSpec, ann: LinkAnnotation):
    if ann.tag not in ("Strong", "Moderate", "Weak"):
        raise AnnotationError(f"unknown tag {ann.tag!r}")
    try:
        child = spec.node(ann.child)
    except KeyError:
        raise AnnotationError(f"unknown child node {ann.child!r}") from None
    try:
        state_idx = child.state_index(ann.child_state)
    except KeyError:
        raise AnnotationError(
            f"node {ann.child!r} has no state {ann.child_state!r}"
        ) from None
    given_idx: dict[str, int] = {}
    for parent, label in ann.given.items():
        if parent not in child.parents:
            raise AnnotationError(
                f"{parent!r} is not a parent of {ann.child!r}"
            )
        try:
            given_idx[parent] = spec.node(parent).state_index(label)
        except KeyError:
            raise AnnotationError(
                f"parent {parent!r} has no state {label!r}"
            ) from None
    return child, state_idx, given_idx


def annotated_value(
    spec: NetworkSpec, ann: LinkAnnotation, baselines: Mapping[str, Sequence[float]]
) -> float:
    """CPT entry for the annotation, averaging unconstrained parents under
    their no-evidence marginals."""
    child, state_idx, given_idx = _resolve(spec, ann)
    free = [p for p in child.parents if p not in given_idx]
    value = 0.0
    combo = dict(given_idx)

    def walk(i: int, weight: float) -> float:
        if i == len(free):
            row = cpt_row_index(spec, child, [combo[p] for p in child.parents])
            return weight * float(child.cpt.rows[row, state_idx])
        total = 0.0
        parent = free[i]
        for s, w in enumerate(baselines[parent]):
            combo[parent] = s
            total += walk(i + 1, weight * float(w))
        del combo[parent]
        return total

    value = walk(0, 1.0)
    return value


def validate_convention(
    spec: NetworkSpec, annotations: Sequence[LinkAnnotation]
) -> list[str]:
    """One violation per annotation whose value falls outside its band."""
    marginals = {p.node: p.distribution for p in posterior_all(spec, {})}
    violations: list[str] = []
    for ann in annotations:
        value = annotated_value(spec, ann, marginals)
        if ann.tag == "Weak":
            child = spec.node(ann.child)
            baseline = float(marginals[ann.child][child.state_index(ann.child_state)])
            lo, hi = baseline - WEAK_HALF_WIDTH, baseline + WEAK_HALF_WIDTH
        else:
            lo, hi = CONVENTION_BANDS[ann.tag]
        if not (lo - _BAND_EPS) <= value <= (hi + _BAND_EPS):
            given = ", ".join(f"{p}={s}" for p, s in sorted(ann.given.items()))
            violations.append(
                f"band: P({ann.child}={ann.child_state} | {given or 'priors'}) "
                f"= {value:.6g} outside {ann.tag} [{lo:.6g}, {hi:.6g}]"
            )
    return violations
