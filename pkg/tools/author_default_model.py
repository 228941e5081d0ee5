"""Regenerate the bundled triage network and its band annotations.

    python tools/author_default_model.py

Probabilities are authored as exact decimal fractions. The hemorrhage CPT
is assembled by a noisy-OR combination: each injury site independently
fails to cause severe bleeding with the inhibitor probability listed
below, plus a small leak for bleeding with no visible extremity or torso
injury. All other tables are written out directly.
"""

from __future__ import annotations

import json
import sys
from fractions import Fraction
from pathlib import Path

from chiron.network import Cpt, NetworkSpec, NodeSpec, serialize_network, validate_network
from chiron.triage import (
    DEFAULT_ANNOTATIONS_FILE,
    DEFAULT_MODEL_FILE,
    VITAL_STATES,
    default_annotations,
    validate_convention,
)

DATA_DIR = Path(__file__).resolve().parent.parent / "src" / "chiron" / "data"

LEAK = Fraction(2, 100)

# Probability the injury fails to produce severe bleeding on its own.
INHIBITOR = {
    ("LowerExtTrauma", "Wound"): Fraction(80, 100),
    ("LowerExtTrauma", "Amputation"): Fraction(10, 100),
    ("UpperExtTrauma", "Wound"): Fraction(85, 100),
    ("UpperExtTrauma", "Amputation"): Fraction(15, 100),
    ("TorsoTrauma", "Wound"): Fraction(70, 100),
}

HEMORRHAGE_PARENTS = ("LowerExtTrauma", "UpperExtTrauma", "TorsoTrauma")


def hemorrhage_rows() -> list[list[float]]:
    rows = []
    for lower in VITAL_STATES["LowerExtTrauma"]:
        for upper in VITAL_STATES["UpperExtTrauma"]:
            for torso in VITAL_STATES["TorsoTrauma"]:
                keep = 1 - LEAK
                for parent, state in zip(HEMORRHAGE_PARENTS, (lower, upper, torso)):
                    keep *= INHIBITOR.get((parent, state), Fraction(1))
                rows.append([float(1 - keep), float(keep)])
    return rows


def build_network() -> NetworkSpec:
    nodes = (
        NodeSpec(
            "SevereHemorrhage",
            VITAL_STATES["SevereHemorrhage"],
            HEMORRHAGE_PARENTS,
            Cpt(hemorrhage_rows()),
        ),
        NodeSpec(
            "RespiratoryDistress",
            VITAL_STATES["RespiratoryDistress"],
            ("TorsoTrauma",),
            Cpt([[0.55, 0.45], [0.08, 0.92]]),
        ),
        NodeSpec("HeadTrauma", VITAL_STATES["HeadTrauma"], (), Cpt([[0.3, 0.7]])),
        NodeSpec("TorsoTrauma", VITAL_STATES["TorsoTrauma"], (), Cpt([[0.3, 0.7]])),
        NodeSpec(
            "LowerExtTrauma",
            VITAL_STATES["LowerExtTrauma"],
            (),
            Cpt([[0.25, 0.1, 0.65]]),
        ),
        NodeSpec(
            "UpperExtTrauma",
            VITAL_STATES["UpperExtTrauma"],
            (),
            Cpt([[0.25, 0.1, 0.65]]),
        ),
        NodeSpec(
            "OcularAlertness",
            VITAL_STATES["OcularAlertness"],
            ("HeadTrauma",),
            Cpt([[0.25, 0.7, 0.05], [0.85, 0.1, 0.05]]),
        ),
        NodeSpec(
            "VerbalAlertness",
            VITAL_STATES["VerbalAlertness"],
            ("HeadTrauma", "SevereHemorrhage"),
            Cpt(
                [
                    [0.1, 0.45, 0.4, 0.05],
                    [0.3, 0.5, 0.15, 0.05],
                    [0.35, 0.4, 0.2, 0.05],
                    [0.8, 0.1, 0.05, 0.05],
                ]
            ),
        ),
        NodeSpec(
            "MotorAlertness",
            VITAL_STATES["MotorAlertness"],
            ("HeadTrauma", "SevereHemorrhage"),
            Cpt(
                [
                    [0.1, 0.4, 0.45, 0.05],
                    [0.35, 0.45, 0.15, 0.05],
                    [0.3, 0.45, 0.2, 0.05],
                    [0.82, 0.09, 0.05, 0.04],
                ]
            ),
        ),
    )
    return NetworkSpec(name="casualty-triage", version="1.0.0", nodes=nodes)


ANNOTATIONS = [
    # Injury -> hemorrhage links, strongest first.
    {
        "child": "SevereHemorrhage",
        "child_state": "Present",
        "given": {
            "LowerExtTrauma": "Amputation",
            "UpperExtTrauma": "Normal",
            "TorsoTrauma": "Normal",
        },
        "tag": "Strong",
    },
    {
        "child": "SevereHemorrhage",
        "child_state": "Present",
        "given": {"LowerExtTrauma": "Amputation"},
        "tag": "Strong",
    },
    {
        "child": "SevereHemorrhage",
        "child_state": "Present",
        "given": {
            "LowerExtTrauma": "Normal",
            "UpperExtTrauma": "Amputation",
            "TorsoTrauma": "Normal",
        },
        "tag": "Strong",
    },
    {
        "child": "RespiratoryDistress",
        "child_state": "Present",
        "given": {"TorsoTrauma": "Wound"},
        "tag": "Moderate",
    },
    {
        "child": "VerbalAlertness",
        "child_state": "Abnormal",
        "given": {"HeadTrauma": "Wound", "SevereHemorrhage": "Absent"},
        "tag": "Moderate",
    },
    {
        "child": "MotorAlertness",
        "child_state": "Abnormal",
        "given": {"HeadTrauma": "Wound", "SevereHemorrhage": "Absent"},
        "tag": "Moderate",
    },
    {
        "child": "VerbalAlertness",
        "child_state": "Abnormal",
        "given": {"HeadTrauma": "Wound"},
        "tag": "Moderate",
    },
    {
        "child": "MotorAlertness",
        "child_state": "Abnormal",
        "given": {"HeadTrauma": "Wound"},
        "tag": "Moderate",
    },
    # Not-testable rates barely move with head state: weak by design.
    {
        "child": "OcularAlertness",
        "child_state": "NT",
        "given": {"HeadTrauma": "Wound"},
        "tag": "Weak",
    },
    {
        "child": "MotorAlertness",
        "child_state": "NT",
        "given": {"HeadTrauma": "Normal"},
        "tag": "Weak",
    },
]


def main() -> int:
    spec = build_network()
    violations = validate_network(spec)
    if violations:
        for violation in violations:
            print(violation, file=sys.stderr)
        return 1
    (DATA_DIR / DEFAULT_MODEL_FILE).write_text(serialize_network(spec), "utf-8")
    (DATA_DIR / DEFAULT_ANNOTATIONS_FILE).write_text(
        json.dumps(ANNOTATIONS, indent=2) + "\n", "utf-8"
    )
    band_violations = validate_convention(spec, default_annotations())
    if band_violations:
        for violation in band_violations:
            print(violation, file=sys.stderr)
        return 1
    print(f"wrote {DEFAULT_MODEL_FILE} and {DEFAULT_ANNOTATIONS_FILE} to {DATA_DIR}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
