"""Per-casualty evidence ledger and assessment reports.

Perception modules publish categorical labels; the ledger keeps the full
append-only history plus one accepted observation per vital. Conflicts
resolve by latest timestamp, with ties broken by source name and then state
index, so any arrival order of the same evidence multiset lands in the same
accepted state.

``assess`` turns a ledger into a complete nine-vital report at any time:
observed vitals pass through verbatim, everything else is the most probable
state under the posterior given all accepted evidence. Missing sensors
never shrink the report; they just widen the posteriors.

Ledgers are value objects: ``ingest`` returns a new ledger and leaves its
input untouched, which is what makes what-if overlays trivially safe.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Iterable, Mapping, Sequence

import numpy as np

from .inference import map_state, posterior_all
from .network import NetworkSpec


class UnknownVitalError(KeyError):
    code = "UNKNOWN_VITAL"


class InvalidStateError(ValueError):
    code = "INVALID_STATE"


@dataclass(frozen=True)
class Evidence:
    """One categorical observation of one vital for one casualty."""

    casualty_id: str
    vital: str
    state: str
    source: str
    timestamp_ms: int

    def __post_init__(self) -> None:
        if self.timestamp_ms < 0:
            raise ValueError("timestamp_ms must be >= 0")


OBSERVED = "Observed"
INFERRED = "Inferred"


@dataclass(frozen=True)
class VitalAssessment:
    """Reported value for one vital plus its posterior and provenance."""

    vital: str
    state: str
    distribution: tuple[float, ...]
    provenance: str  # OBSERVED or INFERRED


@dataclass(frozen=True)
class AssessmentReport:
    casualty_id: str
    vitals: tuple[VitalAssessment, ...]
    report_timestamp_ms: int
    model_version: str

    def entry(self, vital: str) -> VitalAssessment:
        for v in self.vitals:
            if v.vital == vital:
                return v
        raise KeyError(vital)

    def labels(self) -> dict[str, str]:
        return {v.vital: v.state for v in self.vitals}

    def to_obj(self) -> dict:
        return {
            "casualty_id": self.casualty_id,
            "report_timestamp_ms": self.report_timestamp_ms,
            "model_version": self.model_version,
            "vitals": {
                v.vital: {
                    "state": v.state,
                    "provenance": v.provenance,
                    "distribution": list(v.distribution),
                }
                for v in self.vitals
            },
        }


def _precedence_key(network: NetworkSpec, e: Evidence) -> tuple:
    # Total order over evidence for one vital: latest timestamp wins,
    # then source name, then state index. Permutation-safe by construction.
    return (e.timestamp_ms, e.source, network.node(e.vital).state_index(e.state))


@dataclass(frozen=True)
class EvidenceLedger:
    """Accepted observation per vital plus the full receive history."""

    network: NetworkSpec
    casualty_id: str
    history: tuple[Evidence, ...] = ()
    accepted: Mapping[str, Evidence] = field(default_factory=dict)

    def accepted_states(self) -> dict[str, int]:
        """Accepted evidence as node -> state index, ready for inference."""
        return {
            vital: self.network.node(vital).state_index(e.state)
            for vital, e in self.accepted.items()
        }

    def last_timestamp(self) -> int | None:
        if not self.history:
            return None
        return max(e.timestamp_ms for e in self.history)


def _check_evidence(network: NetworkSpec, e: Evidence) -> None:
    try:
        node = network.node(e.vital)
    except KeyError:
        raise UnknownVitalError(f"unknown vital {e.vital!r}") from None
    if e.state not in node.states:
        raise InvalidStateError(
            f"state {e.state!r} not valid for vital {e.vital!r} "
            f"(expected one of {list(node.states)})"
        )


def ingest(ledger: EvidenceLedger, e: Evidence) -> EvidenceLedger:
    """Append to history and re-resolve the accepted slot for the vital.

    Returns the successor ledger; the input ledger is unchanged.
    """
    _check_evidence(ledger.network, e)
    incumbent = ledger.accepted.get(e.vital)
    accepted = dict(ledger.accepted)
    if incumbent is None or _precedence_key(ledger.network, e) > _precedence_key(
        ledger.network, incumbent
    ):
        accepted[e.vital] = e
    return replace(ledger, history=ledger.history + (e,), accepted=accepted)


def accepts(ledger: EvidenceLedger, e: Evidence) -> bool:
    """Would ``e`` become the accepted value if ingested now?"""
    _check_evidence(ledger.network, e)
    incumbent = ledger.accepted.get(e.vital)
    return incumbent is None or _precedence_key(ledger.network, e) > _precedence_key(
        ledger.network, incumbent
    )


def assess(
    ledger: EvidenceLedger, spec: NetworkSpec, now: int
) -> AssessmentReport:
    """Complete report over all nodes: observed passthrough, inferred MAP.

    Raises ImpossibleEvidenceError if the accepted set is contradictory
    under the model; the report is withheld rather than fabricated.
    """
    evidence = ledger.accepted_states()
    posteriors = posterior_all(spec, evidence)
    entries = []
    for posterior in posteriors:
        vital = posterior.node
        if vital in evidence:
            state = ledger.accepted[vital].state
            provenance = OBSERVED
        else:
            state = spec.node(vital).states[map_state(posterior)]
            provenance = INFERRED
        entries.append(
            VitalAssessment(
                vital=vital,
                state=state,
                distribution=tuple(float(x) for x in posterior.distribution),
                provenance=provenance,
            )
        )
    return AssessmentReport(
        casualty_id=ledger.casualty_id,
        vitals=tuple(entries),
        report_timestamp_ms=now,
        model_version=spec.version,
    )


def assess_whatif(
    base: EvidenceLedger,
    overlay: Iterable[Evidence],
    spec: NetworkSpec,
    now: int,
) -> AssessmentReport:
    """Assess a hypothetical: base ledger plus overlay, base untouched."""
    ledger = base
    for e in overlay:
        ledger = ingest(ledger, e)
    return assess(ledger, spec, now)


def observed_labels(ledger: EvidenceLedger) -> dict[str, str]:
    """Accepted evidence as vital -> label (the vision-only view)."""
    return {vital: e.state for vital, e in ledger.accepted.items()}
