"""Tests for the evidence ledger, conflict resolution and assessment."""

import random

import pytest

from chiron.fusion import (
    INFERRED,
    OBSERVED,
    AssessmentReport,
    Evidence,
    EvidenceLedger,
    InvalidStateError,
    UnknownVitalError,
    accepts,
    assess,
    assess_whatif,
    ingest,
    observed_labels,
)
from chiron.inference import ImpossibleEvidenceError
from chiron.network import parse_network
from chiron.triage import VITAL_FIELDS, default_network

HEALTHY = {
    "SevereHemorrhage": "Absent",
    "RespiratoryDistress": "Absent",
    "HeadTrauma": "Normal",
    "TorsoTrauma": "Normal",
    "LowerExtTrauma": "Normal",
    "UpperExtTrauma": "Normal",
    "OcularAlertness": "Open",
    "VerbalAlertness": "Normal",
    "MotorAlertness": "Normal",
}


@pytest.fixture(scope="module")
def spec():
    return default_network()


@pytest.fixture()
def ledger(spec):
    return EvidenceLedger(network=spec, casualty_id="c01")


def ev(vital, state, ts, source="vision", cid="c01"):
    return Evidence(
        casualty_id=cid, vital=vital, state=state, source=source, timestamp_ms=ts
    )


class TestIngest:
    def test_first_evidence_is_accepted(self, ledger):
        after = ingest(ledger, ev("HeadTrauma", "Wound", 1000))
        assert after.accepted["HeadTrauma"].state == "Wound"
        assert len(after.history) == 1

    def test_newer_timestamp_supersedes(self, ledger):
        after = ingest(ledger, ev("HeadTrauma", "Wound", 1000))
        after = ingest(after, ev("HeadTrauma", "Normal", 2000))
        assert after.accepted["HeadTrauma"].state == "Normal"

    def test_older_timestamp_is_recorded_but_not_accepted(self, ledger):
        after = ingest(ledger, ev("HeadTrauma", "Normal", 2000))
        after = ingest(after, ev("HeadTrauma", "Wound", 1500))
        assert after.accepted["HeadTrauma"].state == "Normal"
        assert len(after.history) == 2

    def test_timestamp_tie_breaks_on_source_name(self, ledger):
        a = ingest(ledger, ev("TorsoTrauma", "Wound", 500, source="alpha"))
        a = ingest(a, ev("TorsoTrauma", "Normal", 500, source="delta"))
        assert a.accepted["TorsoTrauma"].source == "delta"

        b = ingest(ledger, ev("TorsoTrauma", "Normal", 500, source="delta"))
        b = ingest(b, ev("TorsoTrauma", "Wound", 500, source="alpha"))
        assert b.accepted["TorsoTrauma"].source == "delta"

    def test_full_tie_breaks_on_state_index(self, ledger):
        # LowerExtTrauma states: Wound(0), Amputation(1), Normal(2)
        a = ingest(ledger, ev("LowerExtTrauma", "Wound", 500))
        a = ingest(a, ev("LowerExtTrauma", "Normal", 500))
        assert a.accepted["LowerExtTrauma"].state == "Normal"

        b = ingest(ledger, ev("LowerExtTrauma", "Normal", 500))
        b = ingest(b, ev("LowerExtTrauma", "Wound", 500))
        assert b.accepted["LowerExtTrauma"].state == "Normal"

    def test_ingest_leaves_the_input_ledger_unchanged(self, ledger):
        first = ingest(ledger, ev("HeadTrauma", "Wound", 1000))
        ingest(first, ev("HeadTrauma", "Normal", 2000))
        assert ledger.history == ()
        assert ledger.accepted == {}
        assert first.accepted["HeadTrauma"].state == "Wound"
        assert len(first.history) == 1

    def test_history_preserves_arrival_order(self, ledger):
        items = [
            ev("HeadTrauma", "Wound", 3000),
            ev("HeadTrauma", "Normal", 1000),
            ev("TorsoTrauma", "Wound", 2000),
        ]
        after = ledger
        for item in items:
            after = ingest(after, item)
        assert list(after.history) == items

    def test_accepted_is_permutation_invariant(self, ledger, spec):
        items = [
            ev("HeadTrauma", "Wound", 1000, source="vision-a"),
            ev("HeadTrauma", "Normal", 1000, source="vision-b"),
            ev("HeadTrauma", "Wound", 900, source="vision-c"),
            ev("TorsoTrauma", "Wound", 700),
            ev("TorsoTrauma", "Normal", 700, source="medic"),
            ev("LowerExtTrauma", "Amputation", 400),
            ev("LowerExtTrauma", "Wound", 400),
            ev("OcularAlertness", "Closed", 1200),
            ev("VerbalAlertness", "Absent", 100),
        ]
        rng = random.Random(7)
        reference = None
        for _ in range(30):
            order = items[:]
            rng.shuffle(order)
            after = ledger
            for item in order:
                after = ingest(after, item)
            snapshot = {v: (e.state, e.source, e.timestamp_ms) for v, e in after.accepted.items()}
            labels = assess(after, spec, now=2000).labels()
            if reference is None:
                reference = (snapshot, labels)
            assert (snapshot, labels) == reference

    def test_accepts_predicts_ingest(self, ledger):
        after = ingest(ledger, ev("HeadTrauma", "Wound", 1000))
        winner = ev("HeadTrauma", "Normal", 2000)
        loser = ev("HeadTrauma", "Normal", 500)
        assert accepts(after, winner)
        assert not accepts(after, loser)
        assert ingest(after, winner).accepted["HeadTrauma"].state == "Normal"
        assert ingest(after, loser).accepted["HeadTrauma"].state == "Wound"

    def test_accepts_is_true_on_empty_slot(self, ledger):
        assert accepts(ledger, ev("HeadTrauma", "Wound", 0))


class TestEvidenceValidation:
    def test_unknown_vital(self, ledger):
        with pytest.raises(UnknownVitalError) as info:
            ingest(ledger, ev("PulseRate", "Weak", 0))
        assert info.value.code == "UNKNOWN_VITAL"

    def test_invalid_state(self, ledger):
        with pytest.raises(InvalidStateError) as info:
            ingest(ledger, ev("HeadTrauma", "Crushed", 0))
        assert info.value.code == "INVALID_STATE"

    def test_accepts_applies_the_same_checks(self, ledger):
        with pytest.raises(UnknownVitalError):
            accepts(ledger, ev("PulseRate", "Weak", 0))
        with pytest.raises(InvalidStateError):
            accepts(ledger, ev("HeadTrauma", "Crushed", 0))

    def test_negative_timestamp_is_rejected_at_construction(self):
        with pytest.raises(ValueError, match="timestamp_ms"):
            ev("HeadTrauma", "Wound", -1)


class TestAssess:
    def test_empty_ledger_reports_all_nine_vitals(self, ledger, spec):
        report = assess(ledger, spec, now=0)
        assert isinstance(report, AssessmentReport)
        assert tuple(v.vital for v in report.vitals) == VITAL_FIELDS
        assert all(v.provenance == INFERRED for v in report.vitals)
        assert report.labels() == HEALTHY
        assert report.casualty_id == "c01"
        assert report.report_timestamp_ms == 0
        assert report.model_version == spec.version

    def test_observed_vitals_pass_through_verbatim(self, ledger, spec):
        after = ingest(ledger, ev("HeadTrauma", "Wound", 1000))
        report = assess(after, spec, now=1000)
        head = report.entry("HeadTrauma")
        assert head.provenance == OBSERVED
        assert head.state == "Wound"
        assert head.distribution == (1.0, 0.0)

    def test_head_wound_flips_inferred_eyes_to_closed(self, ledger, spec):
        after = ingest(ledger, ev("HeadTrauma", "Wound", 1000))
        ocular = assess(after, spec, now=1000).entry("OcularAlertness")
        assert ocular.provenance == INFERRED
        assert ocular.state == "Closed"
        assert ocular.distribution == pytest.approx((0.25, 0.70, 0.05), abs=1e-12)

    def test_fully_observed_casualty(self, ledger, spec):
        wounded = dict(
            HEALTHY,
            HeadTrauma="Wound",
            LowerExtTrauma="Amputation",
            SevereHemorrhage="Present",
            OcularAlertness="NT",
        )
        after = ledger
        for i, (vital, state) in enumerate(wounded.items()):
            after = ingest(after, ev(vital, state, 1000 + i))
        report = assess(after, spec, now=2000)
        assert report.labels() == wounded
        for entry in report.vitals:
            assert entry.provenance == OBSERVED
            point = spec.node(entry.vital).state_index(entry.state)
            expected = tuple(1.0 if i == point else 0.0 for i in range(len(entry.distribution)))
            assert entry.distribution == expected

    def test_distributions_are_normalized(self, ledger, spec):
        after = ingest(ledger, ev("TorsoTrauma", "Wound", 10))
        for entry in assess(after, spec, now=10).vitals:
            assert sum(entry.distribution) == pytest.approx(1.0, abs=1e-9)
            assert all(0.0 <= p <= 1.0 for p in entry.distribution)

    def test_to_obj_shape(self, ledger, spec):
        after = ingest(ledger, ev("HeadTrauma", "Wound", 1000))
        obj = assess(after, spec, now=1500).to_obj()
        assert obj["casualty_id"] == "c01"
        assert obj["report_timestamp_ms"] == 1500
        assert obj["model_version"] == spec.version
        assert set(obj["vitals"]) == set(VITAL_FIELDS)
        head = obj["vitals"]["HeadTrauma"]
        assert head == {
            "state": "Wound",
            "provenance": OBSERVED,
            "distribution": [1.0, 0.0],
        }

    def test_entry_raises_for_unknown_vital(self, ledger, spec):
        with pytest.raises(KeyError):
            assess(ledger, spec, now=0).entry("PulseRate")

    def test_contradictory_evidence_withholds_the_report(self):
        text = """{
  "name": "n", "version": "1",
  "nodes": [
    {"name": "A", "states": ["a0", "a1"], "parents": [], "cpt": [[1.0, 0.0]]}
  ]
}"""
        spec = parse_network(text)
        led = EvidenceLedger(network=spec, casualty_id="x")
        led = ingest(led, Evidence("x", "A", "a1", "vision", 0))
        with pytest.raises(ImpossibleEvidenceError) as info:
            assess(led, spec, now=0)
        assert info.value.code == "IMPOSSIBLE_EVIDENCE"


class TestWhatif:
    def test_empty_overlay_matches_plain_assessment(self, ledger, spec):
        base = ingest(ledger, ev("TorsoTrauma", "Wound", 100))
        plain = assess(base, spec, now=200)
        overlaid = assess_whatif(base, [], spec, now=200)
        assert overlaid == plain

    def test_overlay_does_not_touch_the_base(self, ledger, spec):
        hypothetical = assess_whatif(
            ledger, [ev("LowerExtTrauma", "Amputation", 1, source="whatif")], spec, now=1
        )
        assert hypothetical.entry("SevereHemorrhage").state == "Present"
        assert ledger.accepted == {}
        assert assess(ledger, spec, now=1).labels() == HEALTHY

    def test_overlay_overrides_older_base_evidence(self, ledger, spec):
        base = ingest(ledger, ev("LowerExtTrauma", "Normal", 5000))
        overlaid = assess_whatif(
            base, [ev("LowerExtTrauma", "Amputation", 6000, source="whatif")], spec, now=6000
        )
        assert overlaid.entry("LowerExtTrauma").state == "Amputation"
        assert overlaid.entry("SevereHemorrhage").state == "Present"
        assert assess(base, spec, now=6000).entry("SevereHemorrhage").state == "Absent"

    def test_restating_accepted_evidence_changes_nothing(self, ledger, spec):
        base = ingest(ledger, ev("HeadTrauma", "Wound", 1000))
        again = assess_whatif(
            base, [ev("HeadTrauma", "Wound", 1000)], spec, now=1000
        )
        assert again.labels() == assess(base, spec, now=1000).labels()

    def test_stale_overlay_loses_to_the_base(self, ledger, spec):
        base = ingest(ledger, ev("HeadTrauma", "Normal", 9000, source="zeta"))
        overlaid = assess_whatif(
            base, [ev("HeadTrauma", "Wound", 100, source="whatif")], spec, now=9000
        )
        assert overlaid.entry("HeadTrauma").state == "Normal"


class TestObservedLabels:
    def test_empty(self, ledger):
        assert observed_labels(ledger) == {}

    def test_reflects_accepted_only(self, ledger):
        after = ingest(ledger, ev("HeadTrauma", "Wound", 1000))
        after = ingest(after, ev("HeadTrauma", "Normal", 2000))
        after = ingest(after, ev("TorsoTrauma", "Wound", 500))
        assert observed_labels(after) == {
            "HeadTrauma": "Normal",
            "TorsoTrauma": "Wound",
        }
