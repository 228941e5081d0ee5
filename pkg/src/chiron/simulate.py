"""Timed mission simulation, rubric scoring, and rollup metrics.

A scenario fixes ground truth for each casualty plus a discovery time; a
sensor model emulates flaky perception (per-vital detection probability,
label confusion, reporting latency). ``run_mission`` replays the emitted
evidence through the fusion ledger and scores the end-of-mission reports
two ways:

* vision mode reports only what was directly observed;
* fused mode always reports all nine vitals, filling gaps by inference.

Scoring follows the competition rubric: the two critical binaries earn 4
when correct inside the golden window and 2 when correct after it; the four
trauma locations and three alertness modalities score as groups (2 all
correct, 1 for at least two correct). A casualty caps at 12 points.

Rollup metrics over all casualty-vital pairs:
reliability = attempts / possible, accuracy = correct / attempts,
performance = correct / possible.

Everything here is deterministic given (scenario, sensor model, mode):
mission logs are byte-identical across runs and serve as regression
fixtures.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Mapping, Sequence

import numpy as np

from .fusion import (
    AssessmentReport,
    Evidence,
    EvidenceLedger,
    assess,
    ingest,
    observed_labels,
)
from .network import NetworkSpec, sample_with_rng, state_labels
from .triage import ALERTNESS_FIELDS, TRAUMA_FIELDS, VITAL_FIELDS, VITAL_STATES

CONFUSION_ROW_TOLERANCE = 1e-9

# Default mission shape: 30 minutes, golden window = first half.
DEFAULT_MISSION_DURATION_MS = 30 * 60 * 1000
DEFAULT_GOLDEN_WINDOW_END_MS = DEFAULT_MISSION_DURATION_MS // 2
DEFAULT_CASUALTY_COUNT = 11


class Mode(str, Enum):
    VISION_ONLY = "vision"
    FUSED = "fused"


class ScenarioFormatError(ValueError):
    """Scenario or sensor file is malformed."""


@dataclass(frozen=True)
class GroundTruth:
    """True value of all nine vitals for one casualty."""

    casualty_id: str
    vitals: Mapping[str, str]

    def __post_init__(self) -> None:
        for vital in VITAL_FIELDS:
            if vital not in self.vitals:
                raise ValueError(f"ground truth for {self.casualty_id!r} missing {vital}")
            label = self.vitals[vital]
            if label not in VITAL_STATES[vital]:
                raise ValueError(
                    f"ground truth for {self.casualty_id!r}: {label!r} is not a "
                    f"state of {vital}"
                )
        extra = set(self.vitals) - set(VITAL_FIELDS)
        if extra:
            raise ValueError(f"unknown vitals in ground truth: {sorted(extra)}")


@dataclass(frozen=True)
class CasualtyCase:
    truth: GroundTruth
    discovery_ms: int


@dataclass(frozen=True)
class Scenario:
    name: str
    mission_duration_ms: int
    golden_window_end_ms: int
    casualties: tuple[CasualtyCase, ...]

    def __post_init__(self) -> None:
        if not 0 < self.golden_window_end_ms <= self.mission_duration_ms:
            raise ValueError("golden window must end inside the mission")
        ids = [c.truth.casualty_id for c in self.casualties]
        if len(set(ids)) != len(ids):
            raise ValueError("duplicate casualty ids")
        for case in self.casualties:
            if not 0 <= case.discovery_ms <= self.mission_duration_ms:
                raise ValueError(
                    f"discovery time for {case.truth.casualty_id!r} outside mission"
                )

    def case(self, casualty_id: str) -> CasualtyCase:
        for c in self.casualties:
            if c.truth.casualty_id == casualty_id:
                return c
        raise KeyError(casualty_id)


@dataclass
class SensorModel:
    """Emulated perception: detection odds, label confusion, latency."""

    detection: dict[str, float]
    confusion: dict[str, np.ndarray]
    latency_min_ms: int = 0
    latency_max_ms: int = 0
    seed: int = 0

    def __post_init__(self) -> None:
        for vital in VITAL_FIELDS:
            if vital not in self.detection:
                raise ValueError(f"sensor model missing detection for {vital}")
            p = self.detection[vital]
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"detection probability for {vital} outside [0, 1]")
            matrix = np.asarray(self.confusion[vital], dtype=np.float64)
            k = len(VITAL_STATES[vital])
            if matrix.shape != (k, k):
                raise ValueError(f"confusion matrix for {vital} must be {k}x{k}")
            for i, row in enumerate(matrix):
                if not math.isclose(
                    float(row.sum()), 1.0, rel_tol=0.0, abs_tol=CONFUSION_ROW_TOLERANCE
                ):
                    raise ValueError(f"confusion row {i} for {vital} does not sum to 1")
            self.confusion[vital] = matrix
        if not 0 <= self.latency_min_ms <= self.latency_max_ms:
            raise ValueError("latency bounds must satisfy 0 <= min <= max")

    @classmethod
    def uniform(
        cls,
        detection: float,
        label_noise: float = 0.0,
        latency_ms: tuple[int, int] = (0, 0),
        seed: int = 0,
    ) -> "SensorModel":
        """Same detection probability everywhere; confusion spreads
        ``label_noise`` mass evenly over the wrong labels."""
        detection_map = {vital: detection for vital in VITAL_FIELDS}
        confusion = {}
        for vital in VITAL_FIELDS:
            k = len(VITAL_STATES[vital])
            off = label_noise / (k - 1)
            matrix = np.full((k, k), off)
            np.fill_diagonal(matrix, 1.0 - label_noise)
            confusion[vital] = matrix
        return cls(
            detection=detection_map,
            confusion=confusion,
            latency_min_ms=latency_ms[0],
            latency_max_ms=latency_ms[1],
            seed=seed,
        )


@dataclass(frozen=True)
class ReportedLabels:
    """What a system claimed about one casualty, and when."""

    casualty_id: str
    labels: Mapping[str, str]
    timestamp_ms: int


@dataclass(frozen=True)
class CasualtyScore:
    casualty_id: str
    hemorrhage_points: int = 0
    respiratory_points: int = 0
    trauma_points: int = 0
    alertness_points: int = 0
    correct: int = 0
    attempts: int = 0

    @property
    def total(self) -> int:
        return (
            self.hemorrhage_points
            + self.respiratory_points
            + self.trauma_points
            + self.alertness_points
        )


@dataclass(frozen=True)
class ScoreCard:
    entries: tuple[CasualtyScore, ...]
    total: int
    max_possible: int
    correct: int
    attempts: int
    possible: int
    reliability: float
    accuracy: float
    performance: float


def _as_reported(report) -> ReportedLabels | None:
    if report is None:
        return None
    if isinstance(report, AssessmentReport):
        return ReportedLabels(
            report.casualty_id, report.labels(), report.report_timestamp_ms
        )
    if isinstance(report, ReportedLabels):
        return report
    raise TypeError(f"cannot score {type(report).__name__}")


def _binary_points(reported: str | None, truth: str, ts: int, gw_end: int) -> int:
    if reported != truth:
        return 0
    return 4 if ts <= gw_end else 2


def _group_points(
    fields: Sequence[str], labels: Mapping[str, str], truth: Mapping[str, str]
) -> int:
    matches = sum(1 for f in fields if labels.get(f) == truth[f])
    if matches == len(fields):
        return 2
    if matches >= 2:
        return 1
    return 0


def score_casualty(report, gt: GroundTruth, gw_end: int) -> CasualtyScore:
    """Rubric points for one casualty; an absent report scores zero.

    Unreported vitals count as non-matches inside their group and are not
    counted as attempts.
    """
    reported = _as_reported(report)
    if reported is None:
        return CasualtyScore(casualty_id=gt.casualty_id)
    labels = reported.labels
    ts = reported.timestamp_ms
    correct = sum(1 for f in VITAL_FIELDS if labels.get(f) == gt.vitals[f])
    attempts = sum(1 for f in VITAL_FIELDS if f in labels)
    return CasualtyScore(
        casualty_id=gt.casualty_id,
        hemorrhage_points=_binary_points(
            labels.get("SevereHemorrhage"), gt.vitals["SevereHemorrhage"], ts, gw_end
        ),
        respiratory_points=_binary_points(
            labels.get("RespiratoryDistress"),
            gt.vitals["RespiratoryDistress"],
            ts,
            gw_end,
        ),
        trauma_points=_group_points(TRAUMA_FIELDS, labels, gt.vitals),
        alertness_points=_group_points(ALERTNESS_FIELDS, labels, gt.vitals),
        correct=correct,
        attempts=attempts,
    )


def metrics(correct: int, attempts: int, possible: int) -> tuple[float, float, float]:
    """(reliability, accuracy, performance) over casualty-vital pairs."""
    if not 0 <= correct <= attempts <= possible:
        raise ValueError("need 0 <= correct <= attempts <= possible")
    if possible <= 0:
        raise ValueError("possible must be positive")
    reliability = attempts / possible
    accuracy = correct / attempts if attempts else 0.0
    performance = correct / possible
    return reliability, accuracy, performance


def format_metrics(reliability: float, accuracy: float, performance: float) -> str:
    """Rollup rendering: reliability to 2 decimals, rates as percentages."""
    return (
        f"{reliability:.2f} / {round(accuracy * 100):.0f}% / "
        f"{round(performance * 100):.0f}%"
    )


def aggregate_scores(
    entries: Iterable[CasualtyScore], casualty_count: int
) -> ScoreCard:
    """Mission rollup from per-casualty entries."""
    entries = tuple(entries)
    total = sum(e.total for e in entries)
    correct = sum(e.correct for e in entries)
    attempts = sum(e.attempts for e in entries)
    possible = len(VITAL_FIELDS) * casualty_count
    reliability, accuracy, performance = metrics(correct, attempts, possible)
    return ScoreCard(
        entries=entries,
        total=total,
        max_possible=12 * casualty_count,
        correct=correct,
        attempts=attempts,
        possible=possible,
        reliability=reliability,
        accuracy=accuracy,
        performance=performance,
    )


def score_mission(reports: Mapping[str, object], scenario: Scenario) -> ScoreCard:
    """Score every scenario casualty against its (possibly absent) report."""
    known = {c.truth.casualty_id for c in scenario.casualties}
    unknown = set(reports) - known
    if unknown:
        raise ValueError(f"reports for unknown casualties: {sorted(unknown)}")
    entries = [
        score_casualty(
            reports.get(case.truth.casualty_id),
            case.truth,
            scenario.golden_window_end_ms,
        )
        for case in scenario.casualties
    ]
    return aggregate_scores(entries, len(scenario.casualties))


# ---------------------------------------------------------------------------
# Sensor emulation
# ---------------------------------------------------------------------------


def _sample_index(rng: np.random.Generator, probabilities: np.ndarray) -> int:
    cum = np.cumsum(probabilities)
    return min(int(np.searchsorted(cum, rng.random(), side="right")), len(cum) - 1)


def emit_observations(
    truth: GroundTruth,
    model: SensorModel,
    discovery_ms: int,
    seed: int | np.random.SeedSequence,
) -> list[Evidence]:
    """Emulated perception output for one casualty, time-ordered.

    At most one observation per vital: detection is a coin flip, the label
    is drawn from the confusion row of the true state, and the timestamp is
    discovery plus a uniform latency. Reproducible for a fixed seed.
    """
    rng = np.random.default_rng(seed)
    out: list[Evidence] = []
    for vital in VITAL_FIELDS:
        if rng.random() >= model.detection[vital]:
            continue
        latency = int(rng.integers(model.latency_min_ms, model.latency_max_ms + 1))
        states = VITAL_STATES[vital]
        true_idx = states.index(truth.vitals[vital])
        label_idx = _sample_index(rng, model.confusion[vital][true_idx])
        out.append(
            Evidence(
                casualty_id=truth.casualty_id,
                vital=vital,
                state=states[label_idx],
                source=f"vision-{vital.lower()}",
                timestamp_ms=discovery_ms + latency,
            )
        )
    out.sort(key=lambda e: e.timestamp_ms)
    return out


# ---------------------------------------------------------------------------
# Mission runner
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MissionLog:
    """Deterministic, line-delimited record of one mission run."""

    records: tuple[dict, ...] = ()

    def to_text(self) -> str:
        return "".join(
            json.dumps(r, separators=(",", ":")) + "\n" for r in self.records
        )

    @classmethod
    def from_text(cls, text: str) -> "MissionLog":
        records = []
        for i, line in enumerate(text.splitlines()):
            if not line.strip():
                continue
            try:
                records.append(json.loads(line))
            except json.JSONDecodeError as exc:
                raise ScenarioFormatError(f"log line {i + 1}: {exc.msg}") from None
        return cls(tuple(records))

    def of_kind(self, kind: str) -> list[dict]:
        return [r for r in self.records if r.get("kind") == kind]


def _evidence_record(e: Evidence) -> dict:
    return {
        "t_ms": e.timestamp_ms,
        "kind": "evidence",
        "casualty_id": e.casualty_id,
        "vital": e.vital,
        "state": e.state,
        "source": e.source,
    }


def _report_record(reported: ReportedLabels, mode: Mode, report=None) -> dict:
    if isinstance(report, AssessmentReport):
        vitals = {
            v.vital: {
                "state": v.state,
                "provenance": v.provenance,
                "p": list(v.distribution),
            }
            for v in report.vitals
        }
    else:
        vitals = {vital: {"state": state} for vital, state in reported.labels.items()}
    return {
        "t_ms": reported.timestamp_ms,
        "kind": "report",
        "casualty_id": reported.casualty_id,
        "mode": mode.value,
        "vitals": vitals,
    }


def _score_record(score: CasualtyScore, t_ms: int) -> dict:
    return {
        "t_ms": t_ms,
        "kind": "score",
        "casualty_id": score.casualty_id,
        "hemorrhage": score.hemorrhage_points,
        "respiratory": score.respiratory_points,
        "trauma": score.trauma_points,
        "alertness": score.alertness_points,
        "total": score.total,
        "correct": score.correct,
        "attempts": score.attempts,
    }


def run_mission(
    scenario: Scenario,
    model: SensorModel,
    mode: Mode,
    spec: NetworkSpec,
) -> tuple[MissionLog, ScoreCard]:
    """Run one mission end to end and score it.

    Evidence that would arrive after mission end is lost. The per-casualty
    report timestamp is the time of its last accepted evidence (discovery
    time when nothing was observed), identical in both modes so the mode
    comparison isolates inference quality rather than timing.
    """
    mode = Mode(mode)
    per_casualty: dict[str, list[Evidence]] = {}
    for idx, case in enumerate(scenario.casualties):
        stream = np.random.SeedSequence([_nonnegative(model.seed), idx])
        observations = emit_observations(case.truth, model, case.discovery_ms, stream)
        per_casualty[case.truth.casualty_id] = [
            e for e in observations if e.timestamp_ms <= scenario.mission_duration_ms
        ]

    all_evidence = sorted(
        (e for items in per_casualty.values() for e in items),
        key=lambda e: (e.timestamp_ms, e.casualty_id, e.vital),
    )

    ledgers = {
        case.truth.casualty_id: EvidenceLedger(spec, case.truth.casualty_id)
        for case in scenario.casualties
    }
    records = [_evidence_record(e) for e in all_evidence]
    for e in all_evidence:
        ledgers[e.casualty_id] = ingest(ledgers[e.casualty_id], e)

    reports: dict[str, ReportedLabels | AssessmentReport] = {}
    for case in scenario.casualties:
        cid = case.truth.casualty_id
        ledger = ledgers[cid]
        ts = ledger.last_timestamp()
        if ts is None:
            ts = case.discovery_ms
        if mode is Mode.FUSED:
            report = assess(ledger, spec, now=ts)
            reports[cid] = report
            records.append(
                _report_record(_as_reported(report), mode, report=report)
            )
        else:
            labels = observed_labels(ledger)
            if labels:
                reported = ReportedLabels(cid, labels, ts)
                reports[cid] = reported
                records.append(_report_record(reported, mode))

    card = score_mission(reports, scenario)
    records.extend(
        _score_record(entry, scenario.mission_duration_ms) for entry in card.entries
    )
    records.sort(key=lambda r: (r["t_ms"], r["kind"], r["casualty_id"]))
    return MissionLog(tuple(records)), card


def _nonnegative(seed: int) -> int:
    if seed < 0:
        raise ValueError("sensor seed must be >= 0")
    return seed


def score_from_log(log: MissionLog, scenario: Scenario) -> ScoreCard:
    """Re-score a finished mission from its log's report records."""
    reports: dict[str, ReportedLabels] = {}
    for record in log.of_kind("report"):
        cid = record["casualty_id"]
        labels = {vital: info["state"] for vital, info in record["vitals"].items()}
        reports[cid] = ReportedLabels(cid, labels, record["t_ms"])
    return score_mission(reports, scenario)


# ---------------------------------------------------------------------------
# Scenario files
# ---------------------------------------------------------------------------


def generate_scenario(
    spec: NetworkSpec,
    casualty_count: int = DEFAULT_CASUALTY_COUNT,
    mission_duration_ms: int = DEFAULT_MISSION_DURATION_MS,
    golden_window_end_ms: int = DEFAULT_GOLDEN_WINDOW_END_MS,
    seed: int = 0,
    name: str = "generated",
) -> Scenario:
    """Sample casualty ground truths from the model itself.

    Discovery times spread uniformly over the first 60% of the mission so
    late casualties still leave room for sensor latency.
    """
    rng = np.random.default_rng(seed)
    cases = []
    horizon = int(mission_duration_ms * 0.6)
    for i in range(casualty_count):
        assignment = sample_with_rng(spec, rng)
        vitals = state_labels(spec, assignment)
        discovery = int(rng.integers(0, horizon + 1))
        cases.append(
            CasualtyCase(
                truth=GroundTruth(casualty_id=f"c{i + 1:02d}", vitals=vitals),
                discovery_ms=discovery,
            )
        )
    return Scenario(
        name=name,
        mission_duration_ms=mission_duration_ms,
        golden_window_end_ms=golden_window_end_ms,
        casualties=tuple(cases),
    )


def parse_scenario(text: str) -> Scenario:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioFormatError(
            f"line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from None
    try:
        cases = []
        for raw in obj["casualties"]:
            vitals = {v: raw[v] for v in VITAL_FIELDS if v in raw}
            cases.append(
                CasualtyCase(
                    truth=GroundTruth(casualty_id=raw["id"], vitals=vitals),
                    discovery_ms=int(raw["discovery_ms"]),
                )
            )
        return Scenario(
            name=obj["name"],
            mission_duration_ms=int(obj["mission_duration_ms"]),
            golden_window_end_ms=int(obj["golden_window_end_ms"]),
            casualties=tuple(cases),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ScenarioFormatError(f"bad scenario file: {exc}") from None


def serialize_scenario(scenario: Scenario) -> str:
    obj = {
        "name": scenario.name,
        "mission_duration_ms": scenario.mission_duration_ms,
        "golden_window_end_ms": scenario.golden_window_end_ms,
        "casualties": [
            {
                "id": case.truth.casualty_id,
                "discovery_ms": case.discovery_ms,
                **{vital: case.truth.vitals[vital] for vital in VITAL_FIELDS},
            }
            for case in scenario.casualties
        ],
    }
    return json.dumps(obj, indent=2) + "\n"


def parse_sensor_model(text: str) -> SensorModel:
    """Sensor file: ``seed``, ``detection`` (number or per-vital map),
    ``label_noise``, optional per-vital ``confusion`` override, and
    ``latency_ms`` with ``min``/``max``."""
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioFormatError(
            f"line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from None
    try:
        detection = obj.get("detection", 1.0)
        noise = float(obj.get("label_noise", 0.0))
        latency = obj.get("latency_ms", {})
        model = SensorModel.uniform(
            detection=1.0,
            label_noise=noise,
            latency_ms=(int(latency.get("min", 0)), int(latency.get("max", 0))),
            seed=int(obj.get("seed", 0)),
        )
        if isinstance(detection, dict):
            for vital, p in detection.items():
                if vital not in model.detection:
                    raise ScenarioFormatError(f"unknown vital {vital!r} in detection")
                model.detection[vital] = float(p)
        else:
            for vital in model.detection:
                model.detection[vital] = float(detection)
        for vital, rows in obj.get("confusion", {}).items():
            if vital not in model.confusion:
                raise ScenarioFormatError(f"unknown vital {vital!r} in confusion")
            model.confusion[vital] = np.asarray(rows, dtype=np.float64)
        return SensorModel(
            detection=model.detection,
            confusion=model.confusion,
            latency_min_ms=model.latency_min_ms,
            latency_max_ms=model.latency_max_ms,
            seed=model.seed,
        )
    except ScenarioFormatError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ScenarioFormatError(f"bad sensor file: {exc}") from None


def serialize_sensor_model(model: SensorModel) -> str:
    obj = {
        "seed": model.seed,
        "detection": {vital: model.detection[vital] for vital in VITAL_FIELDS},
        "confusion": {
            vital: model.confusion[vital].tolist() for vital in VITAL_FIELDS
        },
        "latency_ms": {"min": model.latency_min_ms, "max": model.latency_max_ms},
    }
    return json.dumps(obj, indent=2) + "\n"
