"""Command-line front end: validate, serve, simulate, score, replay.

Exit codes: 0 success, 1 content failure (model or scenario invalid,
rejected evidence on replay), 2 I/O failure (unreadable file, unreachable
server).
"""

from __future__ import annotations

import argparse
import json
import sys

from .network import (
    ModelFormatError,
    ModelValidationError,
    parse_network,
)
from .simulate import (
    Mode,
    MissionLog,
    ScenarioFormatError,
    format_metrics,
    parse_scenario,
    parse_sensor_model,
    run_mission,
    score_from_log,
)
from .triage import default_network, parse_annotations, validate_convention

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_IO = 2


class CliError(Exception):
    def __init__(self, exit_code: int, message: str):
        super().__init__(message)
        self.exit_code = exit_code


def _read_text(path: str) -> str:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return handle.read()
    except OSError as exc:
        raise CliError(EXIT_IO, f"cannot read {path}: {exc.strerror or exc}") from None


def _write_text(path: str, text: str) -> None:
    try:
        with open(path, "w", encoding="utf-8") as handle:
            handle.write(text)
    except OSError as exc:
        raise CliError(EXIT_IO, f"cannot write {path}: {exc.strerror or exc}") from None


def _load_model(path: str | None):
    if path is None:
        return default_network()
    text = _read_text(path)
    try:
        return parse_network(text)
    except ModelFormatError as exc:
        raise CliError(EXIT_INVALID, f"{path}: {exc}") from None
    except ModelValidationError as exc:
        lines = "\n".join(f"  {v}" for v in exc.violations)
        raise CliError(EXIT_INVALID, f"{path}: invalid network\n{lines}") from None


def _load_scenario(path: str):
    try:
        return parse_scenario(_read_text(path))
    except ScenarioFormatError as exc:
        raise CliError(EXIT_INVALID, f"{path}: {exc}") from None
    except ValueError as exc:
        raise CliError(EXIT_INVALID, f"{path}: {exc}") from None


def _cmd_validate(args) -> int:
    spec = _load_model(args.model_file)
    if args.annotations:
        annotations = parse_annotations(_read_text(args.annotations))
        violations = validate_convention(spec, annotations)
        if violations:
            for violation in violations:
                print(violation, file=sys.stderr)
            return EXIT_INVALID
    print(f"ok: {spec.name} {spec.version} ({len(spec.nodes)} nodes)")
    return EXIT_OK


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(_load_model(args.model), golden_window_end_ms=args.golden_window_ms)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return EXIT_OK


def _scorecard_lines(card) -> list[str]:
    lines = []
    for entry in card.entries:
        lines.append(
            f"{entry.casualty_id}  hemorrhage={entry.hemorrhage_points} "
            f"respiratory={entry.respiratory_points} trauma={entry.trauma_points} "
            f"alertness={entry.alertness_points} total={entry.total}"
        )
    lines.append(
        f"score {card.total}/{card.max_possible}  "
        f"correct/attempts/possible {card.correct}/{card.attempts}/{card.possible}  "
        f"reliability/accuracy/performance "
        f"{format_metrics(card.reliability, card.accuracy, card.performance)}"
    )
    return lines


def _cmd_simulate(args) -> int:
    scenario = _load_scenario(args.scenario)
    try:
        sensor = parse_sensor_model(_read_text(args.sensor))
    except ScenarioFormatError as exc:
        raise CliError(EXIT_INVALID, f"{args.sensor}: {exc}") from None
    if args.seed is not None:
        sensor.seed = args.seed
    spec = _load_model(args.model)
    log, card = run_mission(scenario, sensor, Mode(args.mode), spec)
    _write_text(args.out, log.to_text())
    for line in _scorecard_lines(card):
        print(line)
    return EXIT_OK


def _cmd_score(args) -> int:
    scenario = _load_scenario(args.scenario)
    try:
        log = MissionLog.from_text(_read_text(args.log))
        card = score_from_log(log, scenario)
    except (ScenarioFormatError, KeyError, ValueError) as exc:
        raise CliError(EXIT_INVALID, f"{args.log}: {exc}") from None
    for line in _scorecard_lines(card):
        print(line)
    return EXIT_OK


def _cmd_replay(args) -> int:
    import httpx

    log = MissionLog.from_text(_read_text(args.log))
    base = args.url.rstrip("/")
    counts = {"accepted": 0, "superseded": 0, "rejected": 0}
    try:
        with httpx.Client(timeout=10.0) as client:
            for record in log.of_kind("evidence"):
                response = client.post(
                    f"{base}/api/casualties/{record['casualty_id']}/evidence",
                    json={
                        "vital": record["vital"],
                        "state": record["state"],
                        "source": record["source"],
                        "timestamp_ms": record["t_ms"],
                    },
                )
                if response.status_code == 200:
                    counts[response.json()["status"]] += 1
                else:
                    counts["rejected"] += 1
    except httpx.HTTPError as exc:
        raise CliError(EXIT_IO, f"replay to {args.url} failed: {exc}") from None
    total = sum(counts.values())
    print(
        f"replayed {total} evidence records: {counts['accepted']} accepted, "
        f"{counts['superseded']} superseded, {counts['rejected']} rejected"
    )
    return EXIT_OK if counts["rejected"] == 0 else EXIT_INVALID


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chiron",
        description="Evidence-fusion triage engine: validate models, serve "
        "the fusion API, and run or score simulated missions.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a network file")
    p.add_argument("model_file")
    p.add_argument(
        "--annotations", help="also lint CPT values against strength-band annotations"
    )
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("serve", help="run the fusion API server")
    p.add_argument("--model", help="network file (default: bundled model)")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument(
        "--golden-window-ms",
        type=int,
        help="golden-window end to advertise to clients (mission clock ms)",
    )
    p.set_defaults(func=_cmd_serve)

    p = sub.add_parser("simulate", help="run a scored mission")
    p.add_argument("--scenario", required=True)
    p.add_argument("--sensor", required=True)
    p.add_argument(
        "--mode", choices=[m.value for m in Mode], default=Mode.FUSED.value
    )
    p.add_argument("--seed", type=int, help="override the sensor file's seed")
    p.add_argument("--model", help="network file (default: bundled model)")
    p.add_argument("--out", required=True, help="mission log destination")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("score", help="re-score a mission log")
    p.add_argument("--log", required=True)
    p.add_argument("--scenario", required=True)
    p.set_defaults(func=_cmd_score)

    p = sub.add_parser("replay", help="feed a mission log's evidence to a live server")
    p.add_argument("--log", required=True)
    p.add_argument("--url", required=True, help="server base URL")
    p.set_defaults(func=_cmd_replay)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"chiron: {exc}", file=sys.stderr)
        return exc.exit_code
    except json.JSONDecodeError as exc:
        print(f"chiron: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
