"""Command-line entry point.

Subcommands: run (simulate + detect, write artifacts), table1 (theory vs
simulation comparison), latency (seeded detection-latency campaign), replay
(detector over a recorded trace). Scenarios come from named presets, a JSON
config file, or flag overrides; see the README for the config schema.
"""
from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from pathlib import Path

from . import harness, presets
from .detector import DetectorConfig, GnbState
from .events import EstablishmentCause
from .simnet import GnbConfig, ScenarioKind, ScenarioSpec, TruncatedPoissonSpec


def _scenario_from_dict(data: dict) -> ScenarioSpec:
    if "background" in data and data["background"] is not None:
        data = dict(data, background=TruncatedPoissonSpec(**data["background"]))
    if "kind" in data:
        data = dict(data, kind=ScenarioKind(data["kind"]))
    if "attacker_cause" in data:
        data = dict(data, attacker_cause=EstablishmentCause(data["attacker_cause"]))
    return ScenarioSpec(**data)


def load_config_file(path: Path) -> tuple[ScenarioSpec, GnbConfig, DetectorConfig]:
    """JSON config: {"scenario": {...}, "gnb": {...}, "detector": {...}}."""
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    scenario = _scenario_from_dict(data["scenario"])
    gnb = GnbConfig(**data.get("gnb", {}))
    detector = DetectorConfig(**data.get("detector", {}))
    return scenario, gnb, detector


def _resolve(args: argparse.Namespace, seed: int,
             ) -> tuple[ScenarioSpec, GnbConfig, DetectorConfig]:
    if args.scenario in presets.PRESET_NAMES:
        scenario = presets.scenario_from_preset(args.scenario, seed)
        gnb = presets.default_gnb()
        detector = presets.default_detector()
    else:
        path = Path(args.scenario)
        if not path.exists():
            raise SystemExit(
                f"unknown scenario {args.scenario!r}: not a preset "
                f"({', '.join(presets.PRESET_NAMES)}) and no such file")
        scenario, gnb, detector = load_config_file(path)
        scenario = dataclasses.replace(scenario, seed=seed)

    gnb_overrides = {}
    if args.capacity is not None:
        gnb_overrides["capacity"] = args.capacity
    if args.waiting_time_ms is not None:
        gnb_overrides["waiting_time_ms"] = args.waiting_time_ms
    if gnb_overrides:
        gnb = dataclasses.replace(gnb, **gnb_overrides)

    scenario_overrides = {}
    if args.attack_rate is not None:
        scenario_overrides["attacker_rate_per_s"] = args.attack_rate
    if args.occupancy_pct is not None:
        scenario_overrides["preconnected_bue"] = round(
            gnb.capacity * args.occupancy_pct / 100)
    if scenario_overrides:
        scenario = dataclasses.replace(scenario, **scenario_overrides)

    detector_overrides = {}
    if args.window_ms is not None:
        detector_overrides["window_ms"] = args.window_ms
    if args.hop_ms is not None:
        detector_overrides["hop_ms"] = args.hop_ms
    if args.watermark is not None:
        detector_overrides["msg3_watermark"] = args.watermark
    if detector_overrides:
        detector = dataclasses.replace(detector, **detector_overrides)
    return scenario, gnb, detector


def _experiment(args: argparse.Namespace) -> harness.ExperimentConfig:
    seeds = list(range(args.seed, args.seed + args.reps))
    scenario, gnb, detector = _resolve(args, args.seed)
    name = args.scenario if args.scenario in presets.PRESET_NAMES else Path(args.scenario).stem
    return harness.ExperimentConfig(
        name=name, scenario=scenario, gnb=gnb, detector=detector,
        seeds=seeds, out_dir=Path(args.out))


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--scenario", default="paper-attack-0",
                        help="preset name or JSON config file "
                             f"(presets: {', '.join(presets.PRESET_NAMES)})")
    parser.add_argument("--capacity", type=int, help="gNB UE-context capacity")
    parser.add_argument("--waiting-time-ms", type=int, help="pending-context hold time")
    parser.add_argument("--attack-rate", type=float, help="attacker Msg3 rate per second")
    parser.add_argument("--occupancy-pct", type=int,
                        help="percent of contexts already connected at t=0")
    parser.add_argument("--seed", type=int, default=1, help="base RNG seed")
    parser.add_argument("--reps", type=int, default=1, help="number of seeded repetitions")
    parser.add_argument("--window-ms", type=int, help="detector window size")
    parser.add_argument("--hop-ms", type=int, help="detector evaluation stride")
    parser.add_argument("--watermark", type=int, help="abnormal Msg3-count watermark")
    parser.add_argument("--out", default="out", help="output directory")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rrcstorm",
        description="RRC signaling-storm simulator, analytic model and detector")
    sub = parser.add_subparsers(dest="cmd", required=True)

    p_run = sub.add_parser("run", help="simulate, detect, write trace/verdict/metrics files")
    _add_common(p_run)

    p_table = sub.add_parser("table1", help="theoretical vs simulated flood metrics "
                                            "at 0/25/50/75%% occupancy")
    _add_common(p_table)

    p_lat = sub.add_parser("latency", help="seeded detection-latency campaign")
    _add_common(p_lat)
    p_lat.add_argument("--target", choices=[s.value for s in GnbState],
                       help="state to time (default: scenario kind)")

    p_replay = sub.add_parser("replay", help="run the detector over a recorded trace")
    p_replay.add_argument("trace", type=Path, help="input .rrctrace.jsonl file")
    p_replay.add_argument("--out", type=Path, help="output verdict file "
                          "(default: trace path with verdict suffix)")
    p_replay.add_argument("--window-ms", type=int, default=None)
    p_replay.add_argument("--hop-ms", type=int, default=None)
    p_replay.add_argument("--watermark", type=int, default=None)
    p_replay.add_argument("--r1-threshold", type=float, default=None)
    p_replay.add_argument("--r2-threshold", type=float, default=None)
    return parser


def _cmd_run(args: argparse.Namespace) -> int:
    config = _experiment(args)
    artifacts = harness.cmd_run(config)
    for path in artifacts.trace_paths:
        print(f"trace:    {path}")
    for path in artifacts.verdict_paths:
        print(f"verdicts: {path}")
    print(f"metrics:  {artifacts.metrics_path}")
    if artifacts.availability_pct is not None:
        print(f"availability over first waiting period: {artifacts.availability_pct:.2f}%")
    return 0


def _cmd_table1(args: argparse.Namespace) -> int:
    config = _experiment(args)
    out_path = config.out_dir / "table1.csv"
    rows = harness.cmd_table1(config.seeds, config.gnb, out_path)
    fmt = "{:>9} {:>12} {:>9} {:>9} {:>8} {:>9} {:>9} {:>7}"
    print(fmt.format("occupancy", "source", "accepted", "rejected",
                     "drop_s", "accept_s", "reject_s", "avail%"))
    for r in rows:
        print(fmt.format(f"{r.occupancy_pct}%", r.source, f"{r.accepted:.0f}",
                         f"{r.rejected:.0f}", f"{r.drop_time_s:.3f}",
                         f"{r.accept_duration_s:.3f}", f"{r.reject_duration_s:.3f}",
                         f"{r.availability_pct:.2f}"))
    print(f"csv: {out_path}")
    return 0


def _cmd_latency(args: argparse.Namespace) -> int:
    config = _experiment(args)
    target = GnbState(args.target) if args.target else None
    out_path = config.out_dir / f"{config.name}-latency.csv"
    rows, summary = harness.latency_campaign(config, target, out_path)
    print(f"runs: {summary.runs}  detected: {summary.detected}  target: {summary.target.value}")
    if summary.mean_latency_ms is not None:
        print(f"latency ms  mean: {summary.mean_latency_ms:.1f}  "
              f"min: {summary.min_latency_ms}  max: {summary.max_latency_ms}")
    if summary.mean_margin_ms is not None:
        print(f"margin before overload ms  mean: {summary.mean_margin_ms:.1f}")
    print(f"attack verdicts across runs: {summary.total_attack_verdicts}")
    print(f"csv: {out_path}")
    return summary.detected != summary.runs


def _cmd_replay(args: argparse.Namespace) -> int:
    overrides = {}
    if args.window_ms is not None:
        overrides["window_ms"] = args.window_ms
    if args.hop_ms is not None:
        overrides["hop_ms"] = args.hop_ms
    if args.watermark is not None:
        overrides["msg3_watermark"] = args.watermark
    if args.r1_threshold is not None:
        overrides["r1_threshold"] = args.r1_threshold
    if args.r2_threshold is not None:
        overrides["r2_threshold"] = args.r2_threshold
    detector = dataclasses.replace(presets.default_detector(), **overrides)
    out = args.out
    if out is None:
        stem = args.trace.name.removesuffix(".rrctrace.jsonl")
        out = args.trace.with_name(stem + ".verdicts.jsonl")
    verdicts = harness.cmd_replay(args.trace, detector, out)
    print(f"{len(verdicts)} verdicts -> {out}")
    return 0


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    handlers = {"run": _cmd_run, "table1": _cmd_table1,
                "latency": _cmd_latency, "replay": _cmd_replay}
    try:
        return handlers[args.cmd](args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
