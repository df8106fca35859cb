"""Experiment drivers behind the CLI: scenario runs, the theory-vs-simulation
comparison table, seeded latency campaigns, and offline trace replay.

Repetitions are independent seeded engine runs; aggregation is
order-independent (rows are sorted by seed before writing).
"""
from __future__ import annotations

import csv
import dataclasses
import statistics
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

from . import analytic, presets, telemetry
from .analytic import AnalyticInputs, WAITING_TIME_EFFECTIVE_MS
from .detector import DetectionVerdict, DetectorConfig, GnbState, detection_latency, run_stream
from .simnet import GnbConfig, ScenarioKind, ScenarioSpec, SimResult, run


@dataclass(frozen=True)
class ExperimentConfig:
    name: str
    scenario: ScenarioSpec
    gnb: GnbConfig
    detector: DetectorConfig
    seeds: Sequence[int]
    out_dir: Optional[Path] = None   # required only by commands that write files

    def __post_init__(self) -> None:
        if not self.seeds:
            raise ValueError("at least one seed required")

    @property
    def repetitions(self) -> int:
        return len(self.seeds)


@dataclass(frozen=True)
class TableOneRow:
    occupancy_pct: int
    source: str                 # "theoretical" | "simulated"
    accepted: float
    rejected: float
    drop_time_s: float
    accept_duration_s: float
    reject_duration_s: float
    availability_pct: float


TABLE1_OCCUPANCIES = (0, 25, 50, 75)


def table1_theoretical_row(occupancy_pct: int,
                           capacity: int = presets.GNB_CAPACITY,
                           rate_per_s: float = presets.ATTACK_RATE_PER_S,
                           waiting_time_ms: float = WAITING_TIME_EFFECTIVE_MS,
                           ) -> TableOneRow:
    inputs = AnalyticInputs(
        waiting_time_ms=waiting_time_ms,
        capacity=capacity,
        attack_rate_per_s=rate_per_s,
        connected_ues=round(capacity * occupancy_pct / 100),
    )
    out = analytic.full_model(inputs)
    return TableOneRow(
        occupancy_pct=occupancy_pct,
        source="theoretical",
        accepted=out.accepted,
        rejected=out.rejected,
        drop_time_s=out.drop_time_ms / 1000.0,
        accept_duration_s=out.accept_duration_ms / 1000.0,
        reject_duration_s=out.reject_duration_ms / 1000.0,
        availability_pct=out.availability_pct,
    )


def table1_scenario(occupancy_pct: int, seed: int,
                    capacity: int = presets.GNB_CAPACITY,
                    rate_per_s: float = presets.ATTACK_RATE_PER_S,
                    waiting_time_ms: int = presets.WAITING_TIME_MS) -> ScenarioSpec:
    # Cold-start flood covering one full waiting period, no onset delay, so
    # the measured first period lines up with the closed-form single period.
    return ScenarioSpec(
        kind=ScenarioKind.ATTACK,
        duration_ms=waiting_time_ms + 100,
        seed=seed,
        preconnected_bue=round(capacity * occupancy_pct / 100),
        attacker_rate_per_s=rate_per_s,
    )


def table1_simulated_row(occupancy_pct: int, seeds: Sequence[int],
                         gnb: GnbConfig,
                         rate_per_s: float = presets.ATTACK_RATE_PER_S) -> TableOneRow:
    drops, accepts, rejects, avails, reject_durs = [], [], [], [], []
    for seed in sorted(seeds):
        result = run(table1_scenario(occupancy_pct, seed, gnb.capacity,
                                     rate_per_s, gnb.waiting_time_ms), gnb)
        if result.drop_time_ms is None:
            raise RuntimeError(f"flood at {occupancy_pct}% occupancy did not saturate")
        drops.append(result.drop_time_ms)
        accepts.append(result.accepted_first_period)
        rejects.append(result.rejected_first_period)
        avails.append(result.availability_first_period_pct)
        if result.duration_reject_ms is not None:
            reject_durs.append(result.duration_reject_ms)
    drop_s = statistics.mean(drops) / 1000.0
    reject_s = statistics.mean(reject_durs) / 1000.0 if reject_durs else 0.0
    return TableOneRow(
        occupancy_pct=occupancy_pct,
        source="simulated",
        accepted=statistics.mean(accepts),
        rejected=statistics.mean(rejects),
        drop_time_s=drop_s,
        accept_duration_s=drop_s,
        reject_duration_s=reject_s,
        availability_pct=statistics.mean(avails),
    )


def cmd_table1(seeds: Sequence[int], gnb: Optional[GnbConfig] = None,
               out_path: Optional[Path] = None) -> list[TableOneRow]:
    """Theory next to simulation for each occupancy level, optionally as CSV."""
    gnb = gnb or presets.default_gnb()
    rows = []
    for pct in TABLE1_OCCUPANCIES:
        rows.append(table1_theoretical_row(pct, capacity=gnb.capacity))
        rows.append(table1_simulated_row(pct, seeds, gnb))
    if out_path is not None:
        write_table1_csv(rows, out_path)
    return rows


def write_table1_csv(rows: Sequence[TableOneRow], path: Path) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["occupancy_pct", "source", "accepted_msg3", "rejected_msg3",
                         "drop_time_s", "accept_duration_s", "reject_duration_s",
                         "availability_pct"])
        for r in rows:
            writer.writerow([r.occupancy_pct, r.source,
                             f"{r.accepted:.1f}", f"{r.rejected:.1f}",
                             f"{r.drop_time_s:.3f}", f"{r.accept_duration_s:.3f}",
                             f"{r.reject_duration_s:.3f}", f"{r.availability_pct:.2f}"])


@dataclass(frozen=True)
class LatencyRow:
    seed: int
    onset_ms: int
    drop_time_ms: Optional[int]
    latency_ms: Optional[int]
    margin_ms: Optional[int]
    attack_verdicts: int
    highload_verdicts: int


@dataclass(frozen=True)
class LatencySummary:
    target: GnbState
    runs: int
    detected: int
    mean_latency_ms: Optional[float]
    min_latency_ms: Optional[int]
    max_latency_ms: Optional[int]
    mean_margin_ms: Optional[float]
    total_attack_verdicts: int


def run_with_verdicts(scenario: ScenarioSpec, gnb: GnbConfig,
                      detector: DetectorConfig) -> tuple[SimResult, list[DetectionVerdict]]:
    result = run(scenario, gnb)
    return result, run_stream(result.trace, detector)


def latency_campaign(config: ExperimentConfig,
                     target: Optional[GnbState] = None,
                     out_path: Optional[Path] = None,
                     ) -> tuple[list[LatencyRow], LatencySummary]:
    """Per-seed detection latency against the scenario's ground-truth onset.

    Runs that never reach the target state become failure rows with empty
    latency rather than being dropped from the statistics.
    """
    if target is None:
        target = (GnbState.ATTACK if config.scenario.kind is ScenarioKind.ATTACK
                  else GnbState.HIGH_LOAD)
    rows = []
    for seed in sorted(config.seeds):
        scenario = dataclasses.replace(config.scenario, seed=seed)
        result, verdicts = run_with_verdicts(scenario, config.gnb, config.detector)
        onset = result.first_msg3_ms
        if onset is None:
            raise RuntimeError(f"seed {seed}: scenario produced no Msg3")
        latency = detection_latency(verdicts, onset, target)
        margin = None
        if latency is not None and result.drop_time_ms is not None:
            margin = result.drop_time_ms - latency
        rows.append(LatencyRow(
            seed=seed,
            onset_ms=onset,
            drop_time_ms=result.drop_time_ms,
            latency_ms=latency,
            margin_ms=margin,
            attack_verdicts=sum(1 for v in verdicts if v.state is GnbState.ATTACK),
            highload_verdicts=sum(1 for v in verdicts if v.state is GnbState.HIGH_LOAD),
        ))
    detected = [r.latency_ms for r in rows if r.latency_ms is not None]
    margins = [r.margin_ms for r in rows if r.margin_ms is not None]
    summary = LatencySummary(
        target=target,
        runs=len(rows),
        detected=len(detected),
        mean_latency_ms=statistics.mean(detected) if detected else None,
        min_latency_ms=min(detected) if detected else None,
        max_latency_ms=max(detected) if detected else None,
        mean_margin_ms=statistics.mean(margins) if margins else None,
        total_attack_verdicts=sum(r.attack_verdicts for r in rows),
    )
    if out_path is not None:
        write_latency_csv(rows, out_path)
    return rows, summary


def write_latency_csv(rows: Sequence[LatencyRow], path: Path) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["seed", "onset_ms", "drop_time_ms", "latency_ms",
                         "margin_ms", "attack_verdicts", "highload_verdicts"])
        for r in rows:
            writer.writerow([
                r.seed, r.onset_ms,
                "" if r.drop_time_ms is None else r.drop_time_ms,
                "" if r.latency_ms is None else r.latency_ms,
                "" if r.margin_ms is None else r.margin_ms,
                r.attack_verdicts, r.highload_verdicts,
            ])


@dataclass(frozen=True)
class RunArtifacts:
    trace_paths: list[Path]
    verdict_paths: list[Path]
    metrics_path: Path
    availability_pct: Optional[float]


def cmd_run(config: ExperimentConfig) -> RunArtifacts:
    """Run every repetition; write trace, verdicts and a metrics CSV.

    The aggregate availability combines the per-repetition first-period
    counts as 100 * sum(accepted) / sum(accepted + rejected).
    """
    if config.out_dir is None:
        raise ValueError("cmd_run needs an output directory")
    config.out_dir.mkdir(parents=True, exist_ok=True)
    trace_paths, verdict_paths = [], []
    metrics_rows = []
    acc, rej = [], []
    for seed in sorted(config.seeds):
        scenario = dataclasses.replace(config.scenario, seed=seed)
        result, verdicts = run_with_verdicts(scenario, config.gnb, config.detector)
        stem = config.out_dir / f"{config.name}-seed{seed}"
        trace_path = Path(str(stem) + telemetry.TRACE_SUFFIX)
        verdict_path = Path(str(stem) + telemetry.VERDICT_SUFFIX)
        telemetry.write_trace(result.trace, trace_path)
        telemetry.write_verdicts(verdicts, verdict_path)
        trace_paths.append(trace_path)
        verdict_paths.append(verdict_path)
        acc.append(result.accepted_first_period)
        rej.append(result.rejected_first_period)
        metrics_rows.append([
            seed,
            "" if result.first_msg3_ms is None else result.first_msg3_ms,
            "" if result.drop_time_ms is None else result.drop_time_ms,
            result.accepted_first_period,
            result.rejected_first_period,
            "" if result.availability_first_period_pct is None
            else f"{result.availability_first_period_pct:.2f}",
            result.accepted_msg3,
            result.rejected_msg3,
        ])
    availability = None
    if sum(acc) + sum(rej) > 0:
        availability, _ = analytic.availability_rate(acc, rej)
    metrics_path = config.out_dir / f"{config.name}-metrics.csv"
    with open(metrics_path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["seed", "first_msg3_ms", "drop_time_ms",
                         "accepted_first_period", "rejected_first_period",
                         "availability_pct", "accepted_total", "rejected_total"])
        writer.writerows(metrics_rows)
        writer.writerow(["aggregate", "", "", sum(acc), sum(rej),
                         "" if availability is None else f"{availability:.2f}", "", ""])
    return RunArtifacts(trace_paths, verdict_paths, metrics_path, availability)


def cmd_replay(trace_path: Path, detector: DetectorConfig,
               out_path: Path) -> list[DetectionVerdict]:
    """Re-run the detector offline over a recorded trace."""
    events = telemetry.read_trace(trace_path)
    verdicts = run_stream(events, detector)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    telemetry.write_verdicts(verdicts, out_path)
    return verdicts
