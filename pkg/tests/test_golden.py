"""Byte-stability regression against pinned golden files.

The goldens were produced by one live run of the scenario below and frozen;
any engine, detector or serialization change that shifts output bytes must be
deliberate and regenerate them.
"""
from pathlib import Path

from rrcstorm import (
    GnbConfig,
    ScenarioKind,
    ScenarioSpec,
    read_trace,
    run,
    run_stream,
    write_trace,
    write_verdicts,
)
from rrcstorm.presets import default_detector

DATA = Path(__file__).parent / "data"

GOLDEN_GNB = GnbConfig(capacity=4, waiting_time_ms=800)
GOLDEN_SCENARIO = ScenarioSpec(kind=ScenarioKind.ATTACK, duration_ms=1200,
                               seed=7, attacker_rate_per_s=40.0)


def test_trace_bytes_stable(tmp_path):
    result = run(GOLDEN_SCENARIO, GOLDEN_GNB)
    path = tmp_path / "regen.rrctrace.jsonl"
    write_trace(result.trace, path)
    assert path.read_bytes() == (DATA / "golden-attack.rrctrace.jsonl").read_bytes()


def test_verdict_bytes_stable(tmp_path):
    result = run(GOLDEN_SCENARIO, GOLDEN_GNB)
    verdicts = run_stream(result.trace, default_detector())
    path = tmp_path / "regen.verdicts.jsonl"
    write_verdicts(verdicts, path)
    assert path.read_bytes() == (DATA / "golden-attack.verdicts.jsonl").read_bytes()


def test_replaying_golden_trace_reproduces_golden_verdicts(tmp_path):
    events = read_trace(DATA / "golden-attack.rrctrace.jsonl")
    verdicts = run_stream(events, default_detector())
    path = tmp_path / "replayed.verdicts.jsonl"
    write_verdicts(verdicts, path)
    assert path.read_bytes() == (DATA / "golden-attack.verdicts.jsonl").read_bytes()
