"""Line-delimited JSON serialization for traces and verdict timelines.

One record per line, fixed key order, UTF-8 with LF endings, so golden files
are byte-stable and diffable. Parsing is strict: any record the writer could
not have produced is rejected with its line number.
"""
from __future__ import annotations

import json
from pathlib import Path
from typing import IO, Iterable, Union

from .detector import DetectionVerdict, GnbState, WindowFeatures
from .events import EstablishmentCause, MsgKind, RrcEvent

TRACE_SUFFIX = ".rrctrace.jsonl"
VERDICT_SUFFIX = ".verdicts.jsonl"

_KINDS = {k.value: k for k in MsgKind}
_CAUSES = {c.value: c for c in EstablishmentCause}
_STATES = {s.value: s for s in GnbState}

Sink = Union[str, Path, IO[str]]


class TraceParseError(ValueError):
    def __init__(self, line_no: int, reason: str):
        super().__init__(f"line {line_no}: {reason}")
        self.line_no = line_no
        self.reason = reason


def _open(sink: Sink, mode: str):
    if isinstance(sink, (str, Path)):
        return open(sink, mode, encoding="utf-8", newline="\n"), True
    return sink, False


def trace_line(event: RrcEvent) -> str:
    record = {"t": event.t, "kind": event.kind.value, "ue": event.ue_ref}
    if event.cause is not None:
        record["cause"] = event.cause.value
    return json.dumps(record, separators=(",", ":"))


def write_trace(events: Iterable[RrcEvent], sink: Sink) -> int:
    """Write one JSON line per event; returns the record count."""
    fh, owned = _open(sink, "w")
    try:
        count = 0
        for event in events:
            fh.write(trace_line(event) + "\n")
            count += 1
        return count
    finally:
        if owned:
            fh.close()


def _parse_trace_record(line_no: int, line: str, prev_t: int) -> RrcEvent:
    try:
        record = json.loads(line)
    except json.JSONDecodeError as exc:
        raise TraceParseError(line_no, f"bad JSON: {exc}") from None
    if not isinstance(record, dict):
        raise TraceParseError(line_no, "record is not an object")
    unknown = set(record) - {"t", "kind", "ue", "cause"}
    if unknown:
        raise TraceParseError(line_no, f"unknown keys {sorted(unknown)}")
    for key in ("t", "kind", "ue"):
        if key not in record:
            raise TraceParseError(line_no, f"missing key '{key}'")
    t = record["t"]
    if not isinstance(t, int) or isinstance(t, bool) or t < 0:
        raise TraceParseError(line_no, f"'t' must be a non-negative integer, got {t!r}")
    if t < prev_t:
        raise TraceParseError(line_no, f"timestamp regression {prev_t} -> {t}")
    kind = _KINDS.get(record["kind"])
    if kind is None:
        raise TraceParseError(line_no, f"unknown kind {record['kind']!r}")
    ue = record["ue"]
    if not isinstance(ue, str) or not ue:
        raise TraceParseError(line_no, "'ue' must be a non-empty string")
    cause = None
    if kind is MsgKind.MSG3:
        if "cause" not in record:
            raise TraceParseError(line_no, "msg3 record without cause")
        cause = _CAUSES.get(record["cause"])
        if cause is None:
            raise TraceParseError(line_no, f"unknown cause {record['cause']!r}")
    elif "cause" in record:
        raise TraceParseError(line_no, f"cause not allowed on {kind.value}")
    return RrcEvent(t, kind, ue, cause)


def read_trace(source: Sink) -> list[RrcEvent]:
    """Parse a trace file back into events; round-trips write_trace exactly."""
    fh, owned = _open(source, "r")
    try:
        events = []
        prev_t = 0
        for line_no, line in enumerate(fh, 1):
            line = line.rstrip("\n")
            if not line:
                raise TraceParseError(line_no, "blank line")
            event = _parse_trace_record(line_no, line, prev_t)
            prev_t = event.t
            events.append(event)
        return events
    finally:
        if owned:
            fh.close()


def verdict_line(verdict: DetectionVerdict) -> str:
    f = verdict.features
    # r1/r2 fixed at 4 decimals so output bytes are platform independent.
    return (
        f'{{"t":{verdict.t_ms},"state":"{verdict.state.value}",'
        f'"n_msg3":{f.n_msg3},"n_msg4":{f.n_msg4},"n_msg5":{f.n_msg5},'
        f'"r1":{f.r1:.4f},"r2":{f.r2:.4f}}}'
    )


def write_verdicts(verdicts: Iterable[DetectionVerdict], sink: Sink) -> int:
    fh, owned = _open(sink, "w")
    try:
        count = 0
        for verdict in verdicts:
            fh.write(verdict_line(verdict) + "\n")
            count += 1
        return count
    finally:
        if owned:
            fh.close()


def read_verdicts(source: Sink, window_ms: int = 625) -> list[DetectionVerdict]:
    """Parse a verdict file; ratios come back rounded to their 4 decimals."""
    fh, owned = _open(source, "r")
    try:
        verdicts = []
        for line_no, line in enumerate(fh, 1):
            line = line.rstrip("\n")
            if not line:
                raise TraceParseError(line_no, "blank line")
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise TraceParseError(line_no, f"bad JSON: {exc}") from None
            expected = {"t", "state", "n_msg3", "n_msg4", "n_msg5", "r1", "r2"}
            if set(record) != expected:
                raise TraceParseError(line_no, f"keys must be {sorted(expected)}")
            state = _STATES.get(record["state"])
            if state is None:
                raise TraceParseError(line_no, f"unknown state {record['state']!r}")
            features = WindowFeatures(
                window_start_ms=record["t"] - window_ms,
                window_end_ms=record["t"],
                n_msg3=record["n_msg3"],
                n_msg4=record["n_msg4"],
                n_msg5=record["n_msg5"],
                r1=record["r1"],
                r2=record["r2"],
            )
            verdicts.append(DetectionVerdict(record["t"], state, features))
        return verdicts
    finally:
        if owned:
            fh.close()
