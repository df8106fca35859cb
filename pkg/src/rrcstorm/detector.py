"""Sliding-window gNB state classifier fed by the RRC message stream alone.

The detector sees only Msg3/Msg4/Msg5 observations (never gNB internals),
keeps the last window_ms of timestamps, and derives three features per
window: the Msg3 count, r1 = Msg5/Msg3 and r2 = Msg5/Msg4. An elevated Msg3
count flags an abnormal window; r2 separates a storm (Msg4s go unanswered,
r2 -> 0) from a legitimate surge (served UEs still complete, r2 stays ~1);
a silent gNB (no Msg4 at all) means its pool is exhausted.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Optional, Sequence

from .events import MsgKind, RrcEvent


class StreamOrderError(ValueError):
    """An event arrived with a timestamp older than an already-ingested one."""


class GnbState(str, Enum):
    NORMAL = "normal"
    ATTACK = "attack"
    HIGH_LOAD = "high_load"
    OVERLOAD = "overload"


@dataclass(frozen=True)
class DetectorConfig:
    window_ms: int = 625
    hop_ms: int = 25
    r1_threshold: float = 0.5
    r2_threshold: float = 0.5
    msg3_watermark: int = 8          # per-window Msg3 count above which traffic is abnormal
    min_msg3_for_ratios: int = 3     # below this, r1 is not meaningful and reads as idle

    def __post_init__(self) -> None:
        if not 0 < self.hop_ms <= self.window_ms:
            raise ValueError("hop_ms must be in (0, window_ms]")
        for name in ("r1_threshold", "r2_threshold"):
            v = getattr(self, name)
            if not 0.0 < v < 1.0:
                raise ValueError(f"{name} must be in (0, 1)")
        if self.msg3_watermark < 1:
            raise ValueError("msg3_watermark must be >= 1")
        if self.min_msg3_for_ratios < 0:
            raise ValueError("min_msg3_for_ratios must be >= 0")


@dataclass(frozen=True)
class WindowFeatures:
    window_start_ms: int
    window_end_ms: int
    n_msg3: int
    n_msg4: int
    n_msg5: int
    r1: float   # Msg5/Msg3 completion ratio, clamped to [0, 1]
    r2: float   # Msg5/Msg4 response ratio, clamped to [0, 1]


@dataclass(frozen=True)
class DetectionVerdict:
    t_ms: int
    state: GnbState
    features: WindowFeatures


def compute_ratios(n_msg3: int, n_msg4: int, n_msg5: int,
                   config: DetectorConfig) -> tuple[float, float]:
    """(r1, r2) with degenerate-denominator rules.

    Too few Msg3s to judge -> r1 reads as 1 (idle). No Msg4 and no Msg5 reads
    as gNB silence (r2 = 0) when the Msg3 count is abnormal, idle (r2 = 1)
    otherwise. Both ratios are clamped to [0, 1].
    """
    if n_msg3 < max(config.min_msg3_for_ratios, 1):
        r1 = 1.0
    else:
        r1 = min(1.0, n_msg5 / n_msg3)
    if n_msg4 == 0:
        if n_msg5 == 0:
            r2 = 0.0 if n_msg3 > config.msg3_watermark else 1.0
        else:
            r2 = 1.0
    else:
        r2 = min(1.0, n_msg5 / n_msg4)
    return r1, r2


def classify(features: WindowFeatures, config: DetectorConfig) -> DetectionVerdict:
    """Pure decision rule over one window's features.

    Order matters: the watermark guard suppresses verdicts on tiny samples,
    and gNB silence is checked before the ratio rules so a fully silent gNB
    reads as Overload rather than Attack.
    """
    if features.n_msg3 <= config.msg3_watermark:
        state = GnbState.NORMAL
    elif features.n_msg4 == 0:
        state = GnbState.OVERLOAD
    elif features.r1 < config.r1_threshold and features.r2 < config.r2_threshold:
        state = GnbState.ATTACK
    elif features.r1 < config.r1_threshold and features.r2 >= config.r2_threshold:
        state = GnbState.HIGH_LOAD
    else:
        state = GnbState.NORMAL
    return DetectionVerdict(t_ms=features.window_end_ms, state=state, features=features)


class SlidingWindowDetector:
    """Single-writer streaming state: ingest events, evaluate at chosen instants.

    Only Msg3/Msg4/Msg5 are retained; annotations and RA messages are
    discarded on ingest. Old timestamps are evicted lazily on evaluation.
    """

    _COUNTED = (MsgKind.MSG3, MsgKind.MSG4, MsgKind.MSG5)

    def __init__(self, config: Optional[DetectorConfig] = None):
        self.config = config or DetectorConfig()
        self._windows: dict[MsgKind, deque[int]] = {k: deque() for k in self._COUNTED}
        self._newest: Optional[int] = None

    def ingest(self, event: RrcEvent) -> None:
        if self._newest is not None and event.t < self._newest:
            raise StreamOrderError(
                f"event at t={event.t} after t={self._newest}")
        self._newest = event.t
        if event.kind in self._windows:
            self._windows[event.kind].append(event.t)

    def features(self, now: int) -> WindowFeatures:
        """Counts and ratios over (now - window_ms, now].

        Evaluation instants must be non-decreasing and not precede already
        ingested events; eviction is one-way.
        """
        if self._newest is not None and now < self._newest:
            raise ValueError(f"features({now}) precedes ingested t={self._newest}")
        horizon = now - self.config.window_ms
        for window in self._windows.values():
            while window and window[0] <= horizon:
                window.popleft()
        n3 = len(self._windows[MsgKind.MSG3])
        n4 = len(self._windows[MsgKind.MSG4])
        n5 = len(self._windows[MsgKind.MSG5])
        r1, r2 = compute_ratios(n3, n4, n5, self.config)
        return WindowFeatures(horizon, now, n3, n4, n5, r1, r2)

    def evaluate(self, now: int) -> DetectionVerdict:
        return classify(self.features(now), self.config)


def run_stream(events: Sequence[RrcEvent],
               config: Optional[DetectorConfig] = None) -> list[DetectionVerdict]:
    """Classify an ordered event stream, one verdict per hop.

    Hops run from window_ms to the last observable (Msg3/4/5) timestamp in
    hop_ms steps; the result is a deterministic function of (events, config),
    so live and replayed streams produce identical verdict timelines.
    """
    config = config or DetectorConfig()
    detector = SlidingWindowDetector(config)
    t_end = max((e.t for e in events if e.kind in SlidingWindowDetector._COUNTED),
                default=None)
    if t_end is None or t_end < config.window_ms:
        for event in events:
            detector.ingest(event)
        return []
    verdicts = []
    idx = 0
    for now in range(config.window_ms, t_end + 1, config.hop_ms):
        while idx < len(events) and events[idx].t <= now:
            detector.ingest(events[idx])
            idx += 1
        verdicts.append(detector.evaluate(now))
    return verdicts


def detection_latency(verdicts: Iterable[DetectionVerdict],
                      onset_ms: int, target: GnbState) -> Optional[int]:
    """ms from onset to the first verdict in the target state; None if never."""
    for verdict in verdicts:
        if verdict.state is target:
            return verdict.t_ms - onset_ms
    return None
