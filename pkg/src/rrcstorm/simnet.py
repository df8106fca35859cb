"""Deterministic discrete-event simulation of a gNB resource pool under load.

Agents: a storm attacker that loops RA + Msg3 and never completes setups, a
benign fleet (high-load surge) whose UEs always answer Msg4 with Msg5, and
truncated-Poisson background arrivals modelling everyday traffic. The engine
is single-threaded, driven by a (time, insertion-sequence) priority queue, and
bit-reproducible for a given (scenario, gnb, seed) triple.
"""
from __future__ import annotations

import heapq
import math
import random
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Optional

from .events import EstablishmentCause, MsgKind, RrcEvent, validate_stream


class ScenarioError(ValueError):
    """Raised for a scenario/config combination that cannot be run."""


def _round_half_up(x: float) -> int:
    return math.floor(x + 0.5)


@dataclass(frozen=True)
class GnbConfig:
    """gNB-side parameters.

    capacity: simultaneous UE contexts.
    waiting_time_ms: how long a pending context is held awaiting Msg5.
    frame_ms / max_msg1_per_frame: RA admission cap; the attacker's rate is
    clamped to max_msg1_per_frame per frame.
    msg3_to_msg4_delay_ms: gNB processing delay before Msg4 goes out.
    """

    capacity: int = 16
    waiting_time_ms: int = 2700
    frame_ms: int = 7
    max_msg1_per_frame: int = 1
    msg3_to_msg4_delay_ms: int = 1

    def __post_init__(self) -> None:
        if self.capacity < 1:
            raise ScenarioError("capacity must be >= 1")
        if self.waiting_time_ms <= 0:
            raise ScenarioError("waiting_time_ms must be > 0")
        if self.frame_ms < 1:
            raise ScenarioError("frame_ms must be >= 1")
        if self.max_msg1_per_frame < 1:
            raise ScenarioError("max_msg1_per_frame must be >= 1")
        if self.msg3_to_msg4_delay_ms < 0:
            raise ScenarioError("msg3_to_msg4_delay_ms must be >= 0")

    @property
    def max_msg1_rate_per_s(self) -> float:
        return 1000.0 * self.max_msg1_per_frame / self.frame_ms


@dataclass(frozen=True)
class TruncatedPoissonSpec:
    """Poisson(lam) arrivals conditioned on k <= k_max, drawn every tick_ms."""

    lam: float = 2.0
    k_max: int = 3
    tick_ms: int = 100

    def __post_init__(self) -> None:
        if self.lam < 0:
            raise ScenarioError("lam must be >= 0")
        if self.k_max < 0:
            raise ScenarioError("k_max must be >= 0")
        if self.tick_ms < 1:
            raise ScenarioError("tick_ms must be >= 1")


def truncated_poisson_sample(spec: TruncatedPoissonSpec, rng: random.Random) -> int:
    """One draw from Poisson(lam) conditioned on k <= k_max.

    Rejection sampling: Knuth's product method for the Poisson draw, resample
    whenever the draw exceeds the upper bound.
    """
    threshold = math.exp(-spec.lam)
    while True:
        k = 0
        p = 1.0
        while True:
            p *= rng.random()
            if p <= threshold:
                break
            k += 1
        if k <= spec.k_max:
            return k


class ScenarioKind(str, Enum):
    ATTACK = "attack"
    HIGH_LOAD = "high_load"
    NORMAL = "normal"


@dataclass(frozen=True)
class ScenarioSpec:
    """One simulation scenario.

    Scenario traffic (attacker cycles or fleet arrivals) starts at
    onset_ms plus a seed-dependent uniform jitter of up to onset_jitter_ms,
    and stops generating at duration_ms; in-flight handshakes and context
    timers then run to completion so every granted context resolves within
    the trace. Background arrivals, when configured, run from t=0.

    benign_hold_ms: how long a benign UE stays connected before releasing its
    context; None means it never disconnects within the run.
    """

    kind: ScenarioKind
    duration_ms: int
    seed: int = 0
    preconnected_bue: int = 0
    attacker_rate_per_s: Optional[float] = None
    benign_fleet_rate_per_s: Optional[float] = None
    background: Optional[TruncatedPoissonSpec] = None
    msg4_to_msg5_delay_ms: int = 10
    onset_ms: int = 0
    onset_jitter_ms: int = 0
    t300_ms: int = 1000
    max_retries: int = 3
    benign_hold_ms: Optional[int] = None
    attacker_cause: EstablishmentCause = EstablishmentCause.EMERGENCY

    def __post_init__(self) -> None:
        if self.duration_ms <= 0:
            raise ScenarioError("duration_ms must be > 0")
        if self.preconnected_bue < 0:
            raise ScenarioError("preconnected_bue must be >= 0")
        if self.kind is ScenarioKind.ATTACK:
            if self.attacker_rate_per_s is None or self.attacker_rate_per_s <= 0:
                raise ScenarioError("attack scenario needs attacker_rate_per_s > 0")
        if self.kind is ScenarioKind.HIGH_LOAD:
            if self.benign_fleet_rate_per_s is None or self.benign_fleet_rate_per_s <= 0:
                raise ScenarioError("high-load scenario needs benign_fleet_rate_per_s > 0")
        if self.kind is ScenarioKind.NORMAL and self.background is None:
            raise ScenarioError("normal scenario needs a background spec")
        if self.onset_ms < 0 or self.onset_jitter_ms < 0:
            raise ScenarioError("onset must be >= 0")
        if self.t300_ms < 1:
            raise ScenarioError("t300_ms must be >= 1")
        if self.max_retries < 0:
            raise ScenarioError("max_retries must be >= 0")


@dataclass(frozen=True)
class SimResult:
    """Trace plus metrics derived from it (never from engine internals).

    drop_time_ms and the first-period counts are measured relative to the
    first Msg3 in the trace, which is the flood onset in attack/high-load
    scenarios. The first-period counts cover one waiting time from that
    instant; accepted/rejected cover the whole trace.
    """

    trace: list[RrcEvent]
    accepted_msg3: int
    rejected_msg3: int
    first_msg3_ms: Optional[int]
    first_reject_ms: Optional[int]
    drop_time_ms: Optional[int]
    duration_accept_ms: Optional[int]
    duration_reject_ms: Optional[int]
    accepted_first_period: int
    rejected_first_period: int
    availability_first_period_pct: Optional[float]


@dataclass
class _Context:
    pending: bool
    expiry_ms: int
    generation: int


class ResourcePool:
    """Bounded set of UE contexts with pending-expiry and connected states."""

    def __init__(self, capacity: int):
        self.capacity = capacity
        self._contexts: dict[str, _Context] = {}
        self._generation = 0

    def __len__(self) -> int:
        return len(self._contexts)

    @property
    def is_full(self) -> bool:
        return len(self._contexts) >= self.capacity

    def admit(self, ue_ref: str, now: int, waiting_time_ms: int) -> Optional[int]:
        """Allocate a pending context; returns its generation or None if full."""
        if self.is_full or ue_ref in self._contexts:
            return None
        self._generation += 1
        self._contexts[ue_ref] = _Context(True, now + waiting_time_ms, self._generation)
        assert len(self._contexts) <= self.capacity
        return self._generation

    def preconnect(self, ue_ref: str) -> None:
        """Seed an already-connected UE at t=0 (emits no events)."""
        if self.is_full:
            raise ScenarioError("preconnected UEs exceed capacity")
        self._generation += 1
        self._contexts[ue_ref] = _Context(False, -1, self._generation)

    def complete(self, ue_ref: str) -> bool:
        """Pending -> Connected on Msg5; False if there is no pending entry."""
        ctx = self._contexts.get(ue_ref)
        if ctx is None or not ctx.pending:
            return False
        ctx.pending = False
        return True

    def expire(self, ue_ref: str, generation: int) -> bool:
        """Drop a still-pending context when its waiting time ran out."""
        ctx = self._contexts.get(ue_ref)
        if ctx is None or not ctx.pending or ctx.generation != generation:
            return False
        del self._contexts[ue_ref]
        return True

    def release(self, ue_ref: str) -> bool:
        """Connected -> removed on UE disconnect."""
        ctx = self._contexts.get(ue_ref)
        if ctx is None or ctx.pending:
            return False
        del self._contexts[ue_ref]
        return True


@dataclass
class _BenignUe:
    ue_ref: str
    hold_ms: Optional[int]
    retries_left: int
    got_msg4: bool = False
    done: bool = False


class _Engine:
    """Event loop: heap keyed by (t, seq); ties resolve in insertion order."""

    def __init__(self, scenario: ScenarioSpec, gnb: GnbConfig):
        if scenario.preconnected_bue > gnb.capacity:
            raise ScenarioError("preconnected_bue exceeds gNB capacity")
        self.scenario = scenario
        self.gnb = gnb
        self.rng = random.Random(scenario.seed)
        self.pool = ResourcePool(gnb.capacity)
        self.trace: list[RrcEvent] = []
        self.now = 0
        self._heap: list[tuple[int, int, Callable[[], None]]] = []
        self._seq = 0

    # -- plumbing ---------------------------------------------------------

    def schedule(self, t: int, fn: Callable[[], None]) -> None:
        self._seq += 1
        heapq.heappush(self._heap, (t, self._seq, fn))

    def emit(self, kind: MsgKind, ue_ref: str,
             cause: Optional[EstablishmentCause] = None) -> None:
        self.trace.append(RrcEvent(self.now, kind, ue_ref, cause))

    def _fresh_ref(self, prefix: str) -> str:
        return f"{prefix}-{self.rng.getrandbits(32):08x}"

    # -- gNB --------------------------------------------------------------

    def gnb_on_msg3(self, ue_ref: str) -> bool:
        """Admit or reject an incoming Msg3; schedules Msg4 and expiry on admit."""
        generation = self.pool.admit(ue_ref, self.now, self.gnb.waiting_time_ms)
        if generation is None:
            self.emit(MsgKind.MSG3_REJECTED, ue_ref)
            return False
        self.schedule(self.now + self.gnb.msg3_to_msg4_delay_ms,
                      lambda: self.emit(MsgKind.MSG4, ue_ref))
        self.schedule(self.now + self.gnb.waiting_time_ms,
                      lambda: self._gnb_expire(ue_ref, generation))
        return True

    def gnb_on_msg5(self, ue_ref: str) -> bool:
        """Connect the matching pending context; stale Msg5 changes nothing."""
        return self.pool.complete(ue_ref)

    def _gnb_expire(self, ue_ref: str, generation: int) -> None:
        if self.pool.expire(ue_ref, generation):
            self.emit(MsgKind.CONTEXT_RELEASED, ue_ref)

    # -- attacker ---------------------------------------------------------

    def _attack_period_ms(self) -> float:
        rate = min(self.scenario.attacker_rate_per_s, self.gnb.max_msg1_rate_per_s)
        return 1000.0 / rate

    def _attacker_cycle(self, n: int, onset: int) -> None:
        # One RA loop then Msg3; Msg4 and T300 are ignored, no Msg5 ever.
        ue_ref = self._fresh_ref("mue")
        self.emit(MsgKind.MSG1, ue_ref)
        self.emit(MsgKind.MSG2, ue_ref)
        self.emit(MsgKind.MSG3, ue_ref, self.scenario.attacker_cause)
        self.gnb_on_msg3(ue_ref)
        t_next = onset + _round_half_up((n + 1) * self._attack_period_ms())
        if t_next < self.scenario.duration_ms:
            self.schedule(t_next, lambda: self._attacker_cycle(n + 1, onset))

    # -- benign UEs -------------------------------------------------------

    def _benign_attempt(self, ue: _BenignUe, cause: EstablishmentCause) -> None:
        if ue.done:
            return
        self.emit(MsgKind.MSG1, ue.ue_ref)
        self.emit(MsgKind.MSG2, ue.ue_ref)
        self.emit(MsgKind.MSG3, ue.ue_ref, cause)
        accepted = self.gnb_on_msg3(ue.ue_ref)
        if accepted:
            self.schedule(self.now + self.gnb.msg3_to_msg4_delay_ms,
                          lambda: self._benign_on_msg4(ue))
        self.schedule(self.now + self.scenario.t300_ms,
                      lambda: self._benign_t300(ue, cause))

    def _benign_on_msg4(self, ue: _BenignUe) -> None:
        ue.got_msg4 = True
        self.schedule(self.now + self.scenario.msg4_to_msg5_delay_ms,
                      lambda: self._benign_msg5(ue))

    def _benign_msg5(self, ue: _BenignUe) -> None:
        self.emit(MsgKind.MSG5, ue.ue_ref)
        if self.gnb_on_msg5(ue.ue_ref):
            ue.done = True
            if ue.hold_ms is not None:
                self.schedule(self.now + ue.hold_ms, lambda: self._benign_leave(ue))

    def _benign_leave(self, ue: _BenignUe) -> None:
        if self.pool.release(ue.ue_ref):
            self.emit(MsgKind.CONTEXT_RELEASED, ue.ue_ref)

    def _benign_t300(self, ue: _BenignUe, cause: EstablishmentCause) -> None:
        if ue.done or ue.got_msg4 or ue.retries_left == 0:
            return
        ue.retries_left -= 1
        self._benign_attempt(ue, cause)

    def _spawn_benign(self, hold_ms: Optional[int]) -> None:
        ue = _BenignUe(self._fresh_ref("bue"), hold_ms, self.scenario.max_retries)
        self._benign_attempt(ue, EstablishmentCause.MO_DATA)

    def _fleet_arrival(self, n: int, onset: int) -> None:
        self._spawn_benign(self.scenario.benign_hold_ms)
        period = 1000.0 / self.scenario.benign_fleet_rate_per_s
        t_next = onset + _round_half_up((n + 1) * period)
        if t_next < self.scenario.duration_ms:
            self.schedule(t_next, lambda: self._fleet_arrival(n + 1, onset))

    def _background_tick(self) -> None:
        spec = self.scenario.background
        for _ in range(truncated_poisson_sample(spec, self.rng)):
            self._spawn_benign(self.scenario.benign_hold_ms)
        t_next = self.now + spec.tick_ms
        if t_next < self.scenario.duration_ms:
            self.schedule(t_next, self._background_tick)

    # -- run --------------------------------------------------------------

    def run(self) -> SimResult:
        for i in range(self.scenario.preconnected_bue):
            self.pool.preconnect(f"pre-{i}")

        onset = self.scenario.onset_ms
        if self.scenario.onset_jitter_ms:
            onset += self.rng.randrange(self.scenario.onset_jitter_ms)
        if onset >= self.scenario.duration_ms:
            raise ScenarioError("onset lies beyond duration_ms")

        if self.scenario.kind is ScenarioKind.ATTACK:
            self.schedule(onset, lambda: self._attacker_cycle(0, onset))
        elif self.scenario.kind is ScenarioKind.HIGH_LOAD:
            self.schedule(onset, lambda: self._fleet_arrival(0, onset))
        if self.scenario.background is not None:
            self.schedule(0, self._background_tick)

        while self._heap:
            t, _, fn = heapq.heappop(self._heap)
            assert t >= self.now, "event queue regressed"
            self.now = t
            fn()

        violation = validate_stream(self.trace)
        if violation is not None:
            raise AssertionError(f"engine produced an invalid trace: {violation}")
        return summarize_trace(self.trace, self.gnb.waiting_time_ms)


def summarize_trace(trace: list[RrcEvent], waiting_time_ms: int) -> SimResult:
    """Compute SimResult metrics from an event trace alone.

    A Msg3 is rejected iff a MSG3_REJECTED annotation for the same UE follows
    at the same timestamp; everything else that is a Msg3 was accepted.
    """
    n_msg3 = sum(1 for e in trace if e.kind is MsgKind.MSG3)
    n_rejected = sum(1 for e in trace if e.kind is MsgKind.MSG3_REJECTED)

    first_msg3 = next((e.t for e in trace if e.kind is MsgKind.MSG3), None)
    first_reject = next((e.t for e in trace if e.kind is MsgKind.MSG3_REJECTED), None)

    drop = duration_accept = duration_reject = None
    if first_msg3 is not None and first_reject is not None:
        drop = first_reject - first_msg3
        duration_accept = drop
        first_release = next(
            (e.t for e in trace
             if e.kind is MsgKind.CONTEXT_RELEASED and e.t > first_reject), None)
        if first_release is not None:
            duration_reject = first_release - first_reject

    acc_fp = rej_fp = 0
    if first_msg3 is not None:
        end = first_msg3 + waiting_time_ms
        msg3_fp = sum(1 for e in trace if e.kind is MsgKind.MSG3 and e.t < end)
        rej_fp = sum(1 for e in trace if e.kind is MsgKind.MSG3_REJECTED and e.t < end)
        acc_fp = msg3_fp - rej_fp
    avail_fp = None
    if acc_fp + rej_fp > 0:
        avail_fp = 100.0 * acc_fp / (acc_fp + rej_fp)

    return SimResult(
        trace=trace,
        accepted_msg3=n_msg3 - n_rejected,
        rejected_msg3=n_rejected,
        first_msg3_ms=first_msg3,
        first_reject_ms=first_reject,
        drop_time_ms=drop,
        duration_accept_ms=duration_accept,
        duration_reject_ms=duration_reject,
        accepted_first_period=acc_fp,
        rejected_first_period=rej_fp,
        availability_first_period_pct=avail_fp,
    )


def run(scenario: ScenarioSpec, gnb: GnbConfig) -> SimResult:
    """Run one scenario; identical (scenario, gnb, seed) yields identical traces."""
    return _Engine(scenario, gnb).run()
