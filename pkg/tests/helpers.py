"""Shared test utilities: random valid traces and trace-replay bookkeeping."""
from __future__ import annotations

import random

from rrcstorm import EstablishmentCause, MsgKind, RrcEvent

CAUSES = list(EstablishmentCause)
KINDS = list(MsgKind)


def random_trace(rng: random.Random, max_events: int = 40) -> list[RrcEvent]:
    """A structurally valid stream: non-decreasing t, causes on msg3 only."""
    events = []
    t = 0
    for _ in range(rng.randrange(max_events + 1)):
        t += rng.randrange(0, 50)
        kind = rng.choice(KINDS)
        cause = rng.choice(CAUSES) if kind is MsgKind.MSG3 else None
        events.append(RrcEvent(t, kind, f"ue-{rng.getrandbits(16):04x}", cause))
    return events


def occupancy_timeline(trace, preconnected: int) -> list[int]:
    """Pool occupancy reconstructed from the trace alone.

    An accepted Msg3 (no same-timestamp rejection annotation for the same UE)
    takes a context; a context release frees one. Msg5 moves pending to
    connected, which is occupancy-neutral, except that a stale Msg5 (after
    the context already expired) changes nothing -- detected by tracking
    which UEs currently hold a context.
    """
    rejected_at = {(e.t, e.ue_ref) for e in trace if e.kind is MsgKind.MSG3_REJECTED}
    holders: set[str] = {f"pre-{i}" for i in range(preconnected)}
    timeline = []
    for event in trace:
        if event.kind is MsgKind.MSG3 and (event.t, event.ue_ref) not in rejected_at:
            holders.add(event.ue_ref)
        elif event.kind is MsgKind.CONTEXT_RELEASED:
            holders.discard(event.ue_ref)
        timeline.append(len(holders))
    return timeline
