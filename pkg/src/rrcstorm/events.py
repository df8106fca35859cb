"""RRC control-plane event vocabulary shared by simulator, telemetry and detector."""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Optional


class MsgKind(str, Enum):
    """Connection-establishment messages plus two simulator-side annotations."""

    MSG1 = "msg1"  # RA preamble
    MSG2 = "msg2"  # RA response
    MSG3 = "msg3"  # RRC Setup Request
    MSG4 = "msg4"  # RRC Setup
    MSG5 = "msg5"  # RRC Setup Complete
    MSG3_REJECTED = "msg3_rejected"      # gNB had no free context
    CONTEXT_RELEASED = "context_released"  # waiting-time expiry or UE disconnect


class EstablishmentCause(str, Enum):
    MO_DATA = "mo_data"
    MO_SIGNALLING = "mo_signalling"
    EMERGENCY = "emergency"
    HIGH_PRIORITY_ACCESS = "high_priority_access"


@dataclass(frozen=True)
class RrcEvent:
    """One timestamped control-plane message observation.

    ``t`` is simulated time in integer milliseconds, starting at 0.
    ``ue_ref`` is opaque: consumers other than the simulator must not branch
    on its value (a storm attacker registers under a fresh random identity
    per attempt, so identity carries no information).
    ``cause`` is present exactly on MSG3 events.
    """

    t: int
    kind: MsgKind
    ue_ref: str
    cause: Optional[EstablishmentCause] = None


@dataclass(frozen=True)
class StreamViolation:
    index: int
    reason: str

    def __str__(self) -> str:
        return f"event {self.index}: {self.reason}"


def validate_stream(events: Iterable[RrcEvent]) -> Optional[StreamViolation]:
    """Return the first violation in an ordered event stream, or None if ok.

    Violations are data findings, not failures: negative timestamp, timestamp
    regression between adjacent events, cause missing on MSG3, cause present
    on a non-MSG3 event.
    """
    prev_t = None
    for i, ev in enumerate(events):
        if ev.t < 0:
            return StreamViolation(i, f"negative timestamp {ev.t}")
        if prev_t is not None and ev.t < prev_t:
            return StreamViolation(i, f"timestamp regression {prev_t} -> {ev.t}")
        if ev.kind is MsgKind.MSG3 and ev.cause is None:
            return StreamViolation(i, "msg3 without establishment cause")
        if ev.kind is not MsgKind.MSG3 and ev.cause is not None:
            return StreamViolation(i, f"cause set on {ev.kind.value}")
        prev_t = ev.t
    return None
