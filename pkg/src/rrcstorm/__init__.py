"""rrcstorm: deterministic 5G RRC signaling-storm simulation and detection.

A discrete-event model of a gNB's bounded UE-context pool under connection
floods and legitimate surges, a closed-form availability model that serves as
its oracle, a sliding-window threshold detector that classifies gNB state
from the Msg3/Msg4/Msg5 stream alone, and JSONL telemetry for offline replay.
"""
from .analytic import (
    AnalyticInputs,
    AnalyticOutputs,
    WAITING_TIME_EFFECTIVE_MS,
    WAITING_TIME_NOMINAL_MS,
    accept_reject_durations,
    accepted_count,
    availability_rate,
    drop_time,
    full_model,
    rejected_count,
)
from .detector import (
    DetectionVerdict,
    DetectorConfig,
    GnbState,
    SlidingWindowDetector,
    StreamOrderError,
    WindowFeatures,
    classify,
    detection_latency,
    run_stream,
)
from .events import (
    EstablishmentCause,
    MsgKind,
    RrcEvent,
    StreamViolation,
    validate_stream,
)
from .simnet import (
    GnbConfig,
    ResourcePool,
    ScenarioError,
    ScenarioKind,
    ScenarioSpec,
    SimResult,
    TruncatedPoissonSpec,
    run,
    summarize_trace,
    truncated_poisson_sample,
)
from .telemetry import (
    TRACE_SUFFIX,
    VERDICT_SUFFIX,
    TraceParseError,
    read_trace,
    read_verdicts,
    write_trace,
    write_verdicts,
)

__version__ = "0.1.0"

__all__ = [
    "AnalyticInputs",
    "AnalyticOutputs",
    "DetectionVerdict",
    "DetectorConfig",
    "EstablishmentCause",
    "GnbConfig",
    "GnbState",
    "MsgKind",
    "ResourcePool",
    "RrcEvent",
    "ScenarioError",
    "ScenarioKind",
    "ScenarioSpec",
    "SimResult",
    "SlidingWindowDetector",
    "StreamOrderError",
    "StreamViolation",
    "TraceParseError",
    "TruncatedPoissonSpec",
    "TRACE_SUFFIX",
    "VERDICT_SUFFIX",
    "WAITING_TIME_EFFECTIVE_MS",
    "WAITING_TIME_NOMINAL_MS",
    "WindowFeatures",
    "accept_reject_durations",
    "accepted_count",
    "availability_rate",
    "classify",
    "detection_latency",
    "drop_time",
    "full_model",
    "read_trace",
    "read_verdicts",
    "rejected_count",
    "run",
    "run_stream",
    "summarize_trace",
    "truncated_poisson_sample",
    "validate_stream",
    "write_trace",
    "write_verdicts",
]
