"""Reconstruction of the proof objects and empirical lemma checks."""

from .lemmas import (
    ALL_LEMMAS,
    LEMMAS,
    LemmaCheck,
    LemmaReport,
    TraceReport,
    global_bound,
    state_changes,
    verify_corner_decay,
    verify_corner_growth,
    verify_cross_additions,
    verify_exposure_source,
    verify_global_bound,
    verify_partition,
    verify_state_changes,
    verify_trace,
)
from .partitions import Partition, Region, dyadic_partitions, half_partitions
from .state import (
    EXPOSED,
    FOR_PL,
    FOR_Q,
    HIDDEN,
    NOT_ARRIVED,
    CornerSnapshot,
    CornerTracker,
    ExposureTimeline,
    TraceIndex,
    corner_points,
    corner_timeline,
    exposure_timeline,
    hidden_state,
    maximal_points,
    trace_index,
)
