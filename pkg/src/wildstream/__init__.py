"""Small-space streaming pattern matching for patterns with wildcards."""

from .candidate_queue import CandidateFingerprintQueue, FullSI, ReducedSI, UIData, precompute_ui
from .engine import MatcherState, MatchReport, Metrics, preprocess, process_char, snapshot_metrics
from .fingerprint import (
    EMPTY,
    FieldParams,
    Fingerprint,
    fp_append,
    fp_concat,
    fp_empty,
    fp_of,
    fp_remove_prefix,
    fp_remove_suffix,
)
from .offset import (
    OffsetInstance,
    PrimeCover,
    SmallWPMatcher,
    build_offset_instance,
    build_prime_cover,
    dict_process_char,
    gamma_size,
    small_wp_process_char,
)
from .partition import (
    IntervalPartition,
    PatternInterval,
    preliminary_partition,
    secondary_partition,
    verify_partition_properties,
)
from .periodicity import (
    ShiftCompat,
    certified_pi_upper_bound,
    is_periodic,
    max_window_occurrences,
    principle_period,
    wildcard_period_length,
)
from .reference import NaiveStream, OracleResult, naive_stream, oracle_match, prelim_fingerprint_stream
from .symbols import WILDCARD
from .tradeoff import TradeoffState, amortized_report, build_psi, compute_p_star, tradeoff_process_char

__all__ = [
    "CandidateFingerprintQueue",
    "EMPTY",
    "FieldParams",
    "Fingerprint",
    "FullSI",
    "IntervalPartition",
    "MatchReport",
    "MatcherState",
    "Metrics",
    "NaiveStream",
    "OffsetInstance",
    "OracleResult",
    "PatternInterval",
    "PrimeCover",
    "ReducedSI",
    "ShiftCompat",
    "SmallWPMatcher",
    "TradeoffState",
    "UIData",
    "WILDCARD",
    "amortized_report",
    "build_offset_instance",
    "build_prime_cover",
    "build_psi",
    "certified_pi_upper_bound",
    "compute_p_star",
    "dict_process_char",
    "fp_append",
    "fp_concat",
    "fp_empty",
    "fp_of",
    "fp_remove_prefix",
    "fp_remove_suffix",
    "gamma_size",
    "is_periodic",
    "max_window_occurrences",
    "naive_stream",
    "oracle_match",
    "precompute_ui",
    "preliminary_partition",
    "prelim_fingerprint_stream",
    "preprocess",
    "principle_period",
    "process_char",
    "secondary_partition",
    "small_wp_process_char",
    "snapshot_metrics",
    "tradeoff_process_char",
    "verify_partition_properties",
    "wildcard_period_length",
]
