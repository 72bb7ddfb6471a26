"""Low-rank + sparse appearance tracker."""

from ._prpca import (
    Decomposition,
    InputError,
    NumericError,
    TrackerConfig,
    aos,
    center_error,
    decompose,
    default_lambda,
    h_value,
    make_low_rank_sparse,
    p_shrink,
    p_shrink_matrix,
    parse_config,
    precision_curve,
    square_sequence,
    success_curve,
    summarize,
    track,
)

__all__ = [
    "Decomposition",
    "InputError",
    "NumericError",
    "TrackerConfig",
    "aos",
    "center_error",
    "decompose",
    "default_lambda",
    "h_value",
    "make_low_rank_sparse",
    "p_shrink",
    "p_shrink_matrix",
    "parse_config",
    "precision_curve",
    "square_sequence",
    "success_curve",
    "summarize",
    "track",
]
