"""Staff-normalized research productivity indicators.

Thin wrapper over the native module; every public callable lives in
``prodrank._core``.
"""

from ._core import (
    AnalysisError,
    analyze,
    average_ranks,
    compare,
    default_params_json,
    generate_corpus_files,
    percentile_scale,
    position_weights,
    quartile_of,
    spearman_rho,
    summarize_corpus,
    validate_corpus,
)

__all__ = [
    "AnalysisError",
    "analyze",
    "average_ranks",
    "compare",
    "default_params_json",
    "generate_corpus_files",
    "percentile_scale",
    "position_weights",
    "quartile_of",
    "spearman_rho",
    "summarize_corpus",
    "validate_corpus",
]

__version__ = "0.1.0"
