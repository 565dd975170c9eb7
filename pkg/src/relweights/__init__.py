"""Supporting (max-min) and covering (min-max) weights for finite sets of
nonnegative functions, and relevance scoring built on them."""

__version__ = "0.1.0"

from .core import (
    FunctionSet,
    IndexSet,
    NonnegFunction,
    WeightVector,
    make_weight,
    pairing,
    transpose,
)
from .simplex import Kind, LpProblem, LpSolution, build_problem, solve_lp
from .weights import (
    DualityReport,
    WeightSolution,
    covering_weight,
    hat_covering_weight,
    hat_supporting_weight,
    supporting_weight,
    verify_theorem3,
)
from .relevance import (
    RelevanceReport,
    classify,
    irrelevance_score,
    multi_classify,
    relevance_score,
)
from .corpus import (
    CorpusBundle,
    TokenizerConfig,
    build_bundle,
    frequency_weight,
    project,
    support_report,
    tokenize,
)

__all__ = [
    "FunctionSet", "IndexSet", "NonnegFunction", "WeightVector", "make_weight",
    "pairing", "transpose", "Kind", "LpProblem", "LpSolution", "build_problem",
    "solve_lp", "DualityReport", "WeightSolution", "covering_weight",
    "hat_covering_weight", "hat_supporting_weight", "supporting_weight",
    "verify_theorem3", "RelevanceReport", "classify", "irrelevance_score",
    "multi_classify", "relevance_score", "CorpusBundle", "TokenizerConfig",
    "build_bundle", "frequency_weight", "project", "support_report", "tokenize",
]
