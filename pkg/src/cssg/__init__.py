"""cssg: semantics-aware code similarity via program dependence graphs.

Scores a pair of programs by building snippet-level semantic graphs
(per-function PDGs joined under a global root with call edges) and
normalizing their constrained graph edit distance; ships token- and
AST-level baselines plus a triplet evaluation harness.
"""

__version__ = "0.1.0"

from .frontend.astnodes import Language, SourceUnit
from .metrics import Metric, SimilarityResult, bleu, cssg, jaccard, tsed
from .semgraph import SemanticGraph, graph_for_unit

__all__ = [
    "Language",
    "Metric",
    "SemanticGraph",
    "SimilarityResult",
    "SourceUnit",
    "__version__",
    "bleu",
    "cssg",
    "graph_for_unit",
    "jaccard",
    "tsed",
]
