"""Similarity metrics: the semantic-graph score plus lexical and
AST-based baselines."""

from __future__ import annotations

import math
import os
from collections import Counter
from dataclasses import dataclass
from enum import Enum

from .errors import EmptyInput
from .frontend import parse, tokenize
from .frontend.astnodes import SourceUnit, TokenStream
from .ged import DEFAULT_EXACT_BUDGET, SearchCapped, ged_approx, ged_exact
from .semgraph import SemanticGraph, graph_for_unit, serialize
from .treedist import tree_distance, tsed_tree

EXACT_BUDGET_ENV = "CSSG_EXACT_BUDGET"

#: Branch-and-bound expansions allowed before a pair falls back to the
#: assignment bound; keeps worst-case pairs from stalling batch runs.
EXACT_EXPANSION_CAP = 50_000


class Metric(str, Enum):
    CSSG = "cssg"
    BLEU = "bleu"
    JACCARD = "jaccard"
    TSED = "tsed"


@dataclass(frozen=True)
class SimilarityResult:
    metric: Metric
    score: float
    ged: int | None = None
    d_max: int | None = None
    solver: str | None = None
    degenerate: bool = False


def resolve_exact_budget(budget: int | None = None) -> int:
    if budget is not None:
        return budget
    env = os.environ.get(EXACT_BUDGET_ENV)
    if env is not None:
        try:
            return int(env)
        except ValueError:
            pass
    return DEFAULT_EXACT_BUDGET


def cssg_graphs(g1: SemanticGraph, g2: SemanticGraph, budget: int | None = None) -> SimilarityResult:
    """Normalized similarity between two semantic graphs.

    Score is 1 - GED / D_max with D_max = |N1| + |E1| + |N2| + |E2|;
    root nodes and root edges count. Pairs within the budget use the
    exact solver, larger ones the assignment bound; a pair whose exact
    search blows past the expansion cap falls back to the bound too, and
    the solver field reports what actually ran. The pair is oriented
    canonically first so the outcome cannot depend on argument order.
    """
    budget = resolve_exact_budget(budget)
    d_max = g1.node_count + g1.edge_count + g2.node_count + g2.edge_count
    if g1.node_count <= 1 and g2.node_count <= 1 and not g1.edges and not g2.edges:
        return SimilarityResult(Metric.CSSG, 1.0, ged=0, d_max=d_max, solver="exact", degenerate=True)
    if (g1.node_count, g1.edge_count, serialize(g1)) > (g2.node_count, g2.edge_count, serialize(g2)):
        g1, g2 = g2, g1
    if g1.node_count + g2.node_count <= budget:
        try:
            script = ged_exact(g1, g2, budget=budget, max_expansions=EXACT_EXPANSION_CAP)
        except SearchCapped:
            script = ged_approx(g1, g2)
    else:
        script = ged_approx(g1, g2)
    score = 1.0 - script.total_cost / d_max
    return SimilarityResult(Metric.CSSG, score, ged=script.total_cost, d_max=d_max, solver=script.solver)


def cssg(a: SourceUnit, b: SourceUnit, budget: int | None = None) -> SimilarityResult:
    return cssg_graphs(graph_for_unit(a), graph_for_unit(b), budget)


def _ngrams(tokens: list[str], order: int) -> Counter:
    return Counter(tuple(tokens[i : i + order]) for i in range(len(tokens) - order + 1))


def bleu(reference: TokenStream, candidate: TokenStream) -> SimilarityResult:
    """BLEU-4 over token texts: clipped modified precision, add-one
    smoothing on orders 2..4, and the standard brevity penalty."""
    ref = reference.texts()
    cand = candidate.texts()
    if not ref:
        raise EmptyInput("BLEU needs a non-empty reference stream")
    if not cand:
        return SimilarityResult(Metric.BLEU, 0.0)
    log_sum = 0.0
    for order in range(1, 5):
        cand_counts = _ngrams(cand, order)
        ref_counts = _ngrams(ref, order)
        matches = sum(min(c, ref_counts[g]) for g, c in cand_counts.items())
        possible = max(len(cand) - order + 1, 0)
        if order == 1:
            if matches == 0:
                return SimilarityResult(Metric.BLEU, 0.0)
            p = matches / possible
        else:
            p = (matches + 1) / (possible + 1)
        log_sum += math.log(p)
    brevity = 1.0 if len(cand) >= len(ref) else math.exp(1.0 - len(ref) / len(cand))
    return SimilarityResult(Metric.BLEU, brevity * math.exp(log_sum / 4))


def jaccard(a: TokenStream, b: TokenStream) -> SimilarityResult:
    set_a, set_b = set(a.texts()), set(b.texts())
    if not set_a and not set_b:
        return SimilarityResult(Metric.JACCARD, 1.0)
    score = len(set_a & set_b) / len(set_a | set_b)
    return SimilarityResult(Metric.JACCARD, score)


def tsed(a: SourceUnit, b: SourceUnit, name_sensitive: bool = False) -> SimilarityResult:
    """Normalized tree edit distance over anonymized parse trees:
    max(0, 1 - dist / max(|T1|, |T2|))."""
    t1 = tsed_tree(parse(a), name_sensitive)
    t2 = tsed_tree(parse(b), name_sensitive)
    dist = tree_distance(t1, t2)
    score = max(0.0, 1.0 - dist / max(t1.size(), t2.size()))
    return SimilarityResult(Metric.TSED, score)


def score_pair(
    reference: SourceUnit,
    candidate: SourceUnit,
    metrics: list[Metric],
    budget: int | None = None,
    tsed_name_sensitive: bool = False,
) -> dict[Metric, SimilarityResult]:
    """All requested metrics for one (reference, candidate) pair;
    the first argument plays the reference role for asymmetric metrics."""
    out: dict[Metric, SimilarityResult] = {}
    for metric in metrics:
        if metric == Metric.CSSG:
            out[metric] = cssg(reference, candidate, budget)
        elif metric == Metric.BLEU:
            out[metric] = bleu(tokenize(reference), tokenize(candidate))
        elif metric == Metric.JACCARD:
            out[metric] = jaccard(tokenize(reference), tokenize(candidate))
        elif metric == Metric.TSED:
            out[metric] = tsed(reference, candidate, tsed_name_sensitive)
    return out
