"""Constrained graph edit distance between semantic graphs.

Matching always fixes root-to-root; function entries match only on
identical names and other nodes only on identical normalized labels.
All edit operations cost 1 and substitution between compatible nodes is
free, so GED(g1, g2) = |N1| + |N2| - 2*m + |E1| + |E2| - 2*me for the
best mapping with m matched nodes and me matched (kind-equal) edges.

Three routes: a branch-and-bound exact solver, an assignment-based
upper bound for large pairs, and an exhaustive-enumeration oracle used
by the test suite.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linear_sum_assignment

from .errors import BudgetExceeded, OracleTooLarge
from .labels import LabelCategory
from .pdg import EdgeKind
from .semgraph import GraphNode, SemanticGraph

DEFAULT_EXACT_BUDGET = 80
ORACLE_NODE_LIMIT = 8

_BIG = 10**6


@dataclass(frozen=True)
class CostModel:
    """Uniform, symmetric costs; substitution is free iff labels are
    compatible and forbidden otherwise."""

    node_insert: int = 1
    node_delete: int = 1
    edge_insert: int = 1
    edge_delete: int = 1


@dataclass
class NodeMapping:
    """Partial injective map from g1 node ids to g2 node ids; always
    contains the root pair."""

    pairs: dict[int, int] = field(default_factory=dict)


@dataclass(frozen=True)
class EditOp:
    op: str  # substitute-node | delete-node | insert-node | substitute-edge | delete-edge | insert-edge
    subject: tuple
    cost: int


@dataclass
class EditScript:
    operations: tuple[EditOp, ...]
    total_cost: int
    mapping: NodeMapping
    solver: str


def compatible(a: GraphNode, b: GraphNode) -> bool:
    if a.label.category == LabelCategory.ROOT and b.label.category == LabelCategory.ROOT:
        return True
    return a.label == b.label


def induced_cost(g1: SemanticGraph, g2: SemanticGraph, pairs: dict[int, int]) -> int:
    matched_edges = 0
    e2 = g2.edges
    for s, d, k in g1.edges:
        if s in pairs and d in pairs and (pairs[s], pairs[d], k) in e2:
            matched_edges += 1
    m = len(pairs)
    return (
        (g1.node_count - m)
        + (g2.node_count - m)
        + (g1.edge_count - matched_edges)
        + (g2.edge_count - matched_edges)
    )


def build_script(g1: SemanticGraph, g2: SemanticGraph, pairs: dict[int, int], solver: str) -> EditScript:
    ops: list[EditOp] = []
    image = set(pairs.values())
    for u, v in sorted(pairs.items()):
        ops.append(EditOp("substitute-node", (u, v), 0))
    for node in g1.nodes:
        if node.id not in pairs:
            ops.append(EditOp("delete-node", (node.id,), 1))
    for node in g2.nodes:
        if node.id not in image:
            ops.append(EditOp("insert-node", (node.id,), 1))
    for s, d, k in sorted(g1.edges, key=_edge_key):
        if s in pairs and d in pairs and (pairs[s], pairs[d], k) in g2.edges:
            ops.append(EditOp("substitute-edge", ((s, d, k), (pairs[s], pairs[d], k)), 0))
        else:
            ops.append(EditOp("delete-edge", ((s, d, k),), 1))
    inverse = {v: u for u, v in pairs.items()}
    for s, d, k in sorted(g2.edges, key=_edge_key):
        if s in inverse and d in inverse and (inverse[s], inverse[d], k) in g1.edges:
            continue  # matched above
        ops.append(EditOp("insert-edge", ((s, d, k),), 1))
    total = sum(op.cost for op in ops)
    return EditScript(tuple(ops), total, NodeMapping(dict(pairs)), solver)


def _edge_key(edge: tuple[int, int, EdgeKind]) -> tuple:
    return (edge[0], edge[1], edge[2].value)


def verify_script(g1: SemanticGraph, g2: SemanticGraph, script: EditScript) -> bool:
    """Replay the script on g1 and check the result equals g2 under the
    node correspondence it defines."""
    pairs = script.mapping.pairs
    by_id1, by_id2 = g1.node_by_id(), g2.node_by_id()
    for u, v in pairs.items():
        if not compatible(by_id1[u], by_id2[v]):
            return False
    surviving = {
        (pairs[s], pairs[d], k)
        for op in script.operations
        if op.op == "substitute-edge"
        for (s, d, k) in [op.subject[0]]
    }
    inserted = {op.subject[0] for op in script.operations if op.op == "insert-edge"}
    if surviving | inserted != set(g2.edges):
        return False
    mapped_nodes = {op.subject[1] for op in script.operations if op.op == "substitute-node"}
    inserted_nodes = {op.subject[0] for op in script.operations if op.op == "insert-node"}
    return mapped_nodes | inserted_nodes == set(by_id2)


# --- shared solver scaffolding -------------------------------------------


class _PairContext:
    def __init__(self, g1: SemanticGraph, g2: SemanticGraph):
        self.g1, self.g2 = g1, g2
        self.n1, self.n2 = g1.node_count, g2.node_count
        self.nodes1 = sorted(g1.nodes, key=lambda n: n.id)
        self.nodes2 = sorted(g2.nodes, key=lambda n: n.id)
        self.e1, self.e2 = g1.edges, g2.edges
        self.adj1 = self._adjacency(g1)
        self.adj2 = self._adjacency(g2)
        self.compat = {
            n1.id: [n2.id for n2 in self.nodes2 if compatible(n1, n2)] for n1 in self.nodes1
        }

    @staticmethod
    def _adjacency(g: SemanticGraph) -> dict[int, list[tuple[int, bool, EdgeKind]]]:
        adj: dict[int, list[tuple[int, bool, EdgeKind]]] = {n.id: [] for n in g.nodes}
        for s, d, k in g.edges:
            adj[s].append((d, True, k))
            if s != d:
                adj[d].append((s, False, k))
        return adj


def _neighborhood_cost(ctx: _PairContext, u: int, v: int) -> int:
    def profile(adj, node):
        c: Counter = Counter()
        for _, is_out, kind in adj[node]:
            c[(is_out, kind)] += 1
        return c

    p1, p2 = profile(ctx.adj1, u), profile(ctx.adj2, v)
    keys = set(p1) | set(p2)
    return sum(abs(p1[k] - p2[k]) for k in keys)


# --- approximate solver ----------------------------------------------------


def _lap_mapping(ctx: _PairContext) -> dict[int, int]:
    n1, n2 = ctx.n1, ctx.n2
    size = n1 + n2
    cost = np.full((size, size), float(_BIG))
    ids1 = [n.id for n in ctx.nodes1]
    ids2 = [n.id for n in ctx.nodes2]
    index2 = {v: j for j, v in enumerate(ids2)}
    r1, r2 = ctx.g1.root_id, ctx.g2.root_id
    for i, u in enumerate(ids1):
        for v in ctx.compat[u]:
            if (u == r1) != (v == r2):
                continue
            cost[i, index2[v]] = _neighborhood_cost(ctx, u, v)
        deg = len(ctx.adj1[u])
        if u != r1:
            cost[i, n2 + i] = 1 + deg
    for j, v in enumerate(ids2):
        deg = len(ctx.adj2[v])
        if v != r2:
            cost[n1 + j, j] = 1 + deg
    cost[n1:, n2:] = 0.0
    rows, cols = linear_sum_assignment(cost)
    mapping: dict[int, int] = {}
    for i, j in zip(rows, cols):
        if i < n1 and j < n2 and cost[i, j] < _BIG:
            mapping[ids1[i]] = ids2[j]
    # The root pair is mandatory; evict any stray claim on either root.
    mapping = {u: v for u, v in mapping.items() if u == r1 or v != r2}
    mapping[r1] = r2
    return mapping


def _refine_mapping(ctx: _PairContext, mapping: dict[int, int]) -> dict[int, int]:
    """First-improvement hill climbing over remap/unmap/add/swap moves."""
    g1, g2 = ctx.g1, ctx.g2
    by_id1, by_id2 = g1.node_by_id(), g2.node_by_id()
    best = induced_cost(g1, g2, mapping)
    r1 = g1.root_id

    def trials(current: dict[int, int]):
        used = set(current.values())
        for u in sorted(current):
            if u == r1:
                continue
            dropped = dict(current)
            del dropped[u]
            yield dropped
            for v in ctx.compat[u]:
                if v != current[u] and v not in used:
                    remapped = dict(current)
                    remapped[u] = v
                    yield remapped
        for u in sorted(n.id for n in ctx.nodes1 if n.id not in current):
            for v in ctx.compat[u]:
                if v not in used:
                    added = dict(current)
                    added[u] = v
                    yield added
        mapped = sorted(u for u in current if u != r1)
        for i, a in enumerate(mapped):
            for b in mapped[i + 1 :]:
                va, vb = current[a], current[b]
                if compatible(by_id1[a], by_id2[vb]) and compatible(by_id1[b], by_id2[va]):
                    swapped = dict(current)
                    swapped[a], swapped[b] = vb, va
                    yield swapped

    for _ in range(200):
        improved = False
        for trial in trials(mapping):
            cost = induced_cost(g1, g2, trial)
            if cost < best:
                mapping, best = trial, cost
                improved = True
                break
        if not improved:
            break
    return mapping


def ged_approx(g1: SemanticGraph, g2: SemanticGraph) -> EditScript:
    """Assignment-based upper bound on the exact GED.

    Both directions are solved and the cheaper mapping kept, which makes
    the reported cost symmetric in its arguments by construction.
    """
    ctx = _PairContext(g1, g2)
    ctx_rev = _PairContext(g2, g1)
    forward = _refine_mapping(ctx, _lap_mapping(ctx))
    backward = {v: u for u, v in _refine_mapping(ctx_rev, _lap_mapping(ctx_rev)).items()}
    cost_f = induced_cost(g1, g2, forward)
    cost_b = induced_cost(g1, g2, backward)
    mapping = forward if cost_f <= cost_b else backward
    return build_script(g1, g2, mapping, solver="approx")


# --- exact solver -----------------------------------------------------------


class SearchCapped(Exception):
    """Internal: the optional expansion cap was hit before optimality."""


class _BranchAndBound:
    def __init__(
        self,
        ctx: _PairContext,
        incumbent_cost: int,
        incumbent_map: dict[int, int],
        max_expansions: int | None = None,
    ):
        self.ctx = ctx
        self.best_cost = incumbent_cost
        self.best_map = dict(incumbent_map)
        self.max_expansions = max_expansions
        self.expansions = 0
        g1, g2 = ctx.g1, ctx.g2
        self.n1 = g1.node_count
        self.decided: dict[int, int | None] = {}
        self.used: set[int] = set()
        self.inverse: dict[int, int] = {}
        self.key1 = {n.id: self._label_key(n) for n in ctx.nodes1}
        self.key2 = {n.id: self._label_key(n) for n in ctx.nodes2}
        self.remaining1 = Counter(self.key1.values())
        self.remaining2 = Counter(self.key2.values())
        # Edges with both endpoints still undecided/unused, per kind.
        self.free_e1 = Counter(k for _, _, k in g1.edges)
        self.free_e2 = Counter(k for _, _, k in g2.edges)
        # Decided-neighbor counts drive the dynamic search order.
        self.link_count = {n.id: 0 for n in ctx.nodes1}

    @staticmethod
    def _label_key(node: GraphNode) -> tuple:
        if node.label.category == LabelCategory.ROOT:
            return ("root",)
        return (node.label.category.value, node.label.detail)

    def _frontier_profile(self, adj, node_id: int, open_set_check) -> Counter:
        profile: Counter = Counter()
        for other, is_out, kind in adj[node_id]:
            if other != node_id and open_set_check(other):
                profile[(is_out, kind)] += 1
        return profile

    def lower_bound(self) -> int:
        matches = sum(min(c, self.remaining2[key]) for key, c in self.remaining1.items())
        r1 = sum(self.remaining1.values())
        r2 = sum(self.remaining2.values())
        h_nodes = r1 + r2 - 2 * matches

        # Edges from a decided pair into the open region can match only
        # edges of the image into its open region, direction and kind
        # preserved; edges of deleted nodes into the open region are a
        # sure unit cost each; fully open edges match per kind.
        ctx = self.ctx
        decided, used = self.decided, self.used
        open1 = lambda w: w not in decided
        open2 = lambda w: w not in used
        h_edges = 0
        for u, v in decided.items():
            d1 = self._frontier_profile(ctx.adj1, u, open1)
            if v is None:
                h_edges += sum(d1.values())
                continue
            d2 = self._frontier_profile(ctx.adj2, v, open2)
            for key in set(d1) | set(d2):
                h_edges += abs(d1[key] - d2[key])
        for kind in EdgeKind:
            h_edges += abs(self.free_e1[kind] - self.free_e2[kind])
        return h_nodes + h_edges

    def _delta_assign(self, u: int, v: int | None) -> int:
        """Exact cost increment for deciding u -> v (None = delete)."""
        ctx = self.ctx
        delta = 0
        if v is None:
            delta += 1
            for other, _, _ in ctx.adj1[u]:
                if other == u or other in self.decided:
                    delta += 1
            return delta
        decided, e1, e2 = self.decided, ctx.e1, ctx.e2
        for other, is_out, kind in ctx.adj1[u]:
            if other != u and other not in decided:
                continue
            w = v if other == u else decided[other]
            if w is None:
                delta += 1  # g1 edge to a deleted node
                continue
            edge2 = (v, w, kind) if is_out else (w, v, kind)
            if edge2 not in e2:
                delta += 1  # delete: no matching edge between images
        for other, is_out, kind in ctx.adj2[v]:
            if other != v and other not in self.used:
                continue
            pre = u if other == v else self.inverse[other]
            edge1 = (u, u, kind) if other == v else ((u, pre, kind) if is_out else (pre, u, kind))
            if edge1 not in e1:
                delta += 1  # insert: g2 edge with no pre-image
        return delta

    def _apply(self, u: int, v: int | None) -> None:
        self.decided[u] = v
        self.remaining1[self.key1[u]] -= 1
        for other, _, kind in self.ctx.adj1[u]:
            if other == u:
                self.free_e1[kind] -= 1
            elif other not in self.decided:
                self.free_e1[kind] -= 1
                self.link_count[other] += 1
        if v is not None:
            self.used.add(v)
            self.inverse[v] = u
            self.remaining2[self.key2[v]] -= 1
            for other, _, kind in self.ctx.adj2[v]:
                if other == v or other not in self.used:
                    self.free_e2[kind] -= 1

    def _undo(self, u: int, v: int | None) -> None:
        del self.decided[u]
        self.remaining1[self.key1[u]] += 1
        for other, _, kind in self.ctx.adj1[u]:
            if other == u:
                self.free_e1[kind] += 1
            elif other not in self.decided:
                self.free_e1[kind] += 1
                self.link_count[other] -= 1
        if v is not None:
            self.used.discard(v)
            del self.inverse[v]
            self.remaining2[self.key2[v]] += 1
            for other, _, kind in self.ctx.adj2[v]:
                if other == v or other not in self.used:
                    self.free_e2[kind] += 1

    def _next_node(self) -> int:
        # Connected-first: most decided neighbors, then fewest candidates.
        best_u = -1
        best_key = None
        for node in self.ctx.nodes1:
            u = node.id
            if u in self.decided:
                continue
            key = (-self.link_count[u], len(self.ctx.compat[u]), u)
            if best_key is None or key < best_key:
                best_key = key
                best_u = u
        return best_u

    def solve(self) -> dict[int, int]:
        self._dfs(0, 0)
        return self.best_map

    def _dfs(self, depth: int, cost: int) -> None:
        self.expansions += 1
        if self.max_expansions is not None and self.expansions > self.max_expansions:
            raise SearchCapped(self.expansions)
        bound = self.lower_bound()
        if cost + bound >= self.best_cost:
            return
        ctx = self.ctx
        if depth == self.n1:
            # With every g1 node decided the bound is exact: unused g2
            # nodes plus g2 edges touching at least one unused node.
            self.best_cost = cost + bound
            self.best_map = {u: v for u, v in self.decided.items() if v is not None}
            return
        if depth == 0:
            u = ctx.g1.root_id
            options: list[int | None] = [ctx.g2.root_id]
        else:
            u = self._next_node()
            options = [v for v in ctx.compat[u] if v not in self.used and v != ctx.g2.root_id]
            options.append(None)
        scored = sorted(
            ((self._delta_assign(u, v), -1 if v is None else v) for v in options),
            key=lambda t: (t[0], t[1] == -1, t[1]),
        )
        for delta, v_key in scored:
            v = None if v_key == -1 else v_key
            self._apply(u, v)
            self._dfs(depth + 1, cost + delta)
            self._undo(u, v)


def ged_exact(
    g1: SemanticGraph,
    g2: SemanticGraph,
    budget: int = DEFAULT_EXACT_BUDGET,
    max_expansions: int | None = None,
) -> EditScript:
    """Globally minimal edit script via branch-and-bound.

    The admissible bound combines the label-multiset symmetric
    difference of open nodes with per-class edge count differences; the
    approx solver seeds the incumbent. ``max_expansions`` is an escape
    hatch for batch callers: when set, an over-budget search raises
    SearchCapped instead of running to optimality.
    """
    if g1.node_count + g2.node_count > budget:
        raise BudgetExceeded(
            f"combined node count {g1.node_count + g2.node_count} exceeds budget {budget}"
        )
    seed = ged_approx(g1, g2)
    ctx = _PairContext(g1, g2)
    solver = _BranchAndBound(ctx, seed.total_cost, seed.mapping.pairs, max_expansions)
    mapping = solver.solve()
    return build_script(g1, g2, mapping, solver="exact")


# --- exhaustive oracle ------------------------------------------------------


def ged_oracle(g1: SemanticGraph, g2: SemanticGraph) -> int:
    """True minimum by enumerating every root-fixed injective compatible
    mapping. No pruning: this is the independent yardstick for the tests."""
    if g1.node_count > ORACLE_NODE_LIMIT or g2.node_count > ORACLE_NODE_LIMIT:
        raise OracleTooLarge(
            f"oracle accepts at most {ORACLE_NODE_LIMIT} nodes per graph"
        )
    ctx = _PairContext(g1, g2)
    others = [n.id for n in ctx.nodes1 if n.id != g1.root_id]
    best = [induced_cost(g1, g2, {g1.root_id: g2.root_id})]

    def enumerate_maps(index: int, mapping: dict[int, int], used: set[int]) -> None:
        if index == len(others):
            cost = induced_cost(g1, g2, mapping)
            if cost < best[0]:
                best[0] = cost
            return
        u = others[index]
        enumerate_maps(index + 1, mapping, used)
        for v in ctx.compat[u]:
            if v in used or v == g2.root_id:
                continue
            mapping[u] = v
            used.add(v)
            enumerate_maps(index + 1, mapping, used)
            del mapping[u]
            used.discard(v)

    enumerate_maps(0, {g1.root_id: g2.root_id}, set())
    return best[0]
