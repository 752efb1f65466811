"""Shared fixtures: random graph/CFG generators and independent oracles."""

from __future__ import annotations

import random
from pathlib import Path

import pytest

from cssg.cfg import Cfg, CfgNode, CfgNodeKind, ensure_totality
from cssg.frontend.astnodes import Language, SourceUnit
from cssg.labels import ROOT_LABEL, LabelCategory, NodeLabel, operation
from cssg.pdg import EdgeKind
from cssg.semgraph import GraphNode, SemanticGraph

DATA = Path(__file__).parent / "data"
GOLDEN = DATA / "golden"
IDENTITY = DATA / "identity"
CORPUS = DATA / "desk_corpus.jsonl"


@pytest.fixture(scope="session")
def corpus_text() -> str:
    return CORPUS.read_text(encoding="utf-8")


def unit_from_path(path: Path) -> SourceUnit:
    language = Language.PYTHON if path.suffix == ".py" else Language.JAVA
    return SourceUnit(language, path.read_text(encoding="utf-8"), path.name)


def identity_units() -> list[SourceUnit]:
    return [unit_from_path(p) for p in sorted(IDENTITY.iterdir())]


# --- random semantic graphs -------------------------------------------------

_LABEL_POOL = [
    NodeLabel(LabelCategory.OPERATION, d) for d in ["assign", "+", "call", "<", "return", "for"]
] + [
    NodeLabel(LabelCategory.IDENTIFIER_CLASS, "VAR"),
    NodeLabel(LabelCategory.CONSTANT_CLASS, "INT_LIT"),
]

_EDGE_KINDS = [EdgeKind.DATA, EdgeKind.CONTROL, EdgeKind.CALL, EdgeKind.ROOT]


def random_semantic_graph(rng: random.Random, n_nodes: int, edge_factor: float = 1.5) -> SemanticGraph:
    """Labeled digraph with a root at id 0; structure is arbitrary since
    the GED solvers only rely on labels and edge kinds."""
    nodes = [GraphNode(0, ROOT_LABEL, "")]
    for i in range(1, n_nodes):
        nodes.append(GraphNode(i, rng.choice(_LABEL_POOL), "f"))
    edges = set()
    for _ in range(int(edge_factor * n_nodes)):
        s = rng.randrange(n_nodes)
        d = rng.randrange(n_nodes)
        if d == 0:
            continue  # roots keep zero in-degree
        edges.add((s, d, rng.choice(_EDGE_KINDS)))
    return SemanticGraph(nodes=nodes, edges=frozenset(edges))


# --- random CFGs and independent dependence oracles ---------------------------

_VARS = ["a", "b", "c"]


def random_cfg(rng: random.Random, n_nodes: int, with_defs: bool = True) -> Cfg:
    """Small arbitrary CFG with entry 0 and exit n-1, patched to total
    reachability the same way build_cfg patches real ones."""
    cfg = Cfg(function_name="t", params=[])
    for i in range(n_nodes):
        if i == 0:
            kind = CfgNodeKind.ENTRY
        elif i == n_nodes - 1:
            kind = CfgNodeKind.EXIT
        else:
            kind = CfgNodeKind.STATEMENT
        defs = frozenset(rng.sample(_VARS, rng.randint(0, 2))) if with_defs and kind != CfgNodeKind.EXIT else frozenset()
        uses = frozenset(rng.sample(_VARS, rng.randint(0, 2))) if with_defs and kind != CfgNodeKind.EXIT else frozenset()
        cfg.nodes[i] = CfgNode(i, kind, operation(f"op{i}"), (i, i + 1), defs, uses)
    cfg.entry_id = 0
    cfg.exit_id = n_nodes - 1
    for i in range(n_nodes - 1):
        out_degree = rng.randint(1, 2)
        for _ in range(out_degree):
            cfg.add_edge(i, rng.randrange(1, n_nodes))
    ensure_totality(cfg)
    return cfg


def reaches_avoiding(succ: dict[int, list[int]], src: int, dst: int, avoid: int) -> bool:
    if src == avoid:
        return False
    seen = {src}
    stack = [src]
    while stack:
        node = stack.pop()
        if node == dst:
            return True
        for nxt in succ.get(node, []):
            if nxt != avoid and nxt not in seen:
                seen.add(nxt)
                stack.append(nxt)
    return False


def control_dependence_oracle(cfg: Cfg) -> set[tuple[int, int]]:
    """Per-pair definition checked by reachability, on the same
    entry->exit augmented graph the implementation uses: B depends on A
    iff B post-dominates some successor of A but not A itself (strictly)."""
    nodes = list(cfg.nodes)
    succ = {n: list(dict.fromkeys(cfg.successor_ids(n))) for n in nodes}
    if cfg.exit_id not in succ[cfg.entry_id]:
        succ[cfg.entry_id].append(cfg.exit_id)

    def pdoms(b: int, x: int) -> bool:
        if x == b:
            return True
        return not reaches_avoiding(succ, x, cfg.exit_id, b)

    deps = set()
    for a in nodes:
        for b in nodes:
            if not any(pdoms(b, s) for s in succ[a]):
                continue
            if b != a and pdoms(b, a):
                continue
            deps.add((a, b))
    return deps


def reaching_walk_oracle(cfg: Cfg, max_len: int = 10) -> set[tuple[int, int, str]]:
    """Def-use pairs witnessed by explicit walks from entry of bounded
    length; exact for small graphs because a minimal witness is simple."""
    found: set[tuple[int, int, str]] = set()

    def extend(walk: list[int], live: dict[str, set[int]]) -> None:
        node = walk[-1]
        for var in cfg.nodes[node].uses:
            for def_site in live.get(var, ()):
                found.add((def_site, node, var))
        if len(walk) > max_len:
            return
        new_live = {v: set(sites) for v, sites in live.items()}
        if cfg.nodes[node].defs:
            for var in cfg.nodes[node].defs:
                new_live[var] = {node}
        for nxt in cfg.successor_ids(node):
            extend(walk + [nxt], new_live)

    extend([cfg.entry_id], {})
    return found
