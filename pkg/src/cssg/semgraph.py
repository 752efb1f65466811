"""Snippet-level semantic graphs: function PDGs joined under a global root.

The integrated graph adds one root node with an edge to every function
entry, plus call edges from call sites to the entries of callees that
are defined inside the same unit. Node ids are canonical (root first,
then functions by name, nodes by span) so serialization is reproducible.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .frontend import extract_functions, parse
from .frontend.astnodes import SourceUnit
from .labels import ROOT_LABEL, LabelCategory, NodeLabel, function_label
from .pdg import EdgeKind, FunctionGraph, build_function_graph


@dataclass(frozen=True)
class GraphNode:
    id: int
    label: NodeLabel
    fn: str
    span: tuple[int, int] | None = None


@dataclass(frozen=True)
class CallEdge:
    src: int
    dst: int
    callee_name: str


@dataclass
class SemanticGraph:
    nodes: list[GraphNode] = field(default_factory=list)
    edges: frozenset[tuple[int, int, EdgeKind]] = frozenset()
    root_id: int = 0
    call_edges: tuple[CallEdge, ...] = ()

    @property
    def node_count(self) -> int:
        return len(self.nodes)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def node_by_id(self) -> dict[int, GraphNode]:
        return {n.id: n for n in self.nodes}

    def labels(self) -> list[NodeLabel]:
        return [n.label for n in self.nodes]


def root_only_graph() -> SemanticGraph:
    return SemanticGraph(nodes=[GraphNode(0, ROOT_LABEL, "")])


def _disambiguated_names(graphs: list[FunctionGraph]) -> list[str]:
    counts: dict[str, int] = {}
    for g in graphs:
        counts[g.function_name] = counts.get(g.function_name, 0) + 1
    names = []
    for g in graphs:
        if counts[g.function_name] > 1:
            names.append(f"{g.function_name}/{g.arity}")
        else:
            names.append(g.function_name)
    return names


def integrate(graphs: list[FunctionGraph]) -> SemanticGraph:
    """Join function graphs under a fresh root node.

    Call sites whose callee resolves to a function of the unit get a
    call edge to that function's entry; library calls keep their node
    but no edge. Duplicate function names are disambiguated with an
    arity suffix before resolution.
    """
    names = _disambiguated_names(graphs)
    order = sorted(range(len(graphs)), key=lambda i: names[i])

    nodes: list[GraphNode] = [GraphNode(0, ROOT_LABEL, "")]
    id_map: dict[tuple[int, int], int] = {}
    next_id = 1
    for i in order:
        graph, name = graphs[i], names[i]
        ordered = sorted(
            graph.nodes.values(),
            key=lambda n: (n.id != graph.entry, n.span[0], n.span[1], n.id),
        )
        for node in ordered:
            label = function_label(name) if node.id == graph.entry else node.label
            nodes.append(GraphNode(next_id, label, name, node.span))
            id_map[(i, node.id)] = next_id
            next_id += 1

    edges: set[tuple[int, int, EdgeKind]] = set()
    for i in order:
        graph = graphs[i]
        for src, dst, kind in graph.edges:
            edges.add((id_map[(i, src)], id_map[(i, dst)], kind))
        edges.add((0, id_map[(i, graph.entry)], EdgeKind.ROOT))

    by_base_name: dict[str, list[int]] = {}
    for i in order:
        by_base_name.setdefault(graphs[i].function_name, []).append(i)

    call_edges: list[CallEdge] = []
    for i in order:
        graph = graphs[i]
        for node in graph.nodes.values():
            for callee, argcount in node.callees:
                target = _resolve_callee(graphs, by_base_name, callee, argcount)
                if target is None:
                    continue
                src = id_map[(i, node.id)]
                dst = id_map[(target, graphs[target].entry)]
                edge = (src, dst, EdgeKind.CALL)
                if edge not in edges:
                    edges.add(edge)
                    call_edges.append(CallEdge(src, dst, names[target]))

    return SemanticGraph(
        nodes=nodes,
        edges=frozenset(edges),
        root_id=0,
        call_edges=tuple(sorted(call_edges, key=lambda c: (c.src, c.dst))),
    )


def _resolve_callee(
    graphs: list[FunctionGraph],
    by_base_name: dict[str, list[int]],
    callee: str,
    argcount: int | None,
) -> int | None:
    candidates = by_base_name.get(callee, [])
    if len(candidates) == 1:
        return candidates[0]
    if len(candidates) > 1 and argcount is not None:
        matching = [i for i in candidates if graphs[i].arity == argcount]
        if len(matching) == 1:
            return matching[0]
    return None


def graph_for_unit(unit: SourceUnit) -> SemanticGraph:
    """Full pipeline: parse, extract functions, build PDGs, integrate."""
    tree = parse(unit)
    decls = extract_functions(tree, unit.language)
    return integrate([build_function_graph(d) for d in decls])


# --- serialization -----------------------------------------------------

_EDGE_ORDER = {EdgeKind.DATA: 0, EdgeKind.CONTROL: 1, EdgeKind.CALL: 2, EdgeKind.ROOT: 3}

_DOT_COLORS = {
    EdgeKind.DATA: "blue",
    EdgeKind.CONTROL: "orange",
    EdgeKind.CALL: "red",
    EdgeKind.ROOT: "gray",
}


def to_json_obj(graph: SemanticGraph) -> dict:
    return {
        "nodes": [
            {"id": n.id, "category": n.label.category.value, "detail": n.label.detail, "fn": n.fn}
            for n in sorted(graph.nodes, key=lambda n: n.id)
        ],
        "edges": [
            {"src": s, "dst": d, "kind": k.value}
            for s, d, k in sorted(graph.edges, key=lambda e: (e[0], e[1], _EDGE_ORDER[e[2]]))
        ],
    }


def serialize(graph: SemanticGraph, format: str = "json") -> bytes:
    if format == "json":
        return (json.dumps(to_json_obj(graph), indent=2, sort_keys=True) + "\n").encode("utf-8")
    if format == "dot":
        return _to_dot(graph).encode("utf-8")
    raise ValueError(f"unknown serialization format {format!r}")


def deserialize(data: bytes | str) -> SemanticGraph:
    obj = json.loads(data)
    nodes = [
        GraphNode(n["id"], NodeLabel(LabelCategory(n["category"]), n["detail"]), n.get("fn", ""))
        for n in obj["nodes"]
    ]
    edges = frozenset((e["src"], e["dst"], EdgeKind(e["kind"])) for e in obj["edges"])
    by_id = {n.id: n for n in nodes}
    roots = [n.id for n in nodes if n.label.category == LabelCategory.ROOT]
    call_edges = tuple(
        CallEdge(s, d, by_id[d].label.detail)
        for s, d, k in sorted(edges)
        if k == EdgeKind.CALL
    )
    return SemanticGraph(
        nodes=sorted(nodes, key=lambda n: n.id),
        edges=edges,
        root_id=roots[0] if roots else 0,
        call_edges=call_edges,
    )


def _to_dot(graph: SemanticGraph) -> str:
    lines = ["digraph semantic_graph {"]
    for node in sorted(graph.nodes, key=lambda n: n.id):
        text = f"{node.label.detail}" if node.label.detail else node.label.category.value
        shape = "box"
        if node.label.category == LabelCategory.ROOT:
            shape = "doublecircle"
        elif node.label.category == LabelCategory.FUNCTION_NAME:
            shape = "ellipse"
        lines.append(f'  n{node.id} [label="{text}", shape={shape}];')
    for s, d, k in sorted(graph.edges, key=lambda e: (e[0], e[1], _EDGE_ORDER[e[2]])):
        lines.append(f'  n{s} -> n{d} [kind="{k.value}", color="{_DOT_COLORS[k]}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def has_cycle(graph: SemanticGraph) -> bool:
    """True when any directed cycle (self-loops included) exists."""
    adj: dict[int, list[int]] = {n.id: [] for n in graph.nodes}
    for s, d, _ in graph.edges:
        adj[s].append(d)
    WHITE, GRAY, BLACK = 0, 1, 2
    color = {n.id: WHITE for n in graph.nodes}

    for start in adj:
        if color[start] != WHITE:
            continue
        stack: list[tuple[int, int]] = [(start, 0)]
        color[start] = GRAY
        while stack:
            node, idx = stack[-1]
            if idx < len(adj[node]):
                stack[-1] = (node, idx + 1)
                nxt = adj[node][idx]
                if color[nxt] == GRAY or nxt == node:
                    return True
                if color[nxt] == WHITE:
                    color[nxt] = GRAY
                    stack.append((nxt, 0))
            else:
                color[node] = BLACK
                stack.pop()
    return False


def cycle_through_call_edge(graph: SemanticGraph) -> bool:
    """True when some cycle uses at least one call edge."""
    call_targets = {(s, d) for s, d, k in graph.edges if k == EdgeKind.CALL}
    if not call_targets:
        return False
    adj: dict[int, set[int]] = {n.id: set() for n in graph.nodes}
    for s, d, _ in graph.edges:
        adj[s].add(d)

    def reachable(frm: int, to: int) -> bool:
        seen = {frm}
        stack = [frm]
        while stack:
            node = stack.pop()
            if node == to:
                return True
            for nxt in adj[node]:
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
        return False

    return any(reachable(d, s) for s, d in call_targets)


__all__ = [
    "CallEdge",
    "GraphNode",
    "SemanticGraph",
    "cycle_through_call_edge",
    "deserialize",
    "graph_for_unit",
    "has_cycle",
    "integrate",
    "root_only_graph",
    "serialize",
    "to_json_obj",
]
