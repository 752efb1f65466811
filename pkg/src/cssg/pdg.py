"""Per-function program dependence graphs."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from .cfg import CfgNodeKind, build_cfg
from .dataflow import control_dependencies, data_dependencies
from .frontend.astnodes import FunctionDecl
from .labels import NodeLabel


class EdgeKind(str, Enum):
    DATA = "data"
    CONTROL = "control"
    CALL = "call"
    ROOT = "root"


@dataclass(frozen=True)
class PdgNode:
    id: int
    label: NodeLabel
    span: tuple[int, int]
    kind: CfgNodeKind
    callees: tuple[tuple[str, int | None], ...] = ()


@dataclass
class FunctionGraph:
    """Dependence graph of one function: statement/predicate/call-site
    nodes plus an entry node labeled with the function name."""

    function_name: str
    arity: int
    entry: int
    nodes: dict[int, PdgNode] = field(default_factory=dict)
    edges: set[tuple[int, int, EdgeKind]] = field(default_factory=set)


def build_function_graph(decl: FunctionDecl) -> FunctionGraph:
    """Assemble control and data dependencies into one graph.

    Self-loops are kept only for the control dependence of loop
    predicates on themselves; a statement's loop-carried flow onto
    itself stays an analysis fact, not a graph edge.
    """
    cfg = build_cfg(decl)
    graph = FunctionGraph(function_name=decl.name, arity=len(decl.params), entry=cfg.entry_id)
    for node_id, node in cfg.nodes.items():
        if node.kind == CfgNodeKind.EXIT:
            continue
        graph.nodes[node_id] = PdgNode(node_id, node.label, node.span, node.kind, node.callees)

    exit_id = cfg.exit_id
    for src, dst in control_dependencies(cfg):
        if exit_id in (src, dst):
            continue
        graph.edges.add((src, dst, EdgeKind.CONTROL))
    for src, dst, _var in data_dependencies(cfg):
        if exit_id in (src, dst) or src == dst:
            continue
        graph.edges.add((src, dst, EdgeKind.DATA))
    return graph
