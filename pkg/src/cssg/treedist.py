"""Ordered tree edit distance (Zhang-Shasha) over parse trees.

Used by the TSED baseline: unit insert/delete/rename costs over node
kinds, with identifiers and constants anonymized to class tokens unless
name-sensitive mode is requested.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .frontend.astnodes import AstNode

_ANONYMOUS_LEAF_LABELS = {
    "identifier": "VAR",
    "parameter": "VAR",
    "integer": "INT_LIT",
    "float": "FLOAT_LIT",
    "string": "STR_LIT",
    "boolean": "BOOL_LIT",
    "none": "NONE_LIT",
}


@dataclass
class TedNode:
    label: str
    children: list["TedNode"] = field(default_factory=list)

    def size(self) -> int:
        return 1 + sum(c.size() for c in self.children)


def tsed_tree(node: AstNode, name_sensitive: bool = False) -> TedNode:
    """Project an AST into the labeled tree TSED compares.

    Operator leaves keep their symbol either way; identifier and
    constant leaves collapse to class tokens unless name-sensitive.
    """
    if node.is_leaf:
        if node.kind == "operator":
            label = node.text
        elif node.kind in _ANONYMOUS_LEAF_LABELS and not name_sensitive:
            label = _ANONYMOUS_LEAF_LABELS[node.kind]
        elif node.kind in _ANONYMOUS_LEAF_LABELS:
            label = f"{node.kind}:{node.text}"
        else:
            label = node.kind
        return TedNode(label)
    return TedNode(node.kind, [tsed_tree(c, name_sensitive) for c in node.children])


class _Annotated:
    """Postorder walk plus leftmost-leaf-descendant and keyroot tables."""

    def __init__(self, root: TedNode):
        self.labels: list[str] = []
        self.lmds: list[int] = []
        keyroot_by_lmd: dict[int, int] = {}

        def visit(node: TedNode) -> int:
            child_lmds = [visit(c) for c in node.children]
            index = len(self.labels)
            lmd = child_lmds[0] if child_lmds else index
            self.labels.append(node.label)
            self.lmds.append(lmd)
            keyroot_by_lmd[lmd] = index  # last (deepest ancestor) wins
            return lmd

        visit(root)
        self.keyroots = sorted(keyroot_by_lmd.values())
        self.size = len(self.labels)


def tree_distance(t1: TedNode, t2: TedNode) -> int:
    """Zhang-Shasha with unit costs; rename is free on equal labels."""
    a, b = _Annotated(t1), _Annotated(t2)
    td = np.zeros((a.size, b.size), dtype=np.int64)

    for i in a.keyroots:
        for j in b.keyroots:
            _treedist(a, b, i, j, td)
    return int(td[a.size - 1][b.size - 1])


def _treedist(a: _Annotated, b: _Annotated, i: int, j: int, td: np.ndarray) -> None:
    ioff = a.lmds[i] - 1
    joff = b.lmds[j] - 1
    m = i - a.lmds[i] + 2
    n = j - b.lmds[j] + 2
    fd = np.zeros((m, n), dtype=np.int64)
    for x in range(1, m):
        fd[x][0] = fd[x - 1][0] + 1
    for y in range(1, n):
        fd[0][y] = fd[0][y - 1] + 1
    for x in range(1, m):
        for y in range(1, n):
            if a.lmds[x + ioff] == a.lmds[i] and b.lmds[y + joff] == b.lmds[j]:
                rename = 0 if a.labels[x + ioff] == b.labels[y + joff] else 1
                fd[x][y] = min(fd[x - 1][y] + 1, fd[x][y - 1] + 1, fd[x - 1][y - 1] + rename)
                td[x + ioff][y + joff] = fd[x][y]
            else:
                p = a.lmds[x + ioff] - 1 - ioff
                q = b.lmds[y + joff] - 1 - joff
                fd[x][y] = min(fd[x - 1][y] + 1, fd[x][y - 1] + 1, fd[p][q] + td[x + ioff][y + joff])
