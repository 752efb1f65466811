"""Statement-level control flow graphs for extracted functions.

Each statement, predicate, or call site becomes one node carrying its
normalized label plus syntactic def/use/callee sets. Construction is
def/use syntactic only: no aliasing, no points-to, and exception
constructs are modelled as predicates guarding their handler blocks.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from .frontend.astnodes import AstNode, FunctionDecl
from .labels import NodeLabel, expression_label, function_label, operation, statement_label


class CfgNodeKind(str, Enum):
    ENTRY = "entry"
    EXIT = "exit"
    STATEMENT = "statement"
    PREDICATE = "predicate"
    CALL_SITE = "call_site"


@dataclass
class CfgNode:
    id: int
    kind: CfgNodeKind
    label: NodeLabel
    span: tuple[int, int]
    defs: frozenset[str] = frozenset()
    uses: frozenset[str] = frozenset()
    callees: tuple[tuple[str, int | None], ...] = ()


@dataclass
class Cfg:
    function_name: str
    params: list[str]
    nodes: dict[int, CfgNode] = field(default_factory=dict)
    succ: dict[int, list[tuple[int, str]]] = field(default_factory=dict)
    entry_id: int = 0
    exit_id: int = 1

    def predecessors(self) -> dict[int, list[int]]:
        preds: dict[int, list[int]] = {n: [] for n in self.nodes}
        for src, edges in self.succ.items():
            for dst, _ in edges:
                preds[dst].append(src)
        return preds

    def successor_ids(self, node_id: int) -> list[int]:
        return [dst for dst, _ in self.succ.get(node_id, [])]

    def add_edge(self, src: int, dst: int, label: str = "") -> None:
        edges = self.succ.setdefault(src, [])
        if (dst, label) not in edges:
            edges.append((dst, label))


# --- def/use/callee extraction ------------------------------------------

_TARGET_CONTAINERS = frozenset(["tuple", "list", "starred"])
_ASSIGNMENT_KINDS = frozenset(["assignment", "augmented_assignment", "named_expression"])


def _base_identifier(node: AstNode) -> str | None:
    """Leftmost identifier of a subscript/attribute chain."""
    while node.kind in ("subscript", "attribute", "slice"):
        if not node.children:
            return None
        node = node.children[0]
    return node.text if node.kind == "identifier" else None


class _DefUse:
    def __init__(self) -> None:
        self.defs: set[str] = set()
        self.uses: set[str] = set()
        self.callees: list[tuple[str, int | None]] = []

    def collect_target(self, target: AstNode, aug: bool) -> None:
        if target.kind == "identifier":
            self.defs.add(target.text)
            if aug:
                self.uses.add(target.text)
            return
        if target.kind in _TARGET_CONTAINERS:
            for child in target.children:
                self.collect_target(child, aug)
            return
        if target.kind in ("subscript", "attribute"):
            base = _base_identifier(target)
            if base is not None:
                self.defs.add(base)
            # Element/field writes still read the container reference
            # and any index expressions.
            self.walk(target)
            return
        self.walk(target)

    def walk(self, node: AstNode) -> None:
        kind = node.kind
        if kind == "identifier":
            self.uses.add(node.text)
            return
        if kind in _ASSIGNMENT_KINDS:
            children = node.children
            has_op = any(c.kind == "operator" for c in children)
            aug = kind == "augmented_assignment"
            if has_op and len(children) == 3:
                targets, value = [children[0]], children[2]
            elif len(children) >= 2:
                targets, value = children[:-1], children[-1]
            else:
                targets, value = children[:1], None
            for target in targets:
                self.collect_target(target, aug)
            if value is not None:
                self.walk(value)
            return
        if kind == "update_expression":
            for child in node.children:
                if child.kind != "operator":
                    self.collect_target(child, aug=True)
            return
        if kind in ("local_variable_declaration", "field_declaration"):
            for decl in node.children:
                self.walk(decl)
            return
        if kind == "variable_declarator":
            name = node.children[0] if node.children else None
            if name is not None and name.kind == "identifier":
                self.defs.add(name.text)
            for child in node.children[1:]:
                self.walk(child)
            return
        if kind in ("call", "object_creation"):
            func = node.children[0] if node.children else None
            args = node.children[1:]
            if func is not None:
                if func.kind == "identifier":
                    self.callees.append((func.text, len(args)))
                else:
                    self.walk(func)
            for arg in args:
                self.walk(arg)
            return
        if kind == "nested_function_placeholder":
            name = node.children[0] if node.children else None
            if name is not None and name.text:
                self.callees.append((name.text, None))
            return
        if kind == "comp_for":
            # Comprehension variables are scoped to the expression; only
            # the iterable and filter conditions touch function state.
            for child in node.children[1:]:
                self.walk(child)
            return
        if kind == "lambda":
            for child in node.children:
                if child.kind != "parameters":
                    self.walk(child)
            return
        if kind in ("operator", "type", "parameter", "pattern"):
            return
        for child in node.children:
            self.walk(child)


def defs_uses_callees(node: AstNode) -> tuple[frozenset[str], frozenset[str], tuple]:
    acc = _DefUse()
    acc.walk(node)
    return frozenset(acc.defs), frozenset(acc.uses), tuple(acc.callees)


# --- CFG construction -----------------------------------------------------

Frontier = list[tuple[int, str]]


def ensure_totality(cfg: Cfg) -> None:
    """Attach unreachable statements to entry and dead ends to exit so
    reachability and post-dominance are total. Dead cycles (a loop after
    a return) need the iteration: one synthetic edge can reconnect a
    whole component."""

    def forward_reach() -> set[int]:
        seen = {cfg.entry_id}
        stack = [cfg.entry_id]
        while stack:
            node = stack.pop()
            for nxt in cfg.successor_ids(node):
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
        return seen

    while True:
        unreachable = sorted(set(cfg.nodes) - forward_reach())
        if not unreachable:
            break
        cfg.add_edge(cfg.entry_id, unreachable[0], "dead")

    reached = {cfg.exit_id}
    stack = [cfg.exit_id]
    preds = cfg.predecessors()
    while stack:
        node = stack.pop()
        for p in preds[node]:
            if p not in reached:
                reached.add(p)
                stack.append(p)
    for node_id in cfg.nodes:
        if node_id not in reached and node_id != cfg.exit_id:
            cfg.add_edge(node_id, cfg.exit_id, "dead")
            reached.add(node_id)

_SIMPLE_KINDS = frozenset(
    [
        "expression_statement", "assignment", "augmented_assignment",
        "named_expression", "update_expression", "local_variable_declaration",
        "field_declaration", "return_statement", "raise_statement",
        "throw_statement", "break_statement", "continue_statement",
        "pass_statement", "import_statement", "assert_statement",
        "delete_statement", "nested_function_placeholder",
        "class_definition", "class_declaration", "ERROR",
    ]
)


class _Builder:
    def __init__(self, decl: FunctionDecl):
        self.decl = decl
        self.params = frozenset(decl.params)
        self.cfg = Cfg(function_name=decl.name, params=list(decl.params))
        self.next_id = 0
        self.exit_frontier: Frontier = []
        self.loop_stack: list[dict] = []

    def new_node(
        self,
        kind: CfgNodeKind,
        label: NodeLabel,
        span: tuple[int, int],
        frontier: Frontier,
        defs: frozenset[str] = frozenset(),
        uses: frozenset[str] = frozenset(),
        callees: tuple = (),
    ) -> int:
        node_id = self.next_id
        self.next_id += 1
        self.cfg.nodes[node_id] = CfgNode(node_id, kind, label, span, defs, uses, callees)
        self.attach(frontier, node_id)
        return node_id

    def attach(self, frontier: Frontier, target: int) -> None:
        for src, branch in frontier:
            self.cfg.add_edge(src, target, branch)

    def build(self) -> Cfg:
        entry = self.new_node(
            CfgNodeKind.ENTRY,
            function_label(self.decl.name),
            self.decl.body.span,
            [],
            defs=frozenset(self.decl.params),
        )
        self.cfg.entry_id = entry
        out = self.build_block(self.decl.body, [(entry, "")])
        exit_id = self.new_node(CfgNodeKind.EXIT, operation("exit"), self.decl.body.span, out)
        self.cfg.exit_id = exit_id
        self.attach(self.exit_frontier, exit_id)
        ensure_totality(self.cfg)
        return self.cfg

    # --- statement dispatch ---------------------------------------

    def build_block(self, block: AstNode, frontier: Frontier) -> Frontier:
        for stmt in block.children:
            frontier = self.build_statement(stmt, frontier)
        return frontier

    def build_statement(self, stmt: AstNode, frontier: Frontier) -> Frontier:
        kind = stmt.kind
        if kind == "block":
            return self.build_block(stmt, frontier)
        if kind in ("global_statement",):
            return frontier
        if kind == "if_statement":
            return self._if(stmt, frontier)
        if kind in ("while_statement",):
            return self._while(stmt, frontier)
        if kind == "do_statement":
            return self._do(stmt, frontier)
        if kind == "for_statement":
            return self._for_classic(stmt, frontier)
        if kind == "foreach_statement":
            return self._foreach(stmt, frontier)
        if kind in ("switch_statement", "match_statement"):
            return self._switch(stmt, frontier)
        if kind == "try_statement":
            return self._try(stmt, frontier)
        if kind in ("with_statement", "synchronized_statement"):
            return self._with(stmt, frontier)
        if kind in _SIMPLE_KINDS:
            return self._simple(stmt, frontier)
        # Unknown construct: keep it as an opaque statement node.
        return self._simple(stmt, frontier)

    def _simple(self, stmt: AstNode, frontier: Frontier) -> Frontier:
        defs, uses, callees = defs_uses_callees(stmt)
        label = statement_label(stmt, self.params)
        node_kind = CfgNodeKind.STATEMENT
        expr = stmt.children[0] if stmt.kind == "expression_statement" and stmt.children else stmt
        if expr.kind in ("call", "object_creation") or stmt.kind == "nested_function_placeholder":
            node_kind = CfgNodeKind.CALL_SITE
        if stmt.kind in ("class_definition", "class_declaration"):
            name = stmt.child_of_kind("identifier")
            defs = frozenset([name.text]) if name is not None and name.text else frozenset()
            uses, callees = frozenset(), ()
        node = self.new_node(node_kind, label, stmt.span, frontier, defs, uses, callees)
        kind = stmt.kind
        if kind in ("return_statement", "raise_statement", "throw_statement"):
            self.exit_frontier.append((node, ""))
            return []
        if kind == "break_statement":
            ctx = self._nearest(("loop", "switch"))
            (ctx["breaks"] if ctx is not None else self.exit_frontier).append((node, ""))
            return []
        if kind == "continue_statement":
            ctx = self._nearest(("loop",))
            (ctx["continues"] if ctx is not None else self.exit_frontier).append((node, ""))
            return []
        return [(node, "")]

    def _nearest(self, kinds: tuple[str, ...]) -> dict | None:
        for ctx in reversed(self.loop_stack):
            if ctx["kind"] in kinds:
                return ctx
        return None

    def _predicate(self, expr: AstNode | None, span: tuple[int, int], frontier: Frontier,
                   label: NodeLabel | None = None, extra_defs: frozenset[str] = frozenset()) -> int:
        if expr is not None:
            defs, uses, callees = defs_uses_callees(expr)
            label = label or expression_label(expr, self.params)
        else:
            defs, uses, callees = frozenset(), frozenset(), ()
            label = label or operation("for")
        return self.new_node(
            CfgNodeKind.PREDICATE, label, span, frontier, defs | extra_defs, uses, callees
        )

    def _if(self, stmt: AstNode, frontier: Frontier) -> Frontier:
        cond = stmt.children[0] if stmt.children else None
        blocks = [c for c in stmt.children[1:] if c.kind == "block"]
        pred = self._predicate(cond, stmt.span, frontier)
        out: Frontier = []
        out += self.build_block(blocks[0], [(pred, "T")]) if blocks else [(pred, "T")]
        if len(blocks) > 1:
            out += self.build_block(blocks[1], [(pred, "F")])
        else:
            out.append((pred, "F"))
        return out

    def _loop_body(self, body: AstNode, entry_frontier: Frontier) -> tuple[Frontier, dict]:
        ctx = {"kind": "loop", "breaks": [], "continues": []}
        self.loop_stack.append(ctx)
        out = self.build_block(body, entry_frontier)
        self.loop_stack.pop()
        return out, ctx

    def _else_clause(self, stmt: AstNode) -> AstNode | None:
        clause = stmt.child_of_kind("else_clause")
        if clause is not None and clause.children:
            return clause.children[0]
        return None

    def _while(self, stmt: AstNode, frontier: Frontier) -> Frontier:
        cond = stmt.children[0] if stmt.children else None
        body = stmt.child_of_kind("block") or AstNode("block", [], stmt.span)
        pred = self._predicate(cond, stmt.span, frontier)
        body_out, ctx = self._loop_body(body, [(pred, "T")])
        self.attach(body_out + ctx["continues"], pred)
        return self._loop_exit(stmt, pred, ctx)

    def _loop_exit(self, stmt: AstNode, pred: int, ctx: dict) -> Frontier:
        else_body = self._else_clause(stmt)
        if else_body is not None:
            else_out = self.build_block(else_body, [(pred, "F")])
            return else_out + ctx["breaks"]
        return [(pred, "F")] + ctx["breaks"]

    def _foreach(self, stmt: AstNode, frontier: Frontier) -> Frontier:
        target, iterable = stmt.children[0], stmt.children[1]
        body = stmt.child_of_kind("block") or AstNode("block", [], stmt.span)
        acc = _DefUse()
        acc.collect_target(target, aug=False)
        head_defs = frozenset(acc.defs)
        _, uses, callees = defs_uses_callees(iterable)
        pred = self.new_node(
            CfgNodeKind.PREDICATE, operation("for"), stmt.span, frontier, head_defs, uses, callees
        )
        body_out, ctx = self._loop_body(body, [(pred, "T")])
        self.attach(body_out + ctx["continues"], pred)
        return self._loop_exit(stmt, pred, ctx)

    def _for_classic(self, stmt: AstNode, frontier: Frontier) -> Frontier:
        init, cond, update, body = stmt.children[0], stmt.children[1], stmt.children[2], stmt.children[3]
        for expr in init.children if init.kind in ("for_init",) else [init]:
            if expr.kind != "empty":
                frontier = self._simple(expr, frontier)
        cond_expr = cond if cond.kind != "empty" else None
        pred = self._predicate(cond_expr, stmt.span, frontier)
        body_out, ctx = self._loop_body(body, [(pred, "T")])
        tail = body_out + ctx["continues"]
        for expr in update.children:
            tail = self._simple(expr, tail)
        self.attach(tail, pred)
        return [(pred, "F")] + ctx["breaks"]

    def _do(self, stmt: AstNode, frontier: Frontier) -> Frontier:
        body = stmt.children[0]
        cond = stmt.children[1] if len(stmt.children) > 1 else None
        if cond is not None:
            defs, uses, callees = defs_uses_callees(cond)
            label = expression_label(cond, self.params)
        else:
            defs, uses, callees = frozenset(), frozenset(), ()
            label = operation("for")
        pred_id = self.next_id  # reserved: body edges loop back to it
        ctx = {"kind": "loop", "breaks": [], "continues": []}
        self.loop_stack.append(ctx)
        # Create the predicate first so the body can target it.
        pred = self.new_node(CfgNodeKind.PREDICATE, label, stmt.span, [], defs, uses, callees)
        assert pred == pred_id
        body_out = self.build_block(body, frontier + [(pred, "T")])
        self.loop_stack.pop()
        self.attach(body_out + ctx["continues"], pred)
        return [(pred, "F")] + ctx["breaks"]

    def _switch(self, stmt: AstNode, frontier: Frontier) -> Frontier:
        subject = stmt.children[0] if stmt.children else None
        defs, uses, callees = defs_uses_callees(subject) if subject is not None else (frozenset(), frozenset(), ())
        pred = self.new_node(
            CfgNodeKind.PREDICATE, operation("switch"), stmt.span, frontier, defs, uses, callees
        )
        ctx = {"kind": "switch", "breaks": [], "continues": []}
        self.loop_stack.append(ctx)
        fall: Frontier = []
        cases = [c for c in stmt.children[1:] if c.kind in ("switch_case", "case_clause")]
        for i, case in enumerate(cases):
            stmts = [c for c in case.children if c.kind not in ("pattern",)]
            block = AstNode("block", stmts, case.span)
            fall = self.build_block(block, fall + [(pred, f"C{i}")])
        self.loop_stack.pop()
        return fall + ctx["breaks"] + [(pred, "D")]

    def _try(self, stmt: AstNode, frontier: Frontier) -> Frontier:
        children = stmt.children
        body = children[0] if children else AstNode("block", [], stmt.span)
        pred = self.new_node(CfgNodeKind.PREDICATE, operation("try"), stmt.span, frontier)
        body_out = self.build_block(body, [(pred, "T")])
        outs: Frontier = []
        handler_index = 0
        for child in children[1:]:
            if child.kind in ("except_clause", "catch_clause"):
                bound = child.child_of_kind("identifier")
                defs = frozenset([bound.text]) if bound is not None else frozenset()
                block = child.child_of_kind("block") or AstNode("block", [], child.span)
                head = self.new_node(
                    CfgNodeKind.STATEMENT, operation("except"), child.span,
                    [(pred, f"E{handler_index}")], defs,
                )
                outs += self.build_block(block, [(head, "")])
                handler_index += 1
        else_body = self._else_clause(stmt)
        if else_body is not None:
            body_out = self.build_block(else_body, body_out)
        outs = body_out + outs
        finally_clause = stmt.child_of_kind("finally_clause")
        if finally_clause is not None and finally_clause.children:
            outs = self.build_block(finally_clause.children[0], outs)
        return outs

    def _with(self, stmt: AstNode, frontier: Frontier) -> Frontier:
        for item in stmt.children:
            if item.kind == "with_item":
                acc = _DefUse()
                acc.walk(item.children[0])
                if len(item.children) > 1:
                    acc.collect_target(item.children[1], aug=False)
                frontier = [(
                    self.new_node(
                        CfgNodeKind.STATEMENT, operation("with"), item.span, frontier,
                        frozenset(acc.defs), frozenset(acc.uses), tuple(acc.callees),
                    ),
                    "",
                )]
        if stmt.kind == "synchronized_statement":
            guard = stmt.children[0]
            defs, uses, callees = defs_uses_callees(guard)
            frontier = [(
                self.new_node(CfgNodeKind.STATEMENT, operation("with"), stmt.span, frontier, defs, uses, callees),
                "",
            )]
        body = stmt.child_of_kind("block") or AstNode("block", [], stmt.span)
        return self.build_block(body, frontier)


def build_cfg(decl: FunctionDecl) -> Cfg:
    """Build the statement-level CFG for one function.

    Post-conditions: exactly one entry and one exit, every node reachable
    from entry and reaching exit (synthetic edges patch up dead code so
    post-dominance stays total), loops produce back edges.
    """
    return _Builder(decl).build()
