"""Python frontend: CPython's own grammar via the stdlib ast module.

The stdlib parser has no error recovery, so unparseable input falls back
to chunk-at-a-time parsing of top-level statements; chunks that still
fail are preserved as ERROR leaves rather than dropped.
"""

from __future__ import annotations

import ast

from .astnodes import AstNode, error_node, leaf

_BINOP_SYMBOLS = {
    ast.Add: "+", ast.Sub: "-", ast.Mult: "*", ast.Div: "/",
    ast.FloorDiv: "//", ast.Mod: "%", ast.Pow: "**", ast.LShift: "<<",
    ast.RShift: ">>", ast.BitOr: "|", ast.BitXor: "^", ast.BitAnd: "&",
    ast.MatMult: "@",
}

_UNARYOP_SYMBOLS = {ast.UAdd: "+", ast.USub: "-", ast.Not: "not", ast.Invert: "~"}

_CMPOP_SYMBOLS = {
    ast.Eq: "==", ast.NotEq: "!=", ast.Lt: "<", ast.LtE: "<=",
    ast.Gt: ">", ast.GtE: ">=", ast.Is: "is", ast.IsNot: "is not",
    ast.In: "in", ast.NotIn: "not in",
}


class _Converter:
    def __init__(self, text: str, base: int = 0):
        self.base = base
        data = text.encode("utf-8", errors="replace")
        starts = [0]
        for i, b in enumerate(data):
            if b == 0x0A:
                starts.append(i + 1)
        self.line_starts = starts
        self.nbytes = len(data)

    def pos(self, lineno: int, col: int) -> int:
        if lineno - 1 >= len(self.line_starts):
            return self.base + self.nbytes
        return self.base + self.line_starts[lineno - 1] + col

    def span(self, node: ast.AST) -> tuple[int, int]:
        start = self.pos(node.lineno, node.col_offset)
        end = self.pos(node.end_lineno, node.end_col_offset)
        return (start, end)

    def node(self, kind: str, node: ast.AST, children: list[AstNode]) -> AstNode:
        return AstNode(kind=kind, children=children, span=self.span(node))

    def op_leaf(self, symbol: str, before: AstNode, anchor: tuple[int, int]) -> AstNode:
        # ast gives no token position for operators; pin a zero-width span
        # right after the preceding operand so sibling order stays sound.
        at = before.span[1] if before is not None else anchor[0]
        return leaf("operator", (at, at), symbol)

    def block(self, stmts: list[ast.stmt], fallback: tuple[int, int]) -> AstNode:
        children = [self.convert(s) for s in stmts]
        if children:
            span = (children[0].span[0], children[-1].span[1])
        else:
            span = fallback
        return AstNode(kind="block", children=children, span=span)

    def ident(self, name: str, node: ast.AST) -> AstNode:
        return leaf("identifier", self.span(node), name)

    def convert(self, node: ast.AST) -> AstNode:
        method = getattr(self, f"_c_{type(node).__name__}", None)
        if method is not None:
            return method(node)
        return self._generic(node)

    def _generic(self, node: ast.AST) -> AstNode:
        children = [self.convert(v) for v in ast.iter_child_nodes(node) if isinstance(v, ast.expr)]
        kind = type(node).__name__.lower()
        if hasattr(node, "lineno"):
            return self.node(kind, node, children)
        return AstNode(kind=kind, children=children)

    # --- statements -------------------------------------------------

    def _c_Module(self, node: ast.Module) -> AstNode:
        children = [self.convert(s) for s in node.body]
        return AstNode(kind="module", children=children, span=(self.base, self.base + self.nbytes))

    def _c_FunctionDef(self, node) -> AstNode:
        name = leaf("identifier", (self.pos(node.lineno, node.col_offset),) * 2, node.name)
        params = self._parameters(node.args, node)
        body = self.block(node.body, self.span(node))
        return self.node("function_definition", node, [name, params, body])

    _c_AsyncFunctionDef = _c_FunctionDef

    def _parameters(self, args: ast.arguments, anchor: ast.AST) -> AstNode:
        names = list(args.posonlyargs) + list(args.args) + list(args.kwonlyargs)
        if args.vararg:
            names.append(args.vararg)
        if args.kwarg:
            names.append(args.kwarg)
        children = [leaf("parameter", self.span(a), a.arg) for a in names]
        return AstNode(kind="parameters", children=children, span=self.span(anchor))

    def _c_ClassDef(self, node: ast.ClassDef) -> AstNode:
        name = leaf("identifier", (self.pos(node.lineno, node.col_offset),) * 2, node.name)
        body = self.block(node.body, self.span(node))
        return self.node("class_definition", node, [name, body])

    def _c_Assign(self, node: ast.Assign) -> AstNode:
        children = [self.convert(t) for t in node.targets] + [self.convert(node.value)]
        return self.node("assignment", node, children)

    def _c_AnnAssign(self, node: ast.AnnAssign) -> AstNode:
        children = [self.convert(node.target)]
        if node.value is not None:
            children.append(self.convert(node.value))
        return self.node("assignment", node, children)

    def _c_AugAssign(self, node: ast.AugAssign) -> AstNode:
        target = self.convert(node.target)
        op = self.op_leaf(_BINOP_SYMBOLS[type(node.op)] + "=", target, self.span(node))
        return self.node("augmented_assignment", node, [target, op, self.convert(node.value)])

    def _c_Expr(self, node: ast.Expr) -> AstNode:
        return self.node("expression_statement", node, [self.convert(node.value)])

    def _c_Return(self, node: ast.Return) -> AstNode:
        children = [] if node.value is None else [self.convert(node.value)]
        return self.node("return_statement", node, children)

    def _c_If(self, node: ast.If) -> AstNode:
        children = [self.convert(node.test), self.block(node.body, self.span(node))]
        if node.orelse:
            children.append(self.block(node.orelse, self.span(node)))
        return self.node("if_statement", node, children)

    def _c_While(self, node: ast.While) -> AstNode:
        children = [self.convert(node.test), self.block(node.body, self.span(node))]
        if node.orelse:
            children.append(AstNode("else_clause", [self.block(node.orelse, self.span(node))], self.span(node)))
        return self.node("while_statement", node, children)

    def _c_For(self, node) -> AstNode:
        children = [
            self.convert(node.target),
            self.convert(node.iter),
            self.block(node.body, self.span(node)),
        ]
        if node.orelse:
            children.append(AstNode("else_clause", [self.block(node.orelse, self.span(node))], self.span(node)))
        return self.node("foreach_statement", node, children)

    _c_AsyncFor = _c_For

    def _c_Break(self, node) -> AstNode:
        return self.node("break_statement", node, [])

    def _c_Continue(self, node) -> AstNode:
        return self.node("continue_statement", node, [])

    def _c_Pass(self, node) -> AstNode:
        return self.node("pass_statement", node, [])

    def _c_Raise(self, node: ast.Raise) -> AstNode:
        children = [self.convert(v) for v in (node.exc, node.cause) if v is not None]
        return self.node("raise_statement", node, children)

    def _c_Try(self, node: ast.Try) -> AstNode:
        children: list[AstNode] = [self.block(node.body, self.span(node))]
        for handler in node.handlers:
            hkids: list[AstNode] = []
            if handler.type is not None:
                hkids.append(self.convert(handler.type))
            if handler.name:
                hkids.append(leaf("identifier", (self.pos(handler.lineno, handler.col_offset),) * 2, handler.name))
            hkids.append(self.block(handler.body, self.span(handler)))
            children.append(AstNode("except_clause", hkids, self.span(handler)))
        if node.orelse:
            children.append(AstNode("else_clause", [self.block(node.orelse, self.span(node))], self.span(node)))
        if node.finalbody:
            children.append(AstNode("finally_clause", [self.block(node.finalbody, self.span(node))], self.span(node)))
        return self.node("try_statement", node, children)

    def _c_With(self, node) -> AstNode:
        children: list[AstNode] = []
        for item in node.items:
            ikids = [self.convert(item.context_expr)]
            if item.optional_vars is not None:
                ikids.append(self.convert(item.optional_vars))
            children.append(AstNode("with_item", ikids, self.span(item.context_expr)))
        children.append(self.block(node.body, self.span(node)))
        return self.node("with_statement", node, children)

    _c_AsyncWith = _c_With

    def _c_Import(self, node: ast.Import) -> AstNode:
        names = [leaf("identifier", self.span(node), a.asname or a.name.split(".")[0]) for a in node.names]
        return self.node("import_statement", node, names)

    def _c_ImportFrom(self, node: ast.ImportFrom) -> AstNode:
        names = [
            leaf("identifier", self.span(node), a.asname or a.name)
            for a in node.names
            if a.name != "*"
        ]
        return self.node("import_statement", node, names)

    def _c_Assert(self, node: ast.Assert) -> AstNode:
        children = [self.convert(node.test)]
        if node.msg is not None:
            children.append(self.convert(node.msg))
        return self.node("assert_statement", node, children)

    def _c_Delete(self, node: ast.Delete) -> AstNode:
        return self.node("delete_statement", node, [self.convert(t) for t in node.targets])

    def _c_Global(self, node) -> AstNode:
        return self.node("global_statement", node, [])

    def _c_Nonlocal(self, node) -> AstNode:
        return self.node("global_statement", node, [])

    def _c_Match(self, node) -> AstNode:
        children = [self.convert(node.subject)]
        for case in node.cases:
            ckids: list[AstNode] = [AstNode("pattern", [], self.span(case.pattern))]
            if case.guard is not None:
                ckids.append(self.convert(case.guard))
            ckids.append(self.block(case.body, self.span(case.pattern)))
            children.append(AstNode("case_clause", ckids, self.span(case.pattern)))
        return self.node("match_statement", node, children)

    # --- expressions ------------------------------------------------

    def _c_BoolOp(self, node: ast.BoolOp) -> AstNode:
        symbol = "and" if isinstance(node.op, ast.And) else "or"
        result = self.convert(node.values[0])
        for value in node.values[1:]:
            rhs = self.convert(value)
            op = self.op_leaf(symbol, result, self.span(node))
            result = AstNode("boolean_operator", [result, op, rhs], self.span(node))
        return result

    def _c_BinOp(self, node: ast.BinOp) -> AstNode:
        left = self.convert(node.left)
        op = self.op_leaf(_BINOP_SYMBOLS[type(node.op)], left, self.span(node))
        return self.node("binary_operator", node, [left, op, self.convert(node.right)])

    def _c_UnaryOp(self, node: ast.UnaryOp) -> AstNode:
        start = self.pos(node.lineno, node.col_offset)
        op = leaf("operator", (start, start), _UNARYOP_SYMBOLS[type(node.op)])
        return self.node("unary_operator", node, [op, self.convert(node.operand)])

    def _c_Compare(self, node: ast.Compare) -> AstNode:
        children = [self.convert(node.left)]
        for op, comparator in zip(node.ops, node.comparators):
            children.append(self.op_leaf(_CMPOP_SYMBOLS[type(op)], children[-1], self.span(node)))
            children.append(self.convert(comparator))
        return self.node("comparison", node, children)

    def _c_Call(self, node: ast.Call) -> AstNode:
        children = [self.convert(node.func)]
        children.extend(self.convert(a) for a in node.args)
        children.extend(self.convert(k.value) for k in node.keywords)
        return self.node("call", node, children)

    def _c_Attribute(self, node: ast.Attribute) -> AstNode:
        obj = self.convert(node.value)
        attr = leaf("identifier", (obj.span[1], self.span(node)[1]), node.attr)
        return self.node("attribute", node, [obj, attr])

    def _c_Subscript(self, node: ast.Subscript) -> AstNode:
        return self.node("subscript", node, [self.convert(node.value), self.convert(node.slice)])

    def _c_Slice(self, node: ast.Slice) -> AstNode:
        children = [self.convert(v) for v in (node.lower, node.upper, node.step) if v is not None]
        return AstNode("slice", children, self.span(node))

    def _c_Name(self, node: ast.Name) -> AstNode:
        return leaf("identifier", self.span(node), node.id)

    def _c_Constant(self, node: ast.Constant) -> AstNode:
        value = node.value
        if isinstance(value, bool):
            kind, text = "boolean", str(value)
        elif isinstance(value, int):
            kind, text = "integer", repr(value)
        elif isinstance(value, float) or isinstance(value, complex):
            kind, text = "float", repr(value)
        elif isinstance(value, (str, bytes)):
            kind, text = "string", repr(value)
        elif value is None:
            kind, text = "none", "None"
        else:
            kind, text = "none", repr(value)
        return leaf(kind, self.span(node), text)

    def _c_List(self, node: ast.List) -> AstNode:
        return self.node("list", node, [self.convert(e) for e in node.elts])

    def _c_Tuple(self, node: ast.Tuple) -> AstNode:
        return self.node("tuple", node, [self.convert(e) for e in node.elts])

    def _c_Set(self, node: ast.Set) -> AstNode:
        return self.node("set", node, [self.convert(e) for e in node.elts])

    def _c_Dict(self, node: ast.Dict) -> AstNode:
        children = []
        for key, value in zip(node.keys, node.values):
            if key is not None:
                children.append(self.convert(key))
            children.append(self.convert(value))
        return self.node("dict", node, children)

    def _comprehension(self, node, parts: list[ast.expr]) -> AstNode:
        children = [self.convert(p) for p in parts]
        for gen in node.generators:
            gkids = [self.convert(gen.target), self.convert(gen.iter)]
            gkids.extend(self.convert(cond) for cond in gen.ifs)
            children.append(AstNode("comp_for", gkids, self.span(gen.iter)))
        return self.node("comprehension", node, children)

    def _c_ListComp(self, node: ast.ListComp) -> AstNode:
        return self._comprehension(node, [node.elt])

    def _c_SetComp(self, node: ast.SetComp) -> AstNode:
        return self._comprehension(node, [node.elt])

    def _c_GeneratorExp(self, node: ast.GeneratorExp) -> AstNode:
        return self._comprehension(node, [node.elt])

    def _c_DictComp(self, node: ast.DictComp) -> AstNode:
        return self._comprehension(node, [node.key, node.value])

    def _c_Lambda(self, node: ast.Lambda) -> AstNode:
        return self.node("lambda", node, [self._parameters(node.args, node), self.convert(node.body)])

    def _c_IfExp(self, node: ast.IfExp) -> AstNode:
        return self.node(
            "conditional_expression",
            node,
            [self.convert(node.test), self.convert(node.body), self.convert(node.orelse)],
        )

    def _c_NamedExpr(self, node: ast.NamedExpr) -> AstNode:
        return self.node("named_expression", node, [self.convert(node.target), self.convert(node.value)])

    def _c_Starred(self, node: ast.Starred) -> AstNode:
        return self.node("starred", node, [self.convert(node.value)])

    def _c_JoinedStr(self, node: ast.JoinedStr) -> AstNode:
        children = []
        for value in node.values:
            if isinstance(value, ast.FormattedValue):
                children.append(self.convert(value.value))
        return self.node("fstring", node, children)

    def _c_FormattedValue(self, node: ast.FormattedValue) -> AstNode:
        return self.convert(node.value)

    def _c_Await(self, node: ast.Await) -> AstNode:
        return self.convert(node.value)

    def _c_Yield(self, node: ast.Yield) -> AstNode:
        children = [] if node.value is None else [self.convert(node.value)]
        return self.node("yield", node, children)

    def _c_YieldFrom(self, node: ast.YieldFrom) -> AstNode:
        return self.node("yield", node, [self.convert(node.value)])


def _chunk_boundaries(text: str, track_depth: bool = True) -> list[tuple[int, int]]:
    """Split source into top-level chunks by indentation, tracking bracket
    depth and string state so continuation lines stay attached. With
    track_depth off, indentation alone decides; that recovers trailing
    statements after a chunk with unbalanced brackets."""
    lines = text.splitlines(keepends=True)
    chunks: list[list[int]] = []
    depth = 0
    in_triple: str | None = None
    continuation_heads = ("else", "elif", "except", "finally", "case", ")", "]", "}")
    for idx, line in enumerate(lines):
        stripped = line.strip()
        starts_flush = (
            in_triple is None
            and (depth == 0 or not track_depth)
            and stripped
            and not line[0] in " \t"
            and not stripped.startswith(continuation_heads)
            and not line.startswith("\\")
        )
        if starts_flush or not chunks:
            chunks.append([idx])
        else:
            chunks[-1].append(idx)
        # Cheap scanner: enough to keep brackets inside strings from counting.
        i = 0
        while i < len(line):
            c = line[i]
            if in_triple:
                if line.startswith(in_triple, i):
                    i += 3
                    in_triple = None
                    continue
                i += 1
                continue
            if c == "#":
                break
            if line[i : i + 3] in ("'''", '"""'):
                in_triple = line[i : i + 3]
                i += 3
                continue
            if c in "'\"":
                j = i + 1
                while j < len(line) and line[j] != c:
                    j += 2 if line[j] == "\\" else 1
                i = j + 1
                continue
            if c in "([{":
                depth += 1
            elif c in ")]}":
                depth = max(0, depth - 1)
            i += 1

    starts = [0]
    for line in lines:
        starts.append(starts[-1] + len(line.encode("utf-8", errors="replace")))
    return [(starts[chunk[0]], starts[chunk[-1] + 1]) for chunk in chunks]


def parse_python(text: str) -> AstNode:
    try:
        tree = ast.parse(text)
    except (SyntaxError, ValueError, RecursionError):
        return _parse_with_recovery(text)
    return _Converter(text).convert(tree)


def _parse_with_recovery(text: str) -> AstNode:
    data = text.encode("utf-8", errors="replace")
    children: list[AstNode] = []
    for start, end in _chunk_boundaries(text):
        children.extend(_parse_chunk(data, start, end, retry=True))
    return AstNode(kind="module", children=children, span=(0, len(data)))


def _parse_chunk(data: bytes, start: int, end: int, retry: bool) -> list[AstNode]:
    chunk = data[start:end].decode("utf-8", errors="replace")
    if not chunk.strip():
        return []
    try:
        tree = ast.parse(chunk)
    except (SyntaxError, ValueError, RecursionError):
        if retry:
            # Resplit on indentation alone: an unbalanced bracket in one
            # statement should not swallow the statements after it.
            parts = _chunk_boundaries(chunk, track_depth=False)
            if len(parts) > 1:
                out: list[AstNode] = []
                for sub_start, sub_end in parts:
                    out.extend(_parse_chunk(data, start + sub_start, start + sub_end, retry=False))
                return out
        return [error_node((start, end), chunk)]
    return _Converter(chunk, base=start).convert(tree).children
