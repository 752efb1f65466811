"""Java frontend: recursive-descent parser over the shared lexer.

Covers the statement/expression subset that contest submissions use.
Anything the parser cannot make sense of is skipped to the next ';' or
'}' and preserved as an ERROR leaf, so one bad construct never takes
down the whole file.
"""

from __future__ import annotations

from .astnodes import AstNode, Language, error_node, leaf
from .lexer import LexToken, TokenKind, lex

PRIMITIVE_TYPES = frozenset(
    ["int", "long", "short", "byte", "char", "boolean", "float", "double", "void", "var"]
)

MODIFIERS = frozenset(
    ["public", "private", "protected", "static", "final", "abstract",
     "synchronized", "native", "strictfp", "transient", "volatile", "default"]
)

_ASSIGN_OPS = frozenset(["=", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<=", ">>=", ">>>="])

# Binary precedence, loosest first; parsed by a climbing loop.
_BINARY_LEVELS = [
    ["||"],
    ["&&"],
    ["|"],
    ["^"],
    ["&"],
    ["==", "!="],
    ["<", ">", "<=", ">=", "instanceof"],
    ["<<", ">>", ">>>"],
    ["+", "-"],
    ["*", "/", "%"],
]

_EXPR_START_AFTER_CAST = frozenset(["!", "~", "("])


class _ParseError(Exception):
    pass


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = lex(text, Language.JAVA)
        self.pos = 0

    # --- token helpers ----------------------------------------------

    def peek(self, offset: int = 0) -> LexToken | None:
        i = self.pos + offset
        return self.tokens[i] if i < len(self.tokens) else None

    def at(self, text: str, offset: int = 0) -> bool:
        tok = self.peek(offset)
        return tok is not None and tok.text == text

    def at_kind(self, kind: TokenKind, offset: int = 0) -> bool:
        tok = self.peek(offset)
        return tok is not None and tok.kind == kind

    def advance(self) -> LexToken:
        tok = self.peek()
        if tok is None:
            raise _ParseError("unexpected end of input")
        self.pos += 1
        return tok

    def expect(self, text: str) -> LexToken:
        tok = self.peek()
        if tok is None or tok.text != text:
            raise _ParseError(f"expected {text!r}")
        return self.advance()

    def span_from(self, start_tok_index: int) -> tuple[int, int]:
        if start_tok_index >= len(self.tokens):
            return (len(self.text), len(self.text))
        start = self.tokens[start_tok_index].start
        end_index = min(self.pos, len(self.tokens)) - 1
        end = self.tokens[end_index].end if end_index >= start_tok_index else start
        return (start, end)

    def error_recover(self, start_tok_index: int, *, stop_on_close_brace: bool = True) -> AstNode:
        """Skip to the next ';' (consumed) or unbalanced '}' (left in place)."""
        depth = 0
        self.pos = max(self.pos, start_tok_index)
        if self.pos == start_tok_index:
            self.pos += 1  # guarantee progress
        while self.peek() is not None:
            tok = self.peek()
            if tok.text in "([{":
                depth += 1
            elif tok.text in ")]":
                depth = max(0, depth - 1)
            elif tok.text == "}":
                if depth == 0 and stop_on_close_brace:
                    break
                depth = max(0, depth - 1)
            elif tok.text == ";" and depth == 0:
                self.advance()
                break
            self.advance()
        span = self.span_from(start_tok_index)
        return error_node(span, self.text[span[0] : span[1]])

    def skip_annotations(self) -> None:
        while self.at("@"):
            self.advance()
            if self.at_kind(TokenKind.IDENTIFIER) or self.at_kind(TokenKind.KEYWORD):
                self.advance()
            if self.at("("):
                self.skip_balanced("(", ")")

    def skip_balanced(self, open_text: str, close_text: str) -> None:
        self.expect(open_text)
        depth = 1
        while depth and self.peek() is not None:
            tok = self.advance()
            if tok.text == open_text:
                depth += 1
            elif tok.text == close_text:
                depth -= 1

    # --- types -------------------------------------------------------

    def try_parse_type(self) -> str | None:
        """Parse a type reference; returns its base name or None (rolled back)."""
        save = self.pos
        tok = self.peek()
        if tok is None:
            return None
        if tok.text in PRIMITIVE_TYPES:
            name = tok.text
            self.advance()
        elif tok.kind == TokenKind.IDENTIFIER:
            name = tok.text
            self.advance()
            while self.at(".") and self.at_kind(TokenKind.IDENTIFIER, 1):
                self.advance()
                name = self.advance().text
        else:
            return None
        if self.at("<") and not self.skip_type_arguments():
            self.pos = save
            return None
        while self.at("[") and self.at("]", 1):
            self.advance()
            self.advance()
        return name

    def skip_type_arguments(self) -> bool:
        """Consume a balanced <...> group, splitting shift tokens as needed."""
        save = self.pos
        self.expect("<")
        depth = 1
        steps = 0
        while depth and self.peek() is not None and steps < 64:
            steps += 1
            tok = self.peek()
            if tok.text == "<":
                depth += 1
            elif tok.text == ">":
                depth -= 1
            elif tok.text == ">>":
                depth -= 2
            elif tok.text == ">>>":
                depth -= 3
            elif tok.text in (";", "{", ")"):  # not a generic after all
                self.pos = save
                return False
            self.advance()
        if depth > 0:
            self.pos = save
            return False
        return True

    # --- top level -----------------------------------------------------

    def parse_program(self) -> AstNode:
        children: list[AstNode] = []
        while self.peek() is not None:
            start = self.pos
            try:
                node = self.parse_top_level()
            except (_ParseError, RecursionError):
                node = self.error_recover(start, stop_on_close_brace=False)
            if node is not None:
                children.append(node)
            if self.pos == start:  # safety: always progress
                self.pos += 1
        return AstNode("program", children, (0, len(self.text)))

    def parse_top_level(self) -> AstNode | None:
        self.skip_annotations()
        if self.at("package") or self.at("import"):
            start = self.pos
            while self.peek() is not None and not self.at(";"):
                self.advance()
            if self.at(";"):
                self.advance()
            return AstNode("import_statement", [], self.span_from(start))
        if self.peek() is None:
            return None
        save = self.pos
        while self.peek() is not None and self.peek().text in MODIFIERS:
            self.advance()
        if self.at("class") or self.at("interface") or self.at("enum") or self.at("record"):
            self.pos = save
            return self.parse_class_declaration()
        if self.at(";"):
            self.advance()
            return None
        self.pos = save
        # Stray top-level statement (not legal Java, but keep it).
        return self.parse_statement()

    def parse_class_declaration(self) -> AstNode:
        start = self.pos
        while self.peek() is not None and self.peek().text in MODIFIERS:
            self.advance()
        self.advance()  # class / interface / enum / record
        name_tok = self.advance()
        name = leaf("identifier", (name_tok.start, name_tok.end), name_tok.text)
        if self.at("<"):
            self.skip_type_arguments()
        if self.at("("):  # record header
            self.skip_balanced("(", ")")
        while self.peek() is not None and not self.at("{"):
            self.advance()  # extends / implements clauses
        body = self.parse_class_body(name_tok.text)
        return AstNode("class_declaration", [name, body], self.span_from(start))

    def parse_class_body(self, class_name: str) -> AstNode:
        start = self.pos
        self.expect("{")
        members: list[AstNode] = []
        while self.peek() is not None and not self.at("}"):
            member_start = self.pos
            try:
                node = self.parse_member(class_name)
            except (_ParseError, RecursionError):
                node = self.error_recover(member_start)
            if node is not None:
                members.append(node)
            if self.pos == member_start:
                self.pos += 1
        if self.at("}"):
            self.advance()
        return AstNode("class_body", members, self.span_from(start))

    def parse_member(self, class_name: str) -> AstNode | None:
        self.skip_annotations()
        if self.at(";"):
            self.advance()
            return None
        save = self.pos
        while self.peek() is not None and self.peek().text in MODIFIERS:
            self.advance()
        if self.at("class") or self.at("interface") or self.at("enum") or self.at("record"):
            self.pos = save
            return self.parse_class_declaration()
        if self.at("{"):  # instance/static initializer: keep its statements
            return self.parse_block()
        if self.at("<"):
            self.skip_type_arguments()  # method type parameters
        # Constructor: Name(...)
        if self.at_kind(TokenKind.IDENTIFIER) and self.peek().text == class_name and self.at("(", 1):
            return self.parse_method(save, self.advance(), constructor=True)
        type_name = self.try_parse_type()
        if type_name is None:
            raise _ParseError("expected member")
        if self.at_kind(TokenKind.IDENTIFIER) and self.at("(", 1):
            return self.parse_method(save, self.advance())
        # Field declaration(s); reuse the local-variable production.
        self.pos = save
        return self.parse_local_declaration(field=True)

    def parse_method(self, start: int, name_tok: LexToken, constructor: bool = False) -> AstNode:
        name = leaf("identifier", (name_tok.start, name_tok.end), name_tok.text)
        params = self.parse_parameters()
        while self.at("[") and self.at("]", 1):
            self.advance()
            self.advance()
        if self.at("throws"):
            while self.peek() is not None and not self.at("{") and not self.at(";"):
                self.advance()
        if self.at(";"):
            self.advance()
            body = AstNode("block", [], self.span_from(start))
        else:
            body = self.parse_block()
        return AstNode("method_declaration", [name, params, body], self.span_from(start))

    def parse_parameters(self) -> AstNode:
        start = self.pos
        self.expect("(")
        params: list[AstNode] = []
        while self.peek() is not None and not self.at(")"):
            self.skip_annotations()
            if self.at("final"):
                self.advance()
            self.try_parse_type()
            while self.at("."):
                self.advance()  # varargs dots
            if self.at_kind(TokenKind.IDENTIFIER):
                tok = self.advance()
                params.append(leaf("parameter", (tok.start, tok.end), tok.text))
                while self.at("[") and self.at("]", 1):
                    self.advance()
                    self.advance()
            if self.at(","):
                self.advance()
            elif not self.at(")"):
                raise _ParseError("bad parameter list")
        self.expect(")")
        return AstNode("parameters", params, self.span_from(start))

    # --- statements ----------------------------------------------------

    def parse_block(self) -> AstNode:
        start = self.pos
        self.expect("{")
        children: list[AstNode] = []
        while self.peek() is not None and not self.at("}"):
            stmt_start = self.pos
            try:
                node = self.parse_statement()
            except (_ParseError, RecursionError):
                node = self.error_recover(stmt_start)
            if node is not None:
                children.append(node)
            if self.pos == stmt_start:
                self.pos += 1
        if self.at("}"):
            self.advance()
        return AstNode("block", children, self.span_from(start))

    def parse_statement(self) -> AstNode | None:
        self.skip_annotations()
        tok = self.peek()
        if tok is None:
            return None
        start = self.pos
        text = tok.text
        if text == ";":
            self.advance()
            return None
        if text == "{":
            return self.parse_block()
        if text == "if":
            return self.parse_if(start)
        if text == "while":
            self.advance()
            cond = self.parse_parenthesized()
            body = self.parse_statement_as_block()
            return AstNode("while_statement", [cond, body], self.span_from(start))
        if text == "do":
            self.advance()
            body = self.parse_statement_as_block()
            self.expect("while")
            cond = self.parse_parenthesized()
            if self.at(";"):
                self.advance()
            return AstNode("do_statement", [body, cond], self.span_from(start))
        if text == "for":
            return self.parse_for(start)
        if text == "switch":
            return self.parse_switch(start)
        if text == "return":
            self.advance()
            children = [] if self.at(";") else [self.parse_expression()]
            if self.at(";"):
                self.advance()
            return AstNode("return_statement", children, self.span_from(start))
        if text == "break" or text == "continue":
            self.advance()
            if self.at_kind(TokenKind.IDENTIFIER):
                self.advance()  # label
            if self.at(";"):
                self.advance()
            return AstNode(f"{text}_statement", [], self.span_from(start))
        if text == "throw":
            self.advance()
            children = [self.parse_expression()]
            if self.at(";"):
                self.advance()
            return AstNode("throw_statement", children, self.span_from(start))
        if text == "try":
            return self.parse_try(start)
        if text == "synchronized" and self.at("(", 1):
            self.advance()
            guard = self.parse_parenthesized()
            body = self.parse_block()
            return AstNode("synchronized_statement", [guard, body], self.span_from(start))
        if text == "assert":
            self.advance()
            children = [self.parse_expression()]
            if self.at(":"):
                self.advance()
                children.append(self.parse_expression())
            if self.at(";"):
                self.advance()
            return AstNode("assert_statement", children, self.span_from(start))
        if text in ("class", "interface", "enum", "record"):
            return self.parse_class_declaration()
        if tok.kind == TokenKind.IDENTIFIER and self.at(":", 1) and not self.at(":", 2):
            self.advance()
            self.advance()
            return self.parse_statement()  # drop the label, keep the body
        if text in MODIFIERS:
            save = self.pos
            while self.peek() is not None and self.peek().text in MODIFIERS:
                self.advance()
            if self.at("class") or self.at("interface") or self.at("enum") or self.at("record"):
                self.pos = save
                return self.parse_class_declaration()
            self.pos = save
            return self.parse_local_declaration()
        if self.looks_like_declaration():
            return self.parse_local_declaration()
        expr = self.parse_expression()
        if self.at(";"):
            self.advance()
        return AstNode("expression_statement", [expr], (expr.span[0], self.span_from(start)[1]))

    def parse_statement_as_block(self) -> AstNode:
        stmt = self.parse_statement()
        if stmt is None:
            return AstNode("block", [], (0, 0))
        if stmt.kind == "block":
            return stmt
        return AstNode("block", [stmt], stmt.span)

    def parse_if(self, start: int) -> AstNode:
        self.expect("if")
        cond = self.parse_parenthesized()
        then_block = self.parse_statement_as_block()
        children = [cond, then_block]
        if self.at("else"):
            self.advance()
            else_stmt = self.parse_statement()
            if else_stmt is not None:
                if else_stmt.kind == "if_statement":
                    children.append(AstNode("block", [else_stmt], else_stmt.span))
                elif else_stmt.kind == "block":
                    children.append(else_stmt)
                else:
                    children.append(AstNode("block", [else_stmt], else_stmt.span))
        return AstNode("if_statement", children, self.span_from(start))

    def parse_parenthesized(self) -> AstNode:
        self.expect("(")
        expr = self.parse_expression()
        if self.at(")"):
            self.advance()
        return expr

    def parse_for(self, start: int) -> AstNode:
        self.expect("for")
        self.expect("(")
        # Enhanced for: for (Type name : iterable)
        save = self.pos
        self.skip_annotations()
        if self.at("final"):
            self.advance()
        type_name = self.try_parse_type()
        if type_name is not None and self.at_kind(TokenKind.IDENTIFIER) and self.at(":", 1):
            var_tok = self.advance()
            self.advance()  # ':'
            iterable = self.parse_expression()
            if self.at(")"):
                self.advance()
            body = self.parse_statement_as_block()
            var = leaf("identifier", (var_tok.start, var_tok.end), var_tok.text)
            return AstNode("foreach_statement", [var, iterable, body], self.span_from(start))
        self.pos = save

        init: AstNode | None = None
        if not self.at(";"):
            if self.looks_like_declaration():
                init = self.parse_local_declaration(consume_semicolon=False)
            else:
                init = self.parse_expression_list("for_init")
        if self.at(";"):
            self.advance()
        cond = None if self.at(";") else self.parse_expression()
        if self.at(";"):
            self.advance()
        update = None if self.at(")") else self.parse_expression_list("for_update")
        if self.at(")"):
            self.advance()
        body = self.parse_statement_as_block()
        children = [
            init or AstNode("for_init", [], (0, 0)),
            cond or AstNode("empty", [], (0, 0)),
            update or AstNode("for_update", [], (0, 0)),
            body,
        ]
        return AstNode("for_statement", children, self.span_from(start))

    def parse_expression_list(self, kind: str) -> AstNode:
        exprs = [self.parse_expression()]
        while self.at(","):
            self.advance()
            exprs.append(self.parse_expression())
        span = (exprs[0].span[0], exprs[-1].span[1])
        return AstNode(kind, exprs, span)

    def parse_switch(self, start: int) -> AstNode:
        self.expect("switch")
        subject = self.parse_parenthesized()
        self.expect("{")
        cases: list[AstNode] = []
        current: list[AstNode] | None = None
        case_start = self.pos
        while self.peek() is not None and not self.at("}"):
            if self.at("case") or self.at("default"):
                if current is not None:
                    cases.append(AstNode("switch_case", current, self.span_from(case_start)))
                case_start = self.pos
                is_default = self.at("default")
                self.advance()
                if not is_default:
                    try:
                        self.parse_expression()
                        while self.at(","):
                            self.advance()
                            self.parse_expression()
                    except (_ParseError, RecursionError):
                        pass
                if self.at(":") or self.at("->"):
                    self.advance()
                current = []
                continue
            stmt_start = self.pos
            try:
                node = self.parse_statement()
            except (_ParseError, RecursionError):
                node = self.error_recover(stmt_start)
            if node is not None:
                (current if current is not None else cases).append(node)
            if self.pos == stmt_start:
                self.pos += 1
        if current is not None:
            cases.append(AstNode("switch_case", current, self.span_from(case_start)))
        if self.at("}"):
            self.advance()
        return AstNode("switch_statement", [subject] + cases, self.span_from(start))

    def parse_try(self, start: int) -> AstNode:
        self.expect("try")
        if self.at("("):
            self.skip_balanced("(", ")")  # try-with-resources header
        children = [self.parse_block()]
        while self.at("catch"):
            catch_start = self.pos
            self.advance()
            self.expect("(")
            self.skip_annotations()
            name: AstNode | None = None
            self.try_parse_type()
            while self.at("|"):
                self.advance()
                self.try_parse_type()
            if self.at_kind(TokenKind.IDENTIFIER):
                tok = self.advance()
                name = leaf("identifier", (tok.start, tok.end), tok.text)
            if self.at(")"):
                self.advance()
            body = self.parse_block()
            kids = ([name] if name is not None else []) + [body]
            children.append(AstNode("catch_clause", kids, self.span_from(catch_start)))
        if self.at("finally"):
            fin_start = self.pos
            self.advance()
            body = self.parse_block()
            children.append(AstNode("finally_clause", [body], self.span_from(fin_start)))
        return AstNode("try_statement", children, self.span_from(start))

    def looks_like_declaration(self) -> bool:
        save = self.pos
        ok = False
        if self.at("final"):
            self.advance()
        if self.try_parse_type() is not None and self.at_kind(TokenKind.IDENTIFIER):
            follow = self.peek(1)
            ok = follow is not None and follow.text in ("=", ",", ";", "[", ":")
            if follow is not None and follow.text == ":":
                ok = False  # labeled statement, not a declaration
        self.pos = save
        return ok

    def parse_local_declaration(self, field: bool = False, consume_semicolon: bool = True) -> AstNode:
        start = self.pos
        while self.peek() is not None and self.peek().text in MODIFIERS:
            self.advance()
        if self.try_parse_type() is None:
            raise _ParseError("expected type")
        declarators: list[AstNode] = []
        while True:
            if not self.at_kind(TokenKind.IDENTIFIER):
                raise _ParseError("expected declarator name")
            tok = self.advance()
            name = leaf("identifier", (tok.start, tok.end), tok.text)
            while self.at("[") and self.at("]", 1):
                self.advance()
                self.advance()
            kids = [name]
            if self.at("="):
                self.advance()
                kids.append(self.parse_variable_initializer())
            declarators.append(AstNode("variable_declarator", kids, self.span_from(start)))
            if self.at(","):
                self.advance()
                continue
            break
        if consume_semicolon and self.at(";"):
            self.advance()
        kind = "field_declaration" if field else "local_variable_declaration"
        return AstNode(kind, declarators, self.span_from(start))

    def parse_variable_initializer(self) -> AstNode:
        if self.at("{"):
            start = self.pos
            self.advance()
            elements: list[AstNode] = []
            while self.peek() is not None and not self.at("}"):
                elements.append(self.parse_variable_initializer())
                if self.at(","):
                    self.advance()
            if self.at("}"):
                self.advance()
            return AstNode("array_initializer", elements, self.span_from(start))
        return self.parse_expression()

    # --- expressions -----------------------------------------------------

    def parse_expression(self) -> AstNode:
        return self.parse_assignment()

    def parse_assignment(self) -> AstNode:
        left = self.parse_ternary()
        tok = self.peek()
        if tok is not None and tok.text in _ASSIGN_OPS:
            op_tok = self.advance()
            op = leaf("operator", (op_tok.start, op_tok.end), op_tok.text)
            right = self.parse_assignment()
            kind = "assignment" if op_tok.text == "=" else "augmented_assignment"
            return AstNode(kind, [left, op, right], (left.span[0], right.span[1]))
        return left

    def parse_ternary(self) -> AstNode:
        cond = self.parse_binary(0)
        if self.at("?"):
            self.advance()
            then = self.parse_expression()
            self.expect(":")
            other = self.parse_assignment()
            return AstNode("conditional_expression", [cond, then, other], (cond.span[0], other.span[1]))
        return cond

    def parse_binary(self, level: int) -> AstNode:
        if level >= len(_BINARY_LEVELS):
            return self.parse_unary()
        ops = _BINARY_LEVELS[level]
        left = self.parse_binary(level + 1)
        while True:
            tok = self.peek()
            if tok is None or tok.text not in ops:
                return left
            if tok.text == "<" and self._angle_is_generic():
                return left
            op_tok = self.advance()
            op = leaf("operator", (op_tok.start, op_tok.end), op_tok.text)
            if op_tok.text == "instanceof":
                save = self.pos
                if self.try_parse_type() is None:
                    self.pos = save
                    self.advance()
                if self.at_kind(TokenKind.IDENTIFIER):
                    self.advance()  # pattern variable
                right = AstNode("type", [], (op_tok.end, op_tok.end))
            else:
                right = self.parse_binary(level + 1)
            kind = "boolean_operator" if op_tok.text in ("&&", "||") else "binary_operator"
            left = AstNode(kind, [left, op, right], (left.span[0], right.span[1]))

    def _angle_is_generic(self) -> bool:
        # Heuristic: `Name<...>(` or `Name<...>.` is a generic use, not less-than.
        save = self.pos
        try:
            if not self.skip_type_arguments():
                return False
            nxt = self.peek()
            return nxt is not None and nxt.text in ("(", ".", "::")
        finally:
            self.pos = save

    def parse_unary(self) -> AstNode:
        tok = self.peek()
        if tok is None:
            raise _ParseError("expected expression")
        if tok.text in ("+", "-", "!", "~"):
            op_tok = self.advance()
            op = leaf("operator", (op_tok.start, op_tok.end), op_tok.text)
            operand = self.parse_unary()
            return AstNode("unary_operator", [op, operand], (op_tok.start, operand.span[1]))
        if tok.text in ("++", "--"):
            op_tok = self.advance()
            op = leaf("operator", (op_tok.start, op_tok.end), op_tok.text)
            operand = self.parse_unary()
            return AstNode("update_expression", [op, operand], (op_tok.start, operand.span[1]))
        if tok.text == "(" and self._cast_ahead():
            start = self.pos
            self.advance()
            type_name = self.try_parse_type() or ""
            self.expect(")")
            operand = self.parse_unary()
            type_node = leaf("type", self.span_from(start), type_name)
            return AstNode("cast_expression", [type_node, operand], (tok.start, operand.span[1]))
        return self.parse_postfix()

    def _cast_ahead(self) -> bool:
        save = self.pos
        try:
            self.advance()  # '('
            tok = self.peek()
            if tok is None:
                return False
            primitive = tok.text in PRIMITIVE_TYPES and tok.text not in ("void", "var")
            if self.try_parse_type() is None:
                return False
            if not self.at(")"):
                return False
            nxt = self.peek(1)
            if nxt is None:
                return False
            if primitive:
                return nxt.kind in (TokenKind.IDENTIFIER, TokenKind.LITERAL) or nxt.text in (
                    "(", "+", "-", "!", "~", "new", "this",
                )
            return nxt.kind in (TokenKind.IDENTIFIER, TokenKind.LITERAL) or nxt.text in (
                "(", "!", "~", "new", "this",
            )
        finally:
            self.pos = save

    def parse_postfix(self) -> AstNode:
        node = self.parse_primary()
        while True:
            tok = self.peek()
            if tok is None:
                return node
            if tok.text == ".":
                if not (self.at_kind(TokenKind.IDENTIFIER, 1) or self.at_kind(TokenKind.KEYWORD, 1)):
                    return node
                self.advance()
                name_tok = self.advance()
                name = leaf("identifier", (name_tok.start, name_tok.end), name_tok.text)
                if self.at("("):
                    args = self.parse_arguments()
                    node = AstNode("call", [AstNode("attribute", [node, name], (node.span[0], name.span[1]))] + args,
                                   (node.span[0], self.tokens[self.pos - 1].end))
                else:
                    node = AstNode("attribute", [node, name], (node.span[0], name.span[1]))
            elif tok.text == "(" and node.kind in ("identifier", "attribute"):
                args = self.parse_arguments()
                node = AstNode("call", [node] + args, (node.span[0], self.tokens[self.pos - 1].end))
            elif tok.text == "[":
                self.advance()
                index = self.parse_expression()
                if self.at("]"):
                    self.advance()
                node = AstNode("subscript", [node, index], (node.span[0], self.tokens[self.pos - 1].end))
            elif tok.text in ("++", "--"):
                op_tok = self.advance()
                op = leaf("operator", (op_tok.start, op_tok.end), op_tok.text)
                node = AstNode("update_expression", [node, op], (node.span[0], op_tok.end))
            elif tok.text == "::":
                self.advance()
                if self.at_kind(TokenKind.IDENTIFIER) or self.at("new"):
                    name_tok = self.advance()
                    name = leaf("identifier", (name_tok.start, name_tok.end), name_tok.text)
                    node = AstNode("method_reference", [node, name], (node.span[0], name_tok.end))
                else:
                    return node
            else:
                return node

    def parse_arguments(self) -> list[AstNode]:
        self.expect("(")
        args: list[AstNode] = []
        while self.peek() is not None and not self.at(")"):
            args.append(self.parse_expression())
            if self.at(","):
                self.advance()
            elif not self.at(")"):
                raise _ParseError("bad argument list")
        if self.at(")"):
            self.advance()
        return args

    def parse_primary(self) -> AstNode:
        tok = self.peek()
        if tok is None:
            raise _ParseError("expected expression")
        if tok.kind == TokenKind.LITERAL:
            self.advance()
            return leaf(_literal_kind(tok.text), (tok.start, tok.end), tok.text)
        if tok.text in ("true", "false"):
            self.advance()
            return leaf("boolean", (tok.start, tok.end), tok.text)
        if tok.text == "null":
            self.advance()
            return leaf("none", (tok.start, tok.end), tok.text)
        if tok.text == "new":
            return self.parse_creation()
        if tok.text in ("this", "super"):
            self.advance()
            return leaf("identifier", (tok.start, tok.end), tok.text)
        if tok.text == "(":
            # Lambda `(a, b) -> ...`?
            close = self._matching_paren(self.pos)
            if close is not None and close + 1 < len(self.tokens) and self.tokens[close + 1].text == "->":
                return self.parse_lambda_parenthesized()
            self.advance()
            expr = self.parse_expression()
            if self.at(")"):
                self.advance()
            return expr
        if tok.kind == TokenKind.IDENTIFIER:
            if self.at("->", 1):
                self.advance()
                self.advance()
                body = self.parse_lambda_body()
                param = leaf("parameter", (tok.start, tok.end), tok.text)
                return AstNode("lambda", [AstNode("parameters", [param], (tok.start, tok.end)), body],
                               (tok.start, body.span[1]))
            self.advance()
            return leaf("identifier", (tok.start, tok.end), tok.text)
        if tok.text in PRIMITIVE_TYPES:
            self.advance()  # e.g. int.class, long.MAX_VALUE misuse
            return leaf("identifier", (tok.start, tok.end), tok.text)
        raise _ParseError(f"unexpected token {tok.text!r}")

    def _matching_paren(self, open_index: int) -> int | None:
        depth = 0
        for i in range(open_index, len(self.tokens)):
            text = self.tokens[i].text
            if text == "(":
                depth += 1
            elif text == ")":
                depth -= 1
                if depth == 0:
                    return i
        return None

    def parse_lambda_parenthesized(self) -> AstNode:
        start_tok = self.peek()
        self.expect("(")
        params: list[AstNode] = []
        while self.peek() is not None and not self.at(")"):
            self.try_parse_type()
            if self.at_kind(TokenKind.IDENTIFIER):
                tok = self.advance()
                params.append(leaf("parameter", (tok.start, tok.end), tok.text))
            if self.at(","):
                self.advance()
            elif not self.at(")"):
                break
        if self.at(")"):
            self.advance()
        self.expect("->")
        body = self.parse_lambda_body()
        return AstNode("lambda", [AstNode("parameters", params, (start_tok.start, start_tok.end)), body],
                       (start_tok.start, body.span[1]))

    def parse_lambda_body(self) -> AstNode:
        if self.at("{"):
            return self.parse_block()
        return self.parse_expression()

    def parse_creation(self) -> AstNode:
        start_tok = self.peek()
        self.expect("new")
        type_name = self.try_parse_type() or "Object"
        type_node = leaf("identifier", (start_tok.start, start_tok.end), type_name)
        if self.at("("):
            args = self.parse_arguments()
            if self.at("{"):  # anonymous class body: skip contents
                self.skip_balanced("{", "}")
            end = self.tokens[self.pos - 1].end
            return AstNode("object_creation", [type_node] + args, (start_tok.start, end))
        sizes: list[AstNode] = []
        while self.at("["):
            self.advance()
            if not self.at("]"):
                sizes.append(self.parse_expression())
            if self.at("]"):
                self.advance()
        if self.at("{"):
            init = self.parse_variable_initializer()
            sizes.append(init)
        end = self.tokens[self.pos - 1].end if self.pos else start_tok.end
        return AstNode("array_creation", [type_node] + sizes, (start_tok.start, end))


def _literal_kind(text: str) -> str:
    first = text[0]
    if first in "'\"":
        return "string"
    lowered = text.lower().rstrip("lfd")
    if "." in lowered or (("e" in lowered) and not lowered.startswith("0x")):
        return "float"
    if text.lower().endswith(("f", "d")) and not text.lower().startswith("0x"):
        return "float"
    return "integer"


def parse_java(text: str) -> AstNode:
    return _Parser(text).parse_program()
