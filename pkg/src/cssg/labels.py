"""Normalized node labels for semantic graphs.

Statement and predicate nodes carry one label each: operations keep
their operator symbol, identifiers collapse to VAR/PARAM classes, and
constants collapse to type classes. The vocabulary is deliberately
language-neutral so graphs from different frontends stay comparable.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .frontend.astnodes import AstNode


class LabelCategory(str, Enum):
    OPERATION = "operation"
    IDENTIFIER_CLASS = "identifier_class"
    CONSTANT_CLASS = "constant_class"
    FUNCTION_NAME = "function_name"
    ROOT = "root"


@dataclass(frozen=True)
class NodeLabel:
    category: LabelCategory
    detail: str

    def __str__(self) -> str:
        return f"{self.category.value}:{self.detail}"


ROOT_LABEL = NodeLabel(LabelCategory.ROOT, "ROOT")

#: Cross-language operator synonyms; the map's image is its own fixpoint,
#: which is what makes normalization idempotent.
_OPERATOR_SYNONYMS = {
    "&&": "and",
    "||": "or",
    "!": "not",
    "not in": "in",
    "is not": "is",
    "++": "+=",
    "--": "-=",
}

_CONSTANT_KINDS = {
    "integer": "INT_LIT",
    "float": "FLOAT_LIT",
    "string": "STR_LIT",
    "boolean": "BOOL_LIT",
    "none": "NONE_LIT",
    "list": "COLLECTION_LIT",
    "tuple": "COLLECTION_LIT",
    "set": "COLLECTION_LIT",
    "dict": "COLLECTION_LIT",
    "array_initializer": "COLLECTION_LIT",
}


def normalize_detail(detail: str) -> str:
    detail = detail.strip()
    return _OPERATOR_SYNONYMS.get(detail, detail)


def function_label(name: str) -> NodeLabel:
    return NodeLabel(LabelCategory.FUNCTION_NAME, name)


def operation(detail: str) -> NodeLabel:
    return NodeLabel(LabelCategory.OPERATION, normalize_detail(detail))


def _first_operator(node: AstNode) -> str:
    for child in node.children:
        if child.kind == "operator":
            return child.text
    return node.kind


def expression_label(expr: AstNode, params: frozenset[str]) -> NodeLabel:
    """Label for an expression used as a statement or predicate."""
    kind = expr.kind
    if kind in _CONSTANT_KINDS:
        return NodeLabel(LabelCategory.CONSTANT_CLASS, _CONSTANT_KINDS[kind])
    if kind == "identifier":
        which = "PARAM" if expr.text in params else "VAR"
        return NodeLabel(LabelCategory.IDENTIFIER_CLASS, which)
    if kind == "assignment" or kind == "named_expression":
        return operation("assign")
    if kind == "augmented_assignment" or kind == "update_expression":
        op = _first_operator(expr)
        return operation(op if op.endswith("=") or op in ("++", "--") else op + "=")
    if kind in ("binary_operator", "boolean_operator", "comparison", "unary_operator"):
        return operation(_first_operator(expr))
    if kind in ("call", "object_creation"):
        return operation("call")
    if kind in ("attribute", "method_reference"):
        return operation("attr")
    if kind in ("subscript", "slice", "array_creation"):
        return operation("index")
    if kind in ("cast_expression", "starred"):
        for child in expr.children:
            if child.kind not in ("operator", "type"):
                return expression_label(child, params)
        return operation(kind)
    if kind == "conditional_expression":
        return operation("ifexp")
    if kind == "comprehension":
        return operation("comprehension")
    if kind == "fstring":
        return NodeLabel(LabelCategory.CONSTANT_CLASS, "STR_LIT")
    if kind == "lambda":
        return operation("lambda")
    if kind == "yield":
        return operation("yield")
    if kind == "ERROR":
        return operation("error")
    return operation(kind)


_STATEMENT_KEYWORDS = {
    "return_statement": "return",
    "raise_statement": "raise",
    "throw_statement": "raise",
    "break_statement": "break",
    "continue_statement": "continue",
    "pass_statement": "pass",
    "import_statement": "import",
    "assert_statement": "assert",
    "delete_statement": "del",
}


def statement_label(stmt: AstNode, params: frozenset[str]) -> NodeLabel:
    kind = stmt.kind
    if kind in _STATEMENT_KEYWORDS:
        return operation(_STATEMENT_KEYWORDS[kind])
    if kind == "expression_statement":
        if stmt.children:
            return expression_label(stmt.children[0], params)
        return operation("pass")
    if kind in ("assignment", "augmented_assignment", "named_expression", "update_expression"):
        return expression_label(stmt, params)
    if kind in ("local_variable_declaration", "field_declaration", "variable_declarator"):
        return operation("assign")
    if kind in ("class_definition", "class_declaration"):
        return operation("class")
    if kind == "nested_function_placeholder":
        return operation("call")
    if kind == "ERROR":
        return operation("error")
    return expression_label(stmt, params)
