"""Language frontends: parsing, function extraction, tokenization.

Python goes through the stdlib grammar, Java through the in-repo
recursive-descent parser. C++ is an optional extension that is not
built; requesting it raises UnsupportedLanguage.
"""

from __future__ import annotations

from ..errors import ParseFailure, UnsupportedLanguage
from .astnodes import (
    EXTENSION_LANGUAGES,
    MAIN_WRAPPER_NAME,
    AstNode,
    FunctionDecl,
    Language,
    SourceUnit,
    Token,
    TokenKind,
    TokenStream,
)
from .java_frontend import parse_java
from .lexer import token_stream
from .python_frontend import parse_python

__all__ = [
    "AstNode",
    "EXTENSION_LANGUAGES",
    "FunctionDecl",
    "Language",
    "MAIN_WRAPPER_NAME",
    "SourceUnit",
    "Token",
    "TokenKind",
    "TokenStream",
    "extract_functions",
    "infer_language",
    "parse",
    "tokenize",
]

_FUNCTION_KINDS = frozenset(["function_definition", "method_declaration"])
_CLASS_KINDS = frozenset(["class_definition", "class_declaration"])


def parse(unit: SourceUnit) -> AstNode:
    """Parse a source unit into a language-neutral tree.

    Statements that cannot be parsed are preserved as ERROR leaves, so
    near-parseable submissions still yield a usable tree.
    """
    if unit.language == Language.PYTHON:
        tree = parse_python(unit.text)
    elif unit.language == Language.JAVA:
        tree = parse_java(unit.text)
    elif unit.language == Language.CPP:
        raise UnsupportedLanguage("the optional C++ frontend is not built")
    else:
        raise UnsupportedLanguage(f"no frontend for {unit.language!r}")
    if tree is None:
        raise ParseFailure(f"no tree for unit {unit.id!r}")
    return tree


def tokenize(unit: SourceUnit) -> TokenStream:
    if unit.language not in (Language.PYTHON, Language.JAVA):
        raise UnsupportedLanguage(f"no lexer for {unit.language!r}")
    return token_stream(unit.text, unit.language)


def infer_language(path: str) -> Language | None:
    for ext, lang in EXTENSION_LANGUAGES.items():
        if path.endswith(ext):
            return lang
    return None


def _params_of(fn_node: AstNode) -> list[str]:
    params = fn_node.child_of_kind("parameters")
    if params is None:
        return []
    return [p.text for p in params.children if p.kind == "parameter"]


def _placeholder_for(fn_node: AstNode) -> AstNode:
    """Call-site placeholder left where a nested def used to be."""
    name = fn_node.child_of_kind("identifier")
    ident = AstNode("identifier", [], name.span if name else fn_node.span, name.text if name else "")
    return AstNode("nested_function_placeholder", [ident], fn_node.span)


def _extract_from_body(body: AstNode, out: list[FunctionDecl], language: Language) -> AstNode:
    """Rebuild ``body`` with nested defs replaced by placeholders; the
    extracted decls are appended to ``out``. The input tree is not mutated."""
    children: list[AstNode] = []
    for child in body.children:
        if child.kind in _FUNCTION_KINDS:
            out.append(_make_decl(child, out, language))
            children.append(_placeholder_for(child))
        elif child.children:
            children.append(_extract_from_body(child, out, language))
        else:
            children.append(child)
    return AstNode(body.kind, children, body.span, body.text)


def _make_decl(fn_node: AstNode, out: list[FunctionDecl], language: Language) -> FunctionDecl:
    name = fn_node.child_of_kind("identifier")
    body = fn_node.child_of_kind("block") or AstNode("block", [], fn_node.span)
    body = _extract_from_body(body, out, language)
    return FunctionDecl(
        name=name.text if name else "<anonymous>",
        params=_params_of(fn_node),
        body=body,
        language=language,
    )


def _collect_class_members(cls: AstNode, decls: list[FunctionDecl], loose: list[AstNode], language: Language) -> None:
    body = cls.child_of_kind("class_body") or cls.child_of_kind("block")
    if body is None:
        return
    for member in body.children:
        if member.kind in _FUNCTION_KINDS:
            decls.append(_make_decl(member, decls, language))
        elif member.kind in _CLASS_KINDS:
            _collect_class_members(member, decls, loose, language)
        elif member.kind == "block":  # initializer block
            loose.extend(member.children)
        else:
            loose.append(member)


def extract_functions(tree: AstNode, language: Language) -> list[FunctionDecl]:
    """One FunctionDecl per syntactic function.

    Loose top-level statements land in a single synthetic ``__main__``
    wrapper; a file that declares only functions gets no wrapper, and an
    empty file gets an empty one so every unit yields at least one decl.
    """
    decls: list[FunctionDecl] = []
    loose: list[AstNode] = []
    for child in tree.children:
        if child.kind in _FUNCTION_KINDS:
            decls.append(_make_decl(child, decls, language))
        elif child.kind in _CLASS_KINDS:
            _collect_class_members(child, decls, loose, language)
        elif child.kind == "import_statement" and language == Language.JAVA:
            continue  # package/import headers have no runtime effect
        else:
            loose.append(child)
    if loose or not decls:
        span = (loose[0].span[0], loose[-1].span[1]) if loose else (0, 0)
        wrapper_decls: list[FunctionDecl] = []
        body = _extract_from_body(AstNode("block", loose, span), wrapper_decls, language)
        decls.extend(wrapper_decls)
        decls.append(
            FunctionDecl(
                name=MAIN_WRAPPER_NAME,
                params=[],
                body=body,
                is_toplevel_wrapper=True,
                language=language,
            )
        )
    return decls
