"""Core syntax-level data types shared by all language frontends."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum


class Language(str, Enum):
    PYTHON = "python"
    JAVA = "java"
    CPP = "cpp"


#: File extensions used by the CLI to infer a source language.
EXTENSION_LANGUAGES = {
    ".py": Language.PYTHON,
    ".java": Language.JAVA,
    ".cpp": Language.CPP,
    ".cc": Language.CPP,
    ".cxx": Language.CPP,
    ".h": Language.CPP,
    ".hpp": Language.CPP,
}

#: Synthetic function that collects loose top-level statements.
MAIN_WRAPPER_NAME = "__main__"


@dataclass(frozen=True)
class SourceUnit:
    """A single snippet of source code to analyse."""

    language: Language
    text: str
    id: str = ""


@dataclass
class AstNode:
    """Language-neutral parse tree node.

    ``kind`` is the grammar production name, ``span`` a byte range into
    the original source, and ``text`` the token text for leaves.
    Error-recovery regions appear as leaves with kind ``"ERROR"``.
    """

    kind: str
    children: list[AstNode] = field(default_factory=list)
    span: tuple[int, int] = (0, 0)
    text: str = ""

    @property
    def is_leaf(self) -> bool:
        return not self.children

    def child_of_kind(self, kind: str) -> AstNode | None:
        for child in self.children:
            if child.kind == kind:
                return child
        return None

    def walk(self):
        """Pre-order traversal over the subtree, including self."""
        stack = [self]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(reversed(node.children))

    def size(self) -> int:
        return sum(1 for _ in self.walk())

    def __repr__(self) -> str:  # keep test failures readable
        if self.is_leaf:
            return f"AstNode({self.kind!r}, text={self.text!r})"
        return f"AstNode({self.kind!r}, {len(self.children)} children)"


def leaf(kind: str, span: tuple[int, int], text: str) -> AstNode:
    return AstNode(kind=kind, span=span, text=text)


def error_node(span: tuple[int, int], text: str) -> AstNode:
    return AstNode(kind="ERROR", span=span, text=text)


@dataclass
class FunctionDecl:
    """One function extracted from a parsed unit.

    Loose top-level statements are wrapped into a synthetic decl named
    ``__main__``; nested defs are pulled out and replaced at the nesting
    site by a call-site placeholder so the edge survives in the PDG.
    """

    name: str
    params: list[str]
    body: AstNode
    is_toplevel_wrapper: bool = False
    language: Language = Language.PYTHON


class TokenKind(str, Enum):
    IDENTIFIER = "identifier"
    KEYWORD = "keyword"
    OPERATOR = "operator"
    LITERAL = "literal"
    PUNCTUATION = "punctuation"


@dataclass(frozen=True)
class Token:
    kind: TokenKind
    text: str


@dataclass
class TokenStream:
    """Comment- and whitespace-free token sequence for lexical metrics."""

    tokens: list[Token]

    def texts(self) -> list[str]:
        return [t.text for t in self.tokens]

    def __len__(self) -> int:
        return len(self.tokens)

    def __iter__(self):
        return iter(self.tokens)
