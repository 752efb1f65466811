"""Hand-rolled lexer shared by the Java frontend and the token-stream op.

One engine, two language configs. Comments and whitespace are consumed
but never emitted; unknown bytes become single-character punctuation so
the stream stays deterministic on malformed input.
"""

from __future__ import annotations

from dataclasses import dataclass

from .astnodes import Language, Token, TokenKind, TokenStream

PYTHON_KEYWORDS = frozenset(
    """False None True and as assert async await break class continue def del
    elif else except finally for from global if import in is lambda nonlocal
    not or pass raise return try while with yield match case""".split()
)

JAVA_KEYWORDS = frozenset(
    """abstract assert boolean break byte case catch char class const continue
    default do double else enum extends final finally float for goto if
    implements import instanceof int interface long native new package private
    protected public return short static strictfp super switch synchronized
    this throw throws transient try void volatile while true false null
    var record yield""".split()
)

# Longest-first so maximal munch falls out of a linear scan.
PYTHON_OPERATORS = sorted(
    [
        "**=", "//=", ">>=", "<<=", "...", "!=", ">=", "<=", "==", "->",
        "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", ":=", "@=", "**",
        "//", "<<", ">>", "+", "-", "*", "/", "%", "@", "&", "|", "^", "~",
        "<", ">", "=",
    ],
    key=len,
    reverse=True,
)

JAVA_OPERATORS = sorted(
    [
        ">>>=", "<<=", ">>=", ">>>", "==", "!=", "<=", ">=", "&&", "||",
        "++", "--", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<",
        ">>", "->", "::", "+", "-", "*", "/", "%", "!", "~", "&", "|", "^",
        "<", ">", "=", "?",
    ],
    key=len,
    reverse=True,
)

PYTHON_PUNCTUATION = frozenset("()[]{},:;.")
JAVA_PUNCTUATION = frozenset("()[]{},:;.@")

_ID_START = frozenset("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ_$")
_ID_CONT = _ID_START | frozenset("0123456789")
_DIGITS = frozenset("0123456789")


@dataclass(frozen=True)
class LexToken:
    kind: TokenKind
    text: str
    start: int
    end: int


def _scan_python_string(text: str, i: int) -> int | None:
    """Return the end index of a Python string starting at ``i`` (after
    any prefix letters), or None if ``i`` does not start a string."""
    j = i
    while j < len(text) and text[j] in "rbfuRBFU":
        j += 1
    if j >= len(text) or text[j] not in "'\"":
        return None
    quote = text[j]
    if text[j : j + 3] == quote * 3:
        close = text.find(quote * 3, j + 3)
        return len(text) if close < 0 else close + 3
    k = j + 1
    while k < len(text):
        c = text[k]
        if c == "\\":
            k += 2
            continue
        if c == quote or c == "\n":
            return k + 1 if c == quote else k
        k += 1
    return k


def _scan_java_string(text: str, i: int) -> int | None:
    if text[i] not in "'\"":
        return None
    quote = text[i]
    k = i + 1
    while k < len(text):
        c = text[k]
        if c == "\\":
            k += 2
            continue
        if c == quote or c == "\n":
            return k + 1 if c == quote else k
        k += 1
    return k


def _scan_number(text: str, i: int) -> int:
    j = i
    if text[j : j + 2].lower() in ("0x", "0b", "0o"):
        j += 2
        while j < len(text) and (text[j] in _ID_CONT):
            j += 1
        return j
    seen_dot = False
    while j < len(text):
        c = text[j]
        if c in _DIGITS or c == "_":
            j += 1
        elif c == "." and not seen_dot and j + 1 < len(text) and text[j + 1] in _DIGITS:
            seen_dot = True
            j += 1
        elif c in "eE" and j + 1 < len(text) and (text[j + 1] in _DIGITS or text[j + 1] in "+-"):
            j += 2 if text[j + 1] in "+-" else 1
        elif c in "lLfFdDjJ":  # suffixes (Java long/float/double, Python imaginary)
            j += 1
            break
        else:
            break
    return j


def lex(text: str, language: Language) -> list[LexToken]:
    if language == Language.JAVA:
        keywords, operators, punct = JAVA_KEYWORDS, JAVA_OPERATORS, JAVA_PUNCTUATION
    else:
        keywords, operators, punct = PYTHON_KEYWORDS, PYTHON_OPERATORS, PYTHON_PUNCTUATION

    tokens: list[LexToken] = []
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c in " \t\r\n\f\x0b":
            i += 1
            continue
        if language == Language.PYTHON and c == "\\" and text[i + 1 : i + 2] == "\n":
            i += 2
            continue
        if language == Language.PYTHON and c == "#":
            nl = text.find("\n", i)
            i = n if nl < 0 else nl + 1
            continue
        if language == Language.JAVA and text[i : i + 2] == "//":
            nl = text.find("\n", i)
            i = n if nl < 0 else nl + 1
            continue
        if language == Language.JAVA and text[i : i + 2] == "/*":
            close = text.find("*/", i + 2)
            i = n if close < 0 else close + 2
            continue
        if language == Language.PYTHON:
            end = _scan_python_string(text, i)
        else:
            end = _scan_java_string(text, i)
        if end is not None:
            tokens.append(LexToken(TokenKind.LITERAL, text[i:end], i, end))
            i = end
            continue
        if c in _DIGITS or (c == "." and text[i + 1 : i + 2] and text[i + 1] in _DIGITS):
            end = _scan_number(text, i)
            tokens.append(LexToken(TokenKind.LITERAL, text[i:end], i, end))
            i = end
            continue
        if c in _ID_START:
            j = i + 1
            while j < n and text[j] in _ID_CONT:
                j += 1
            word = text[i:j]
            kind = TokenKind.KEYWORD if word in keywords else TokenKind.IDENTIFIER
            tokens.append(LexToken(kind, word, i, j))
            i = j
            continue
        for op in operators:
            if text.startswith(op, i):
                tokens.append(LexToken(TokenKind.OPERATOR, op, i, i + len(op)))
                i += len(op)
                break
        else:
            # Punctuation and anything unrecognised, one char at a time.
            tokens.append(LexToken(TokenKind.PUNCTUATION, c, i, i + 1))
            i += 1
    return tokens


def token_stream(text: str, language: Language) -> TokenStream:
    return TokenStream([Token(t.kind, t.text) for t in lex(text, language)])
