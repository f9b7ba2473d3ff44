"""Tokenizer for the VDM++ subset.

Keywords are case-insensitive (``Class``, ``End`` and ``Inv`` are accepted as
written in published samples) and are normalized to lower case. Identifiers
keep their case. A bare word made only of upper-case letters, digits and
underscores, at least two characters long and not a keyword, is a quote
literal; ``<NAME>`` is the explicit spelling and works for any name.

Mathematical symbols tokenize exactly like their ASCII spellings::

    ->  →      and  ∧     or  ∨      not  ¬      forall  ∀     exists  ∃
    in set  ∈  not in set  ∉         =>  ⇒       <=  ≤         >=  ≥
    <>  ≠      union  ∪   inter  ∩   subset  ⊆   psubset  ⊂    |->  ↦
    *  ×       nat  ℕ

``--`` starts a comment running to end of line.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

KEYWORDS = frozenset("""
    class end functions types values operations thread sync inv pre post
    if then elseif else cases others let in forall exists and or not true
    false nil len hd tl elems inds card dom rng floor abs div mod union inter
    subset psubset public private protected of to
    bool nat nat1 int rat real char token
""".split())

# Multi-word keywords are folded into one token.
PHRASES = (
    ("is", "subclass", "of"),
    ("instance", "variables"),
    ("not", "in", "set"),
    ("in", "set"),
)

SYMBOLS = sorted("""
    |-> ==> == -> => <= >= <> ++ := :: = < > + - * / \\ ^ ( ) [ ] { } , ; : . & |
""".split(), key=len, reverse=True)

UNICODE = {
    "→": ("symbol", "->"),
    "∧": ("keyword", "and"),
    "∨": ("keyword", "or"),
    "¬": ("keyword", "not"),
    "∀": ("keyword", "forall"),
    "∃": ("keyword", "exists"),
    "∈": ("keyword", "in set"),
    "∉": ("keyword", "not in set"),
    "⇒": ("symbol", "=>"),
    "≤": ("symbol", "<="),
    "≥": ("symbol", ">="),
    "≠": ("symbol", "<>"),
    "∪": ("keyword", "union"),
    "∩": ("keyword", "inter"),
    "⊆": ("keyword", "subset"),
    "⊂": ("keyword", "psubset"),
    "↦": ("symbol", "|->"),
    "×": ("symbol", "*"),
    "ℕ": ("keyword", "nat"),
}

_WORD = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_NUMBER = re.compile(r"[0-9]+(\.[0-9]+)?")
_ANGLE_QUOTE = re.compile(r"<([A-Za-z_][A-Za-z0-9_]*)>")
_QUOTE_WORD = re.compile(r"[A-Z][A-Z0-9_]+")

_CHAR_ESCAPES = {"n": "\n", "t": "\t", "\\": "\\", "'": "'", '"': '"'}


@dataclass(frozen=True)
class Token:
    kind: str  # keyword, identifier, quote-literal, number, char-literal, string-literal, symbol
    text: str
    line: int
    column: int


@dataclass(frozen=True)
class Diagnostic:
    severity: str
    message: str
    line: int
    column: int

    def __str__(self) -> str:
        return f"{self.line}:{self.column}: {self.severity}: {self.message}"


class ParseError(Exception):
    """Raised with one or more positioned diagnostics."""

    def __init__(self, diagnostics: list[Diagnostic]):
        self.diagnostics = list(diagnostics)
        super().__init__("; ".join(str(d) for d in self.diagnostics))


class LexError(ParseError):
    pass


def _fold_phrases(tokens: list[Token]) -> list[Token]:
    out: list[Token] = []
    i = 0
    while i < len(tokens):
        for phrase in PHRASES:
            n = len(phrase)
            window = tokens[i:i + n]
            if len(window) == n and all(
                t.kind in ("keyword", "identifier") and t.text.lower() == w
                for t, w in zip(window, phrase)
            ):
                first = window[0]
                out.append(Token("keyword", " ".join(phrase), first.line, first.column))
                i += n
                break
        else:
            out.append(tokens[i])
            i += 1
    return out


def _read_escaped(text: str, i: int, line: int, col: int) -> tuple[str, int]:
    if text[i] != "\\":
        return text[i], i + 1
    if i + 1 < len(text) and text[i + 1] in _CHAR_ESCAPES:
        return _CHAR_ESCAPES[text[i + 1]], i + 2
    raise LexError([Diagnostic("error", "bad escape sequence", line, col)])


def tokenize(text: str) -> list[Token]:
    """Split ``text`` into tokens, raising :class:`LexError` on bad input."""
    tokens: list[Token] = []
    i, line, line_start = 0, 1, 0
    n = len(text)
    while i < n:
        c = text[i]
        col = i - line_start + 1
        if c == "\n":
            i += 1
            line += 1
            line_start = i
            continue
        if c.isspace():
            i += 1
            continue
        if text.startswith("--", i):
            while i < n and text[i] != "\n":
                i += 1
            continue
        if c in UNICODE:
            kind, canon = UNICODE[c]
            tokens.append(Token(kind, canon, line, col))
            i += 1
            continue
        m = _WORD.match(text, i)
        if m:
            word = m.group()
            low = word.lower()
            if low in KEYWORDS:
                tokens.append(Token("keyword", low, line, col))
            elif _QUOTE_WORD.fullmatch(word) and word != "RESULT":
                tokens.append(Token("quote-literal", word, line, col))
            else:
                tokens.append(Token("identifier", word, line, col))
            i = m.end()
            continue
        m = _NUMBER.match(text, i)
        if m:
            tokens.append(Token("number", m.group(), line, col))
            i = m.end()
            continue
        if c == "'":
            if i + 1 >= n or text[i + 1] == "\n":
                raise LexError([Diagnostic("error", "unterminated character literal", line, col)])
            ch, j = _read_escaped(text, i + 1, line, col)
            if j >= n or text[j] != "'":
                raise LexError([Diagnostic("error", "unterminated character literal", line, col)])
            tokens.append(Token("char-literal", ch, line, col))
            i = j + 1
            continue
        if c == '"':
            j = i + 1
            chars = []
            while True:
                if j >= n or text[j] == "\n":
                    raise LexError([Diagnostic("error", "unterminated string literal", line, col)])
                if text[j] == '"':
                    break
                ch, j = _read_escaped(text, j, line, col)
                chars.append(ch)
            tokens.append(Token("string-literal", "".join(chars), line, col))
            i = j + 1
            continue
        m = _ANGLE_QUOTE.match(text, i)
        if m:
            tokens.append(Token("quote-literal", m.group(1), line, col))
            i = m.end()
            continue
        for sym in SYMBOLS:
            if text.startswith(sym, i):
                tokens.append(Token("symbol", sym, line, col))
                i += len(sym)
                break
        else:
            raise LexError([Diagnostic("error", f"unexpected character {c!r}", line, col)])
    return _fold_phrases(tokens)


def _spell(tok: Token) -> str:
    if tok.kind == "char-literal":
        return "'" + _escape_text(tok.text, "'") + "'"
    if tok.kind == "string-literal":
        return '"' + _escape_text(tok.text, '"') + '"'
    if tok.kind == "quote-literal" and (
        not _QUOTE_WORD.fullmatch(tok.text) or tok.text.lower() in KEYWORDS
        or tok.text == "RESULT"
    ):
        return f"<{tok.text}>"
    return tok.text


def _escape_text(s: str, quote: str) -> str:
    out = []
    for ch in s:
        if ch in (quote, "\\"):
            out.append("\\" + ch)
        elif ch == "\n":
            out.append("\\n")
        elif ch == "\t":
            out.append("\\t")
        else:
            out.append(ch)
    return "".join(out)


def detokenize(tokens: list[Token]) -> str:
    """Join tokens back into text that tokenizes to the same kinds and texts."""
    return " ".join(_spell(t) for t in tokens)
