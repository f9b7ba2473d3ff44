"""Test-input tokens shared by suite files, the eval command and the engine.

Encoding (suite JSON and the subprocess protocol): integers are JSON numbers,
characters are one-character strings (or ``"'c'"``), and the boundary symbols
are the strings ``"M"``, ``"M+1"`` and ``"M-1"``. The bare string ``"M"`` is
always the symbol; write ``"'M'"`` for the character.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .values import Char

DEFAULT_M = 2**31 - 1
SYMBOLS = ("M", "M+1", "M-1")


class InputError(ValueError):
    pass


@dataclass(frozen=True)
class IntTok:
    value: int

    def text(self) -> str:
        return str(self.value)

    def encode(self):
        return self.value


@dataclass(frozen=True)
class CharTok:
    ch: str

    def text(self) -> str:
        return f"'{self.ch}'"

    def encode(self):
        return f"'{self.ch}'" if self.ch == "M" else self.ch


@dataclass(frozen=True)
class SymbolTok:
    name: str

    def text(self) -> str:
        return self.name

    def encode(self):
        return self.name


InputToken = Union[IntTok, CharTok, SymbolTok]


def decode_token(raw) -> InputToken:
    """Turn one JSON-level item into an InputToken."""
    if isinstance(raw, bool):
        raise InputError(f"booleans are not valid test inputs: {raw!r}")
    if isinstance(raw, int):
        return IntTok(raw)
    if isinstance(raw, str):
        if raw in SYMBOLS:
            return SymbolTok(raw)
        if len(raw) == 1:
            return CharTok(raw)
        if len(raw) == 3 and raw[0] == raw[2] == "'":
            return CharTok(raw[1])
    raise InputError(f"cannot decode test input {raw!r}")


def parse_token_text(text: str) -> InputToken:
    """Decode one comma-separated command-line item, e.g. ``-6``, ``'A'``, ``M+1``."""
    s = text.strip()
    if not s:
        raise InputError("empty input token")
    try:
        return IntTok(int(s))
    except ValueError:
        return decode_token(s)


def split_inputs(text: str) -> list[InputToken]:
    """Split ``"2,'A',M+1"`` into tokens; commas inside quotes are kept."""
    if not text.strip():
        return []
    items, buf, quoted = [], [], False
    for ch in text:
        if ch == "'":
            quoted = not quoted
        if ch == "," and not quoted:
            items.append("".join(buf))
            buf = []
        else:
            buf.append(ch)
    items.append("".join(buf))
    return [parse_token_text(x) for x in items]


def token_value(tok: InputToken, M: int = DEFAULT_M):
    """Runtime value of a token, resolving M-symbols against ``M``."""
    if isinstance(tok, IntTok):
        return tok.value
    if isinstance(tok, CharTok):
        return Char(tok.ch)
    return {"M": M, "M+1": M + 1, "M-1": M - 1}[tok.name]
