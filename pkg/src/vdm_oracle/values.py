"""Runtime values under VDM semantics.

Representation:

======================  ===================================
VDM value               Python representation
======================  ===================================
bool                    :class:`Bool` (never a Python bool)
nat, nat1, int          ``int`` (unbounded)
rat, real               ``Fraction``; integral results fold to ``int``
char                    :class:`Char`
quote                   :class:`Quote`
token                   :class:`Token`
set                     ``frozenset``
seq                     ``tuple``
map                     :class:`VMap`
product tuple           :class:`Tup`
record                  :class:`Record`
nil                     ``None``
function                :class:`Closure`
======================  ===================================

Python's ``bool`` compares equal to ``int``, which would collapse ``{true, 1}``
inside a frozenset, hence the wrapper. With integral rationals folded to
``int``, ordinary ``==`` is VDM value equality and is false across variants.
"""

from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Iterator


@dataclass(frozen=True)
class Bool:
    value: bool

    def __bool__(self) -> bool:
        return self.value


TRUE = Bool(True)
FALSE = Bool(False)


def vbool(b: bool) -> Bool:
    return TRUE if b else FALSE


@dataclass(frozen=True)
class Char:
    ch: str


@dataclass(frozen=True)
class Quote:
    name: str


@dataclass(frozen=True)
class Token:
    value: str


@dataclass(frozen=True)
class Tup:
    items: tuple


@dataclass(frozen=True)
class Record:
    tag: str
    fields: tuple[tuple[str, Any], ...]

    def get(self, name: str):
        for k, v in self.fields:
            if k == name:
                return v
        raise KeyError(name)


@dataclass(frozen=True, eq=False)
class Closure:
    func: Any
    env: Any = field(repr=False, default=None)


class VMap(Mapping):
    """Immutable, hashable finite map."""

    __slots__ = ("_d", "_hash")

    def __init__(self, items=()):
        self._d = dict(items)
        self._hash = None

    def __getitem__(self, key):
        return self._d[key]

    def __iter__(self) -> Iterator:
        return iter(self._d)

    def __len__(self) -> int:
        return len(self._d)

    def __eq__(self, other):
        if not isinstance(other, VMap):
            return NotImplemented
        return self._d == other._d

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._d.items()))
        return self._hash

    def __repr__(self) -> str:
        return f"VMap({self._d!r})"


def number(x: int | Fraction) -> int | Fraction:
    """Fold integral rationals down to ``int``."""
    if isinstance(x, Fraction) and x.denominator == 1:
        return int(x.numerator)
    return x


def is_number(v) -> bool:
    return type(v) is int or isinstance(v, Fraction)


def kind_name(v) -> str:
    if v is None:
        return "nil"
    if isinstance(v, Bool):
        return "bool"
    if type(v) is int:
        return "int"
    if isinstance(v, Fraction):
        return "real"
    if isinstance(v, tuple):
        return "seq"
    if isinstance(v, frozenset):
        return "set"
    return type(v).__name__.lower()


# -- rendering ---------------------------------------------------------------

_ESCAPES = {"\n": "\\n", "\t": "\\t", "\\": "\\\\"}


def _escape(ch: str, quote: str) -> str:
    if ch == quote:
        return "\\" + ch
    return _ESCAPES.get(ch, ch)


def _decimal(q: Fraction) -> str | None:
    """Exact decimal text for ``q`` when one exists."""
    d = q.denominator
    twos = fives = 0
    while d % 2 == 0:
        d //= 2
        twos += 1
    while d % 5 == 0:
        d //= 5
        fives += 1
    if d != 1:
        return None
    places = max(twos, fives)
    scaled = abs(q.numerator) * (10**places // q.denominator)
    digits = str(scaled).rjust(places + 1, "0")
    sign = "-" if q < 0 else ""
    return f"{sign}{digits[:-places]}.{digits[-places:]}"


def render(v) -> str:
    """Canonical text for a value, also used on the IUT wire protocol."""
    if v is None:
        return "nil"
    if isinstance(v, Bool):
        return "true" if v.value else "false"
    if type(v) is int:
        return str(v)
    if isinstance(v, Fraction):
        return _decimal(v) or f"{v.numerator}/{v.denominator}"
    if isinstance(v, Char):
        return "'" + _escape(v.ch, "'") + "'"
    if isinstance(v, Quote):
        return v.name
    if isinstance(v, Token):
        return 'mk_token("' + "".join(_escape(c, '"') for c in v.value) + '")'
    if isinstance(v, tuple):
        if v and all(isinstance(x, Char) for x in v):
            return '"' + "".join(_escape(x.ch, '"') for x in v) + '"'
        return "[" + ", ".join(render(x) for x in v) + "]"
    if isinstance(v, frozenset):
        return "{" + ", ".join(sorted(render(x) for x in v)) + "}"
    if isinstance(v, VMap):
        if not v:
            return "{|->}"
        pairs = sorted(f"{render(k)} |-> {render(x)}" for k, x in v.items())
        return "{" + ", ".join(pairs) + "}"
    if isinstance(v, Tup):
        return "mk_(" + ", ".join(render(x) for x in v.items) + ")"
    if isinstance(v, Record):
        return f"mk_{v.tag}(" + ", ".join(render(x) for _, x in v.fields) + ")"
    if isinstance(v, Closure):
        return f"<function {v.func.name}>"
    raise TypeError(f"not a VDM value: {v!r}")
