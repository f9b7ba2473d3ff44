"""Abstract syntax for the supported VDM++ subset.

Every node is an immutable dataclass. Source positions ride along on each
node for diagnostics but are excluded from comparison, so plain ``==`` is
structural equality and member order inside each category is significant.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Optional, Union

ACCESS_LEVELS = ("public", "private", "protected")

BASIC_KINDS = ("bool", "nat1", "nat", "int", "rat", "real", "char", "token")

RESULT = "RESULT"


@dataclass(frozen=True)
class Pos:
    line: int
    column: int

    def __str__(self) -> str:
        return f"{self.line}:{self.column}"


@dataclass(frozen=True)
class Node:
    pos: Optional[Pos] = field(default=None, compare=False, repr=False, kw_only=True)


# -- types -------------------------------------------------------------------


@dataclass(frozen=True)
class Basic(Node):
    kind: str


@dataclass(frozen=True)
class QuoteType(Node):
    name: str


@dataclass(frozen=True)
class QuoteUnion(Node):
    names: tuple[str, ...]


@dataclass(frozen=True)
class SetType(Node):
    elem: TypeExpr


@dataclass(frozen=True)
class SeqType(Node):
    elem: TypeExpr


@dataclass(frozen=True)
class MapType(Node):
    key: TypeExpr
    val: TypeExpr


@dataclass(frozen=True)
class ProductType(Node):
    items: tuple[TypeExpr, ...]


@dataclass(frozen=True)
class Field(Node):
    name: str
    type: TypeExpr


@dataclass(frozen=True)
class CompositeType(Node):
    tag: str
    fields: tuple[Field, ...]


@dataclass(frozen=True)
class OptionalType(Node):
    inner: TypeExpr


@dataclass(frozen=True)
class FuncType(Node):
    params: tuple[TypeExpr, ...]
    result: TypeExpr


@dataclass(frozen=True)
class Named(Node):
    name: str


TypeExpr = Union[
    Basic, QuoteType, QuoteUnion, SetType, SeqType, MapType, ProductType,
    CompositeType, OptionalType, FuncType, Named,
]


# -- expressions -------------------------------------------------------------

UNARY_OPS = (
    "not", "neg", "len", "hd", "tl", "elems", "inds", "card", "dom", "rng",
    "floor", "abs",
)

BINARY_OPS = (
    "+", "-", "*", "/", "div", "mod", "=", "<>", "<", "<=", ">", ">=", "and",
    "or", "=>", "in-set", "not-in-set", "union", "inter", "setdiff", "subset",
    "psubset", "concat", "map-override",
)


@dataclass(frozen=True)
class Literal(Node):
    value: Any


@dataclass(frozen=True)
class Var(Node):
    name: str


@dataclass(frozen=True)
class Unary(Node):
    op: str
    operand: Expr


@dataclass(frozen=True)
class Binary(Node):
    op: str
    left: Expr
    right: Expr


@dataclass(frozen=True)
class IfThenElse(Node):
    cond: Expr
    then: Expr
    orelse: Expr


@dataclass(frozen=True)
class CaseBranch(Node):
    pattern: Any
    body: Expr


@dataclass(frozen=True)
class Cases(Node):
    scrutinee: Expr
    branches: tuple[CaseBranch, ...]
    others: Optional[Expr] = None


@dataclass(frozen=True)
class Binding(Node):
    name: str
    value: Expr


@dataclass(frozen=True)
class LetIn(Node):
    bindings: tuple[Binding, ...]
    body: Expr


@dataclass(frozen=True)
class Quantifier(Node):
    kind: str  # "forall" | "exists"
    var: str
    domain: Expr
    predicate: Expr


@dataclass(frozen=True)
class SetEnum(Node):
    items: tuple[Expr, ...]


@dataclass(frozen=True)
class SeqEnum(Node):
    items: tuple[Expr, ...]


@dataclass(frozen=True)
class MapEnum(Node):
    items: tuple[tuple[Expr, Expr], ...]


@dataclass(frozen=True)
class Apply(Node):
    callee: str
    args: tuple[Expr, ...]


@dataclass(frozen=True)
class RecordCtor(Node):
    """``mk_Tag(...)``; the empty tag is a product tuple ``mk_(a, b)``."""

    tag: str
    args: tuple[Expr, ...]


@dataclass(frozen=True)
class FieldSelect(Node):
    target: Expr
    field: str


@dataclass(frozen=True)
class TypeJudgement(Node):
    """``is_T(e)``."""

    operand: Expr
    type: TypeExpr


Expr = Union[
    Literal, Var, Unary, Binary, IfThenElse, Cases, LetIn, Quantifier, SetEnum,
    SeqEnum, MapEnum, Apply, RecordCtor, FieldSelect, TypeJudgement,
]


# -- definitions -------------------------------------------------------------


@dataclass(frozen=True)
class Invariant(Node):
    binder: str
    expr: Expr


@dataclass(frozen=True)
class TypeDef(Node):
    name: str
    body: TypeExpr
    access: str = "private"
    invariant: Optional[Invariant] = None


@dataclass(frozen=True)
class ValueDef(Node):
    name: str
    expr: Expr
    access: str = "private"
    type: Optional[TypeExpr] = None


@dataclass(frozen=True)
class FunctionDef(Node):
    name: str
    param_types: tuple[TypeExpr, ...]
    result_type: TypeExpr
    params: tuple[str, ...]
    body: Expr
    access: str = "private"
    pre: Optional[Expr] = None
    post: Optional[Expr] = None


@dataclass(frozen=True)
class InstanceVar(Node):
    name: str
    declared_type: TypeExpr
    access: str = "private"
    init: Optional[Expr] = None


@dataclass(frozen=True)
class OperationDef(Node):
    """State-mutating operation, kept structurally; the body is opaque text."""

    name: str
    param_types: tuple[TypeExpr, ...]
    result_type: Optional[TypeExpr]
    params: tuple[str, ...]
    body: tuple[str, ...]
    access: str = "private"
    pre: Optional[Expr] = None
    post: Optional[Expr] = None


@dataclass(frozen=True)
class RawSection(Node):
    """A thread or sync section, stored as tokens and never evaluated."""

    keyword: str
    tokens: tuple[str, ...]


@dataclass(frozen=True)
class ClassDef(Node):
    name: str
    superclasses: tuple[str, ...] = ()
    value_defs: tuple[ValueDef, ...] = ()
    type_defs: tuple[TypeDef, ...] = ()
    function_defs: tuple[FunctionDef, ...] = ()
    instance_vars: tuple[InstanceVar, ...] = ()
    invariant: Optional[Invariant] = None
    operations: tuple[OperationDef, ...] = ()
    raw_sections: tuple[RawSection, ...] = ()


def ast_equal(a: ClassDef, b: ClassDef) -> bool:
    """Structural equality ignoring source positions."""
    return a == b


def lookup_type(cls: ClassDef, name: str) -> Optional[TypeDef]:
    """Find a type definition, falling back to a case-insensitive match."""
    for td in cls.type_defs:
        if td.name == name:
            return td
    folded = name.casefold()
    for td in cls.type_defs:
        if td.name.casefold() == folded:
            return td
    return None


def children(e: Expr) -> list[Expr]:
    """Direct subexpressions of ``e`` in source order."""
    if isinstance(e, Unary):
        return [e.operand]
    if isinstance(e, Binary):
        return [e.left, e.right]
    if isinstance(e, IfThenElse):
        return [e.cond, e.then, e.orelse]
    if isinstance(e, Cases):
        out = [e.scrutinee] + [b.body for b in e.branches]
        if e.others is not None:
            out.append(e.others)
        return out
    if isinstance(e, LetIn):
        return [b.value for b in e.bindings] + [e.body]
    if isinstance(e, Quantifier):
        return [e.domain, e.predicate]
    if isinstance(e, (SetEnum, SeqEnum)):
        return list(e.items)
    if isinstance(e, MapEnum):
        return [x for kv in e.items for x in kv]
    if isinstance(e, (Apply, RecordCtor)):
        return list(e.args)
    if isinstance(e, FieldSelect):
        return [e.target]
    if isinstance(e, TypeJudgement):
        return [e.operand]
    return []


def walk(e: Expr):
    yield e
    for c in children(e):
        yield from walk(c)
