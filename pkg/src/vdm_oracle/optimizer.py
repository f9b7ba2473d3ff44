"""Optimization phase: map specification types and classes to a target model.

The target model is language-neutral. It names every member exactly as the
source does, keeps access levels, and only prefixes the class name with
``Oracle_``. Expressions are carried over untouched as body plans; the
transpiler turns them into code.

Type mapping:

=====================  ==========================
source                 target
=====================  ==========================
bool                   Bool
nat1, nat, int         Int
rat, real              Float
char                   Char
quote, quote union     Enumeration
token                  StringVector
set of T               SetOf(T)
seq of T               VectorOf(T)
map K to V             MapOf(K, V)
product, composite     Struct
[T]                    OptionalOf(T)
function type          FunctionResult(result)
=====================  ==========================
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Optional, Union

from . import scope
from .syntax import (
    Basic, ClassDef, CompositeType, Expr, FuncType, FunctionDef, MapType, Named,
    OperationDef, OptionalType, Pos, ProductType, QuoteType, QuoteUnion, SeqType,
    SetType, TypeExpr, lookup_type,
)


class MappingError(Exception):
    def __init__(self, message: str, location: Optional[Pos] = None):
        super().__init__(message)
        self.message = message
        self.location = location

    def __str__(self) -> str:
        where = f" at {self.location}" if self.location else ""
        return f"{self.message}{where}"


# -- target types --------------------------------------------------------------


@dataclass(frozen=True)
class Bool:
    pass


@dataclass(frozen=True)
class Int:
    pass


@dataclass(frozen=True)
class Float:
    pass


@dataclass(frozen=True)
class Char:
    pass


@dataclass(frozen=True)
class StringVector:
    pass


@dataclass(frozen=True)
class Enumeration:
    name: str
    members: tuple[str, ...]

    def __post_init__(self):
        if not self.members or len(set(self.members)) != len(self.members):
            raise ValueError(f"enumeration {self.name} needs distinct members")


@dataclass(frozen=True)
class SetOf:
    elem: "TargetType"


@dataclass(frozen=True)
class VectorOf:
    elem: "TargetType"


@dataclass(frozen=True)
class MapOf:
    key: "TargetType"
    val: "TargetType"


@dataclass(frozen=True)
class Struct:
    name: str
    fields: tuple[tuple[str, "TargetType"], ...]


@dataclass(frozen=True)
class OptionalOf:
    inner: "TargetType"


@dataclass(frozen=True)
class FunctionResult:
    """A function-typed value. ``params`` is kept so a callable type can be spelled."""

    result: "TargetType"
    params: tuple["TargetType", ...] = ()


TargetType = Union[Bool, Int, Float, Char, StringVector, Enumeration, SetOf,
                   VectorOf, MapOf, Struct, OptionalOf, FunctionResult]

_BASIC = {
    "bool": Bool(), "nat1": Int(), "nat": Int(), "int": Int(),
    "rat": Float(), "real": Float(), "char": Char(), "token": StringVector(),
}


# -- class model ------------------------------------------------------------------


@dataclass(frozen=True)
class Constant:
    name: str
    type: TargetType
    value: Expr
    access: str


@dataclass(frozen=True)
class FieldModel:
    name: str
    type: TargetType
    access: str
    init: Optional[Expr] = None


@dataclass(frozen=True)
class TypeAlias:
    name: str
    type: TargetType
    access: str


@dataclass(frozen=True)
class MethodModel:
    """One target method. ``body`` is the body plan; None means a hand-written body."""

    name: str
    access: str
    params: tuple[tuple[str, TargetType], ...]
    result: Optional[TargetType]
    body: Optional[Expr]
    pre: Optional[Expr] = None
    post: Optional[Expr] = None
    mutates_state: bool = False

    @property
    def param_types(self) -> tuple[TargetType, ...]:
        return tuple(t for _, t in self.params)


@dataclass(frozen=True)
class TargetClassModel:
    name: str
    source_name: str
    enums: tuple[Enumeration, ...] = ()
    structs: tuple[Struct, ...] = ()
    aliases: tuple[TypeAlias, ...] = ()
    constants: tuple[Constant, ...] = ()
    fields: tuple[FieldModel, ...] = ()
    methods: tuple[MethodModel, ...] = ()
    inv_method: Optional[MethodModel] = None
    type_invariants: tuple[MethodModel, ...] = ()
    base_classes: tuple[str, ...] = ()
    # Flattened source class, kept for run-time type judgements in emitted code.
    source: Optional[ClassDef] = field(default=None, compare=False, repr=False)

    def members(self) -> list[tuple[str, str, str, int]]:
        """(kind, name, access, arity) of every member, in declaration order."""
        out = [("alias", a.name, a.access, 0) for a in self.aliases]
        out += [("constant", c.name, c.access, 0) for c in self.constants]
        out += [("field", f.name, f.access, 0) for f in self.fields]
        if self.inv_method is not None:
            out.append(("method", "inv", self.inv_method.access, 1))
        out += [("method", m.name, m.access, len(m.params)) for m in self.type_invariants]
        out += [("method", m.name, m.access, len(m.params)) for m in self.methods]
        return out

    def method(self, name: str) -> Optional[MethodModel]:
        for m in self.methods:
            if m.name == name:
                return m
        return None

    def enum_of(self, quote: str) -> Optional[Enumeration]:
        for e in self.enums:
            if quote in e.members:
                return e
        return None


# -- mapping -------------------------------------------------------------------------


def oracle_name(name: str) -> str:
    return "Oracle_" + name


class _Mapper:
    def __init__(self, cls: ClassDef):
        self.cls = cls
        self.enums: dict[str, Enumeration] = {}
        self.structs: dict[str, Struct] = {}
        self._active: set[str] = set()

    def enum(self, name: str, members: tuple[str, ...]) -> Enumeration:
        e = Enumeration(name, members)
        prev = self.enums.get(name)
        if prev is not None and prev != e:
            raise MappingError(f"enumeration name {name} is used for two different quote sets")
        self.enums[name] = e
        return e

    def struct(self, s: Struct) -> Struct:
        self.structs.setdefault(s.name, s)
        return s

    def map(self, t: TypeExpr, name_hint: Optional[str] = None) -> TargetType:
        if isinstance(t, Basic):
            return _BASIC[t.kind]
        if isinstance(t, QuoteType):
            return self.enum(name_hint or t.name, (t.name,))
        if isinstance(t, QuoteUnion):
            return self.enum(name_hint or "_".join(n.lower() for n in t.names), t.names)
        if isinstance(t, SetType):
            return SetOf(self.map(t.elem))
        if isinstance(t, SeqType):
            return VectorOf(self.map(t.elem))
        if isinstance(t, MapType):
            return MapOf(self.map(t.key), self.map(t.val))
        if isinstance(t, ProductType):
            items = tuple(self.map(x) for x in t.items)
            name = name_hint or "Tuple_" + "_".join(_type_word(x) for x in items)
            return self.struct(Struct(name, tuple((f"f{i}", x) for i, x in enumerate(items, 1))))
        if isinstance(t, CompositeType):
            key = "mk_" + t.tag
            if key in self._active:
                raise MappingError(f"recursive record type {t.tag} has no value mapping", t.pos)
            self._active.add(key)
            try:
                fields = tuple((f.name, self.map(f.type)) for f in t.fields)
            finally:
                self._active.discard(key)
            # The synthesized state record would clash with the implementation's class name.
            name = t.tag + "_state" if t.tag == self.cls.name else t.tag
            return self.struct(Struct(name, fields))
        if isinstance(t, OptionalType):
            return OptionalOf(self.map(t.inner))
        if isinstance(t, FuncType):
            return FunctionResult(self.map(t.result), tuple(self.map(p) for p in t.params))
        if isinstance(t, Named):
            return self.named(t)
        raise MappingError(f"no mapping rule for {type(t).__name__}", getattr(t, "pos", None))

    def named(self, t: Named) -> TargetType:
        td = lookup_type(self.cls, t.name)
        if td is not None:
            if td.name in self._active:
                raise MappingError(f"recursive type {td.name} has no value mapping", t.pos)
            self._active.add(td.name)
            try:
                return self.map(td.body, td.name)
            finally:
                self._active.discard(td.name)
        body = scope.resolve_named(self.cls, t.name)
        if body is not None:
            return self.map(body)
        if scope.is_class_name(self.cls, t.name):
            st = scope.state_type(self.cls)
            if st is None:
                raise MappingError(f"class {t.name} has no state to map", t.pos)
            return self.map(st)
        raise MappingError(f"unresolved type name {t.name}", t.pos)


def _type_word(t: TargetType) -> str:
    if isinstance(t, (Enumeration, Struct)):
        return t.name
    if isinstance(t, (SetOf, VectorOf, OptionalOf)):
        return type(t).__name__ + _type_word(t.elem if not isinstance(t, OptionalOf) else t.inner)
    if isinstance(t, MapOf):
        return "MapOf" + _type_word(t.key) + _type_word(t.val)
    if isinstance(t, FunctionResult):
        return "Fn" + _type_word(t.result)
    return type(t).__name__


def map_type(t: TypeExpr, ctx: ClassDef, library: Mapping[str, ClassDef] | None = None) -> TargetType:
    """Map one source type to its target type, resolving names in ``ctx``."""
    return _Mapper(scope.flatten(ctx, library)).map(t)


def _method(mapper: _Mapper, f: FunctionDef) -> MethodModel:
    if isinstance(f.result_type, FuncType) or (
            isinstance(f.result_type, Named)
            and isinstance(scope.resolve_named(mapper.cls, f.result_type.name), FuncType)):
        raise MappingError(f"{f.name} returns a function; escaping closures have no mapping", f.pos)
    params = tuple((p, mapper.map(t)) for p, t in zip(f.params, f.param_types))
    return MethodModel(f.name, f.access, params, mapper.map(f.result_type), f.body, f.pre, f.post)


def _operation(mapper: _Mapper, o: OperationDef) -> MethodModel:
    params = tuple((p, mapper.map(t)) for p, t in zip(o.params, o.param_types))
    result = mapper.map(o.result_type) if o.result_type is not None else None
    return MethodModel(o.name, o.access, params, result, None, o.pre, o.post, mutates_state=True)


def map_class(c: ClassDef, library: Mapping[str, ClassDef] | None = None) -> TargetClassModel:
    """Apply the class mapping rules to ``c``.

    Superclasses stay as base classes; only members declared in ``c`` are
    mapped, though names may resolve through inherited type definitions.
    """
    if c.raw_sections:
        raw = c.raw_sections[0]
        raise MappingError(f"{raw.keyword} sections have no mapping", raw.pos)
    mapper = _Mapper(scope.flatten(c, library))
    aliases = []
    for td in c.type_defs:
        target = mapper.map(td.body, td.name)
        if not isinstance(target, (Enumeration, Struct)) or target.name != td.name:
            aliases.append(TypeAlias(td.name, target, td.access))
    constants = []
    for v in c.value_defs:
        if v.type is None:
            raise MappingError(f"value {v.name} needs a declared type to be mapped", v.pos)
        constants.append(Constant(v.name, mapper.map(v.type), v.expr, v.access))
    fields = [FieldModel(iv.name, mapper.map(iv.declared_type), iv.access, iv.init)
              for iv in c.instance_vars]
    methods = [_method(mapper, f) for f in c.function_defs]
    methods += [_operation(mapper, o) for o in c.operations]
    inv_method = None
    if c.invariant is not None:
        st = scope.state_type(mapper.cls)
        if st is None:
            raise MappingError(f"invariant of {c.name} has no state type to range over", c.invariant.pos)
        inv_method = MethodModel("inv", "private", ((c.invariant.binder, mapper.map(st)),),
                                 Bool(), c.invariant.expr)
    type_invs = []
    for td in c.type_defs:
        if td.invariant is not None:
            type_invs.append(MethodModel(
                f"inv_{td.name}", "private", ((td.invariant.binder, mapper.map(Named(td.name))),),
                Bool(), td.invariant.expr))
    return TargetClassModel(
        name=oracle_name(c.name),
        source_name=c.name,
        enums=tuple(mapper.enums.values()),
        structs=tuple(mapper.structs.values()),
        aliases=tuple(aliases),
        constants=tuple(constants),
        fields=tuple(fields),
        methods=tuple(methods),
        inv_method=inv_method,
        type_invariants=tuple(type_invs),
        base_classes=tuple(oracle_name(s) for s in c.superclasses),
        source=mapper.cls,
    )
