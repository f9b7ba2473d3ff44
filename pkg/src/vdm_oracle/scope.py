"""Superclass flattening and name resolution shared by the checker and engine."""

from __future__ import annotations

from dataclasses import replace
from typing import Mapping, Optional

from .syntax import (
    ClassDef, CompositeType, Field, FunctionDef, FuncType, MapType, Named,
    OptionalType, ProductType, SeqType, SetType, TypeExpr, lookup_type,
)


class UnknownClass(LookupError):
    pass


def flatten(cls: ClassDef, library: Mapping[str, ClassDef] | None = None) -> ClassDef:
    """Copy inherited members into ``cls``; local members win on name clashes.

    An inherited function is overridden only by a local function with the same
    name and parameter types, so overloads accumulate.
    """
    if not cls.superclasses:
        return cls
    library = library or {}
    return _flatten(cls, library, ())


def _flatten(cls: ClassDef, library, seen: tuple[str, ...]) -> ClassDef:
    if cls.name in seen:
        raise UnknownClass(f"inheritance cycle through {cls.name}")
    types = list(cls.type_defs)
    values = list(cls.value_defs)
    funcs = list(cls.function_defs)
    ivars = list(cls.instance_vars)
    invariant = cls.invariant
    for sup_name in cls.superclasses:
        sup = library.get(sup_name)
        if sup is None:
            raise UnknownClass(sup_name)
        sup = _flatten(sup, library, seen + (cls.name,))
        have = {t.name for t in types}
        types += [t for t in sup.type_defs if t.name not in have]
        have = {v.name for v in values}
        values += [v for v in sup.value_defs if v.name not in have]
        have = {(f.name, f.param_types) for f in funcs}
        funcs += [f for f in sup.function_defs if (f.name, f.param_types) not in have]
        have = {v.name for v in ivars}
        ivars += [v for v in sup.instance_vars if v.name not in have]
        if invariant is None:
            invariant = sup.invariant
    return replace(
        cls,
        superclasses=(),
        type_defs=tuple(types),
        value_defs=tuple(values),
        function_defs=tuple(funcs),
        instance_vars=tuple(ivars),
        invariant=invariant,
    )


def state_type(cls: ClassDef) -> Optional[TypeExpr]:
    """The type a class invariant's binder ranges over.

    One instance variable: its declared type. Several: a record tagged with the
    class name whose fields are the instance variables. None: no constraint.
    """
    ivars = cls.instance_vars
    if not ivars:
        return None
    if len(ivars) == 1:
        return ivars[0].declared_type
    return CompositeType(cls.name, tuple(Field(v.name, v.declared_type) for v in ivars))


def resolve_named(cls: ClassDef, name: str) -> Optional[TypeExpr]:
    """Resolve a type name to its definition body.

    Lookup order: type definitions (exact, then case-insensitive), instance
    variables used as type names (case-insensitive). The class name is not a
    type here; see :func:`is_class_name`.
    """
    td = lookup_type(cls, name)
    if td is not None:
        return td.body
    folded = name.casefold()
    for iv in cls.instance_vars:
        if iv.name.casefold() == folded:
            return iv.declared_type
    return None


def is_class_name(cls: ClassDef, name: str) -> bool:
    return name == cls.name and lookup_type(cls, name) is None


def functions_named(cls: ClassDef, name: str) -> list[FunctionDef]:
    return [f for f in cls.function_defs if f.name == name]


def named_refs(t: TypeExpr):
    """Yield every :class:`Named` node inside a type expression."""
    if isinstance(t, Named):
        yield t
    elif isinstance(t, (SetType, SeqType)):
        yield from named_refs(t.elem)
    elif isinstance(t, MapType):
        yield from named_refs(t.key)
        yield from named_refs(t.val)
    elif isinstance(t, ProductType):
        for x in t.items:
            yield from named_refs(x)
    elif isinstance(t, CompositeType):
        for f in t.fields:
            yield from named_refs(f.type)
    elif isinstance(t, OptionalType):
        yield from named_refs(t.inner)
    elif isinstance(t, FuncType):
        for x in t.params:
            yield from named_refs(x)
        yield from named_refs(t.result)
