"""Transformation phase: emit C++ oracle and driver skeletons from a target model.

Three units come out of one class:

* ``Oracle_<Name>.gen.h``: enumerations, records, the oracle class and its
  method bodies.
* ``driver.gen.h``: a driver holding one oracle and one implementation
  instance, with a comparator per public entry point.
* ``vdm_support.gen.h``: the error class plus the set/sequence/map helpers the
  bodies call (``tail``, ``elements``, ``indexes``, ``concatenation``, ...).

Every unit carries a structure manifest listing what it declares. Each
manifest entry holds a ``decl`` string that occurs verbatim in the unit text,
so the manifest can be checked without a compiler.

Integers are emitted as ``long long`` so the emitted oracle agrees with the
engine on inputs near 2^31; literals carry an ``LL`` suffix so that lambda
return types deduce consistently.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Optional, Sequence

from . import scope
from .optimizer import (
    Bool, Char, Enumeration, Float, FunctionResult, Int, MapOf, MethodModel,
    OptionalOf, SetOf, StringVector, Struct, TargetClassModel, TargetType,
    VectorOf,
)
from .syntax import (
    Apply, Basic, Binary, Cases, CompositeType, FieldSelect, IfThenElse, LetIn,
    Literal, MapEnum, MapType, Named, OptionalType, ProductType, Quantifier,
    QuoteType, QuoteUnion, RecordCtor, SeqEnum, SeqType, SetEnum, SetType,
    TypeJudgement, Unary, Var, lookup_type,
)
from .values import Bool as VBool, Char as VChar, Quote

SUPPORT_FILE = "vdm_support.gen.h"
DRIVER_FILE = "driver.gen.h"
MANIFEST_FILE = "manifest.jsonl"
IND = "    "


class EmitError(Exception):
    def __init__(self, message: str, location=None):
        super().__init__(message)
        self.message = message
        self.location = location

    def __str__(self) -> str:
        where = f" at {self.location}" if self.location else ""
        return f"{self.message}{where}"


@dataclass(frozen=True)
class Entity:
    """One declared entity. ``decl`` is the exact text that declares it."""

    kind: str
    name: str
    decl: str
    owner: Optional[str] = None
    access: Optional[str] = None
    arity: Optional[int] = None
    members: tuple[str, ...] = ()

    def to_json(self) -> dict:
        out = {"kind": self.kind, "name": self.name}
        for key in ("owner", "access", "arity"):
            if getattr(self, key) is not None:
                out[key] = getattr(self, key)
        if self.members:
            out["members"] = list(self.members)
        out["decl"] = self.decl
        return out


@dataclass(frozen=True)
class EmittedUnit:
    filename: str
    text: str
    structure: tuple[Entity, ...] = field(default=())

    def entities(self, kind: str) -> list[Entity]:
        return [e for e in self.structure if e.kind == kind]


# -- types -------------------------------------------------------------------------


def cpp_type(t: Optional[TargetType]) -> str:
    if t is None:
        return "void"
    if isinstance(t, Bool):
        return "bool"
    if isinstance(t, Int):
        return "long long"
    if isinstance(t, Float):
        return "double"
    if isinstance(t, Char):
        return "char"
    if isinstance(t, StringVector):
        return "std::vector<std::string>"
    if isinstance(t, (Enumeration, Struct)):
        return t.name
    if isinstance(t, SetOf):
        return f"std::set<{cpp_type(t.elem)}>"
    if isinstance(t, VectorOf):
        return f"std::vector<{cpp_type(t.elem)}>"
    if isinstance(t, MapOf):
        return f"std::map<{cpp_type(t.key)}, {cpp_type(t.val)}>"
    if isinstance(t, OptionalOf):
        return f"std::optional<{cpp_type(t.inner)}>"
    if isinstance(t, FunctionResult):
        return f"std::function<{cpp_type(t.result)}({', '.join(cpp_type(p) for p in t.params)})>"
    raise EmitError(f"no target spelling for {t!r}")


def _param(name: str, t: TargetType) -> str:
    if isinstance(t, (Bool, Int, Float, Char, Enumeration)):
        return f"{cpp_type(t)} {name}"
    return f"const {cpp_type(t)}& {name}"


def _signature(m: MethodModel, owner: Optional[str] = None) -> str:
    name = f"{owner}::{m.name}" if owner else m.name
    params = ", ".join(_param(n, t) for n, t in m.params)
    return f"{cpp_type(m.result)} {name}({params})"


# -- predicate translation --------------------------------------------------------------

_UNARY = {"len": "vdm::len", "hd": "vdm::hd", "tl": "vdm::tail", "elems": "vdm::elements",
          "inds": "vdm::indexes", "card": "vdm::card", "dom": "vdm::dom", "rng": "vdm::rng",
          "floor": "vdm::floor", "abs": "vdm::abs"}
_INFIX = {"+": "+", "-": "-", "*": "*", "=": "==", "<>": "!=", "<": "<", "<=": "<=",
          ">": ">", ">=": ">=", "and": "&&", "or": "||"}
_CALLS = {"/": "vdm::divide", "div": "vdm::div", "mod": "vdm::mod", "in-set": "vdm::in_set",
          "union": "vdm::unite", "inter": "vdm::intersect", "setdiff": "vdm::difference",
          "subset": "vdm::subset", "psubset": "vdm::psubset", "concat": "vdm::concatenation",
          "map-override": "vdm::override_map"}


class _Translator:
    def __init__(self, model: TargetClassModel, bound: Iterable[str] = (),
                 result: Optional[TargetType] = None, types: Optional[dict] = None):
        self.model = model
        self.bound = frozenset(bound)
        # Type returned by ``return`` statements in body mode, when known.
        self.result = result
        # Declared types of parameters still in scope (not shadowed).
        self.types = types or {}

    def fail(self, message: str, e):
        raise EmitError(message, getattr(e, "pos", None))

    def with_bound(self, *names: str) -> "_Translator":
        types = {k: v for k, v in self.types.items() if k not in names}
        return _Translator(self.model, self.bound | set(names), self.result, types)

    # literals

    def literal(self, v, e) -> str:
        if isinstance(v, VBool):
            return "true" if v.value else "false"
        if type(v) is int:
            if not -(2**63) < v < 2**63:
                self.fail(f"integer literal {v} does not fit the target integer type", e)
            return f"{v}LL"
        if isinstance(v, Fraction):
            return f"({v.numerator}.0 / {v.denominator}.0)"
        if isinstance(v, VChar):
            return _char_literal(v.ch)
        if isinstance(v, Quote):
            if self.model.enum_of(v.name) is None:
                self.fail(f"quote <{v.name}> belongs to no mapped enumeration", e)
            return v.name
        if v is None:
            return "std::nullopt"
        if isinstance(v, tuple) and all(isinstance(c, VChar) for c in v):
            return "std::vector<char>{" + ", ".join(_char_literal(c.ch) for c in v) + "}"
        self.fail(f"no translation for literal {v!r}", e)

    # expressions

    def expr(self, e) -> str:
        if isinstance(e, Literal):
            return self.literal(e.value, e)
        if isinstance(e, Var):
            if e.name not in self.bound and self.model.method(e.name) is not None:
                return f"[this](const auto&... a) {{ return {e.name}(a...); }}"
            return e.name
        if isinstance(e, Unary):
            x = self.expr(e.operand)
            if e.op == "not":
                return f"!({x})"
            if e.op == "neg":
                return f"-({x})"
            return f"{_UNARY[e.op]}({x})"
        if isinstance(e, Binary):
            if e.op in ("=", "<>"):
                left_tuple = isinstance(e.left, RecordCtor) and e.left.tag == ""
                right_tuple = isinstance(e.right, RecordCtor) and e.right.tag == ""
                if left_tuple != right_tuple:
                    other, tup = (e.right, e.left) if left_tuple else (e.left, e.right)
                    o = self.expr(other)
                    args = ", ".join(self.expr(x) for x in tup.args)
                    return f"({o} {_INFIX[e.op]} std::decay_t<decltype({o})>{{{args}}})"
            a, b = self.expr(e.left), self.expr(e.right)
            if e.op in _INFIX:
                return f"({a} {_INFIX[e.op]} {b})"
            if e.op == "=>":
                return f"(!({a}) || {b})"
            if e.op == "not-in-set":
                return f"!vdm::in_set({a}, {b})"
            return f"{_CALLS[e.op]}({a}, {b})"
        if isinstance(e, IfThenElse):
            return f"({self.expr(e.cond)} ? {self.expr(e.then)} : {self.expr(e.orelse)})"
        if isinstance(e, (Cases, LetIn, Quantifier)):
            inner = _Translator(self.model, self.bound, None, self.types)
            body = "\n".join(inner.body(e, IND))
            return "[&]() {\n" + body + "\n}()"
        if isinstance(e, SetEnum):
            if not e.items:
                return "vdm::empty_set{}"
            return "vdm::make_set(" + ", ".join(self.expr(x) for x in e.items) + ")"
        if isinstance(e, SeqEnum):
            if not e.items:
                return "vdm::empty_seq{}"
            return "vdm::make_seq(" + ", ".join(self.expr(x) for x in e.items) + ")"
        if isinstance(e, MapEnum):
            if not e.items:
                return "vdm::empty_map{}"
            pairs = ", ".join(f"std::make_pair({self.expr(k)}, {self.expr(v)})" for k, v in e.items)
            return f"vdm::make_map({pairs})"
        if isinstance(e, Apply):
            args = ", ".join(self.expr(a) for a in e.args)
            if e.callee in self.bound or (self.model.method(e.callee) is None and self._is_constant(e.callee)):
                return f"vdm::apply({e.callee}, {args})"
            return f"{e.callee}({args})"
        if isinstance(e, RecordCtor):
            if e.tag == "token":
                return f"vdm::make_token({self.expr(e.args[0])})"
            if e.tag == "":
                self.fail("tuple construction needs a declared record type", e)
            return f"{e.tag}{{" + ", ".join(self.expr(a) for a in e.args) + "}"
        if isinstance(e, FieldSelect):
            return f"{self.expr(e.target)}.{e.field}"
        if isinstance(e, TypeJudgement):
            return self.judgement(e)
        self.fail(f"no translation rule for {type(e).__name__}", e)

    def _is_constant(self, name: str) -> bool:
        return any(c.name == name for c in self.model.constants) or any(
            f.name == name for f in self.model.fields)

    # statements: lines that end by returning the value of ``e``

    def body(self, e, ind: str) -> list[str]:
        if isinstance(e, IfThenElse):
            return ([f"{ind}if ({self.expr(e.cond)}) {{"] + self.body(e.then, ind + IND)
                    + [f"{ind}}} else {{"] + self.body(e.orelse, ind + IND) + [f"{ind}}}"])
        if isinstance(e, Cases):
            return self.cases(e, ind)
        if isinstance(e, LetIn):
            lines, t = [], self
            for b in e.bindings:
                lines.append(f"{ind}const auto {b.name} = {t.expr(b.value)};")
                t = t.with_bound(b.name)
            return lines + t.body(e.body, ind)
        if isinstance(e, Quantifier):
            inner = self.with_bound(e.var)
            pred = inner.expr(e.predicate)
            if e.kind == "forall":
                test, hit, miss = f"!({pred})", "false", "true"
            else:
                test, hit, miss = pred, "true", "false"
            return [f"{ind}for (const auto& {e.var} : {self.expr(e.domain)}) {{",
                    f"{ind}{IND}if ({test}) return {hit};",
                    f"{ind}}}",
                    f"{ind}return {miss};"]
        if isinstance(e, Binary) and e.op == "and" and isinstance(e.right, (LetIn, Quantifier)):
            return [f"{ind}if (!{self.expr(e.left)}) return false;"] + self.body(e.right, ind)
        if isinstance(e, RecordCtor) and e.tag == "" and isinstance(self.result, Struct):
            args = ", ".join(self.expr(a) for a in e.args)
            return [f"{ind}return {self.result.name}{{{args}}};"]
        if (isinstance(e, Var) and isinstance(self.types.get(e.name), OptionalOf)
                and self.result is not None and not isinstance(self.result, OptionalOf)):
            return [f"{ind}return vdm::deref({e.name});"]
        return [f"{ind}return {self.expr(e)};"]

    def cases(self, e: Cases, ind: str) -> list[str]:
        scrut = self.expr(e.scrutinee)
        switchable = all(type(b.pattern.value if isinstance(b.pattern, Literal) else b.pattern)
                         in (int, VChar, Quote) for b in e.branches)
        def default(at: str) -> list[str]:
            if e.others is not None:
                return self.body(e.others, at)
            return [f"{at}throw error(\"evaluation\", \"no cases branch matches\");"]

        if switchable:
            lines = [f"{ind}switch ({scrut}) {{"]
            for b in e.branches:
                lines.append(f"{ind}{IND}case {self._pattern(b.pattern, e)}:")
                lines += self.body(b.body, ind + IND * 2)
            lines.append(f"{ind}{IND}default:")
            return lines + default(ind + IND * 2) + [f"{ind}}}"]
        lines = [f"{ind}const auto scrutinee_ = {scrut};"]
        for b in e.branches:
            lines.append(f"{ind}if (scrutinee_ == {self._pattern(b.pattern, e)}) {{")
            lines += self.body(b.body, ind + IND)
            lines.append(f"{ind}}}")
        return lines + default(ind)

    def _pattern(self, p, e) -> str:
        v = p.value if isinstance(p, Literal) else p
        return self.literal(v, e)

    # type judgements

    def judgement(self, e: TypeJudgement) -> str:
        x = self.expr(e.operand)
        src = self.model.source
        t = e.type
        if src is not None and isinstance(t, Named) and scope.is_class_name(src, t.name):
            st = scope.state_type(src)
            check = _membership(st, x, src) if st is not None else None
            inv = f"inv({x})" if self.model.inv_method is not None else None
            parts = [p for p in (check, inv) if p]
            return " && ".join(parts) if parts else "true"
        if src is None:
            self.fail("type judgements need the source class", e)
        return _membership(t, x, src) or "true"


def _char_literal(ch: str) -> str:
    esc = {"\n": "\\n", "\t": "\\t", "\\": "\\\\", "'": "\\'"}
    return "'" + esc.get(ch, ch) + "'"


def _membership(t, x: str, src, depth: int = 0) -> Optional[str]:
    """Run-time check that ``x`` inhabits ``t``; None when static typing suffices."""
    var = f"e{depth}"
    if isinstance(t, Basic):
        if t.kind == "nat":
            return f"vdm::is_nat({x})"
        if t.kind == "nat1":
            return f"vdm::is_nat1({x})"
        return None
    if isinstance(t, (QuoteType, QuoteUnion)):
        return None
    if isinstance(t, (SetType, SeqType)):
        inner = _membership(t.elem, var, src, depth + 1)
        return None if inner is None else f"vdm::all_of({x}, [&](const auto& {var}) {{ return {inner}; }})"
    if isinstance(t, MapType):
        k = _membership(t.key, f"{var}.first", src, depth + 1)
        v = _membership(t.val, f"{var}.second", src, depth + 1)
        inner = " && ".join(p for p in (k, v) if p)
        return f"vdm::all_of({x}, [&](const auto& {var}) {{ return {inner}; }})" if inner else None
    if isinstance(t, OptionalType):
        inner = _membership(t.inner, f"(*{x})", src, depth + 1)
        return None if inner is None else f"(!{x} || {inner})"
    if isinstance(t, ProductType):
        parts = [_membership(it, f"{x}.f{i}", src, depth + 1) for i, it in enumerate(t.items, 1)]
        parts = [p for p in parts if p]
        return "(" + " && ".join(parts) + ")" if parts else None
    if isinstance(t, CompositeType):
        parts = [_membership(f.type, f"{x}.{f.name}", src, depth + 1) for f in t.fields]
        parts = [p for p in parts if p]
        return "(" + " && ".join(parts) + ")" if parts else None
    if isinstance(t, Named):
        td = lookup_type(src, t.name)
        if td is not None:
            check = _membership(td.body, x, src, depth) if depth < 8 else None
            inv = f"inv_{td.name}({x})" if td.invariant is not None else None
            parts = [p for p in (check, inv) if p]
            return " && ".join(parts) if parts else None
        body = scope.resolve_named(src, t.name)
        return _membership(body, x, src, depth) if body is not None else None
    return None


def predicate_translate(e, ctx: TargetClassModel, bound: Sequence[str] = (),
                        as_body: bool = False):
    """Translate one expression.

    By default the result is an expression fragment. With ``as_body`` it is a
    statement block that returns the value, which is how method bodies are
    written: conditionals become ``if`` statements, ``cases`` a ``switch``,
    quantifiers a loop with an early return.
    """
    t = _Translator(ctx, bound)
    if as_body:
        return "\n".join(t.body(e, ""))
    return t.expr(e)


# -- units ------------------------------------------------------------------------------


def _guard(filename: str) -> str:
    return "".join(c if c.isalnum() else "_" for c in filename).upper()


def _check_enums(m: TargetClassModel):
    seen: dict[str, str] = {}
    for e in m.enums:
        for member in e.members:
            if member in seen and seen[member] != e.name:
                raise EmitError(f"enumerator {member} appears in both {seen[member]} and {e.name}")
            seen[member] = e.name


def _method_body(m: MethodModel, model: TargetClassModel, owner: str) -> list[str]:
    t = _Translator(model, [n for n, _ in m.params], m.result, dict(m.params))
    where = f"{owner}::{m.name}"
    lines = []
    state_check = m.mutates_state and model.inv_method is not None and _state_expr(model)
    if m.pre is not None:
        lines.append(f"{IND}if (!{t.expr(m.pre)}) throw error(\"precondition\", \"{where}\");")
    if state_check:
        lines.append(f"{IND}if (!inv({state_check})) throw error(\"invariant\", \"{where}\");")
    if m.body is None:
        lines.append(f"{IND}// Operation body: translate the statements by hand.")
        lines.append(f"{IND}throw error(\"unimplemented\", \"{where}\");")
        return lines
    if m.post is None:
        return lines + t.body(m.body, IND)
    rtype = cpp_type(m.result)
    lines.append(f"{IND}const {rtype} RESULT = [&]() -> {rtype} {{")
    lines += t.body(m.body, IND * 2)
    lines.append(f"{IND}}}();")
    lines.append(f"{IND}if (!{t.with_bound('RESULT').expr(m.post)}) throw error(\"postcondition\", \"{where}\");")
    lines.append(f"{IND}return RESULT;")
    return lines


def _state_expr(model: TargetClassModel) -> Optional[str]:
    if not model.fields:
        return None
    if len(model.fields) == 1:
        return model.fields[0].name
    st = model.inv_method.params[0][1]
    return f"{cpp_type(st)}{{" + ", ".join(f.name for f in model.fields) + "}"


def _struct_text(s: Struct) -> list[str]:
    lines = [f"struct {s.name} {{"]
    lines += [f"{IND}{cpp_type(t)} {n};" for n, t in s.fields]
    lines.append(f"{IND}bool operator==(const {s.name}&) const = default;")
    lines.append(f"{IND}auto operator<=>(const {s.name}&) const = default;")
    lines.append("};")
    return lines


HEADER_NOTES = (
    "// Generated oracle skeleton. Deviations from a literal transcription:",
    "//   methods return enumeration members rather than integer codes;",
    "//   oracle methods never print; results are returned to the caller;",
    "//   integers are long long and rat/real are double, while the oracle",
    "//   engine evaluates exactly, so results may differ near the limits.",
)


def emit_oracle_class(m: TargetClassModel) -> EmittedUnit:
    """Emit the oracle class header for ``m``."""
    _check_enums(m)
    filename = f"{m.name}.gen.h"
    guard = _guard(filename)
    out = list(HEADER_NOTES) + [f"#ifndef {guard}", f"#define {guard}", "",
                                f'#include "{SUPPORT_FILE}"']
    out += [f'#include "{b}.gen.h"' for b in m.base_classes]
    out.append("")
    structure: list[Entity] = []

    for e in m.enums:
        decl = f"enum {e.name} {{" + ", ".join(e.members) + "};"
        out.append(decl)
        structure.append(Entity("enum", e.name, decl, members=e.members))
    if m.enums:
        out.append("")
    for s in m.structs:
        text = _struct_text(s)
        out += text + [""]
        structure.append(Entity("struct", s.name, text[0], arity=len(s.fields)))

    bases = ", ".join(f"public {b}" for b in m.base_classes)
    header = f"class {m.name}" + (f" : {bases}" if bases else "") + " {"
    out.append(header)
    structure.append(Entity("class", m.name, header, members=m.base_classes))

    sections: dict[str, list[str]] = {"private": [], "protected": [], "public": []}
    members: dict[str, list[Entity]] = {"private": [], "protected": [], "public": []}

    def add(access: str, kind: str, name: str, decl: str, arity: int = 0):
        sections[access].append(IND + decl)
        members[access].append(Entity(kind, name, decl, owner=m.name, access=access, arity=arity))

    for a in m.aliases:
        add(a.access, "alias", a.name, f"using {a.name} = {cpp_type(a.type)};")
    t = _Translator(m)
    for c in m.constants:
        add(c.access, "constant", c.name,
            f"static inline const {cpp_type(c.type)} {c.name} = {t.expr(c.value)};")
    for f in m.fields:
        init = f" = {t.expr(f.init)}" if f.init is not None else ""
        add(f.access, "field", f.name, f"{cpp_type(f.type)} {f.name}{init};")
    methods = ([m.inv_method] if m.inv_method else []) + list(m.type_invariants) + list(m.methods)
    for meth in methods:
        add(meth.access, "method", meth.name, _signature(meth) + ";", len(meth.params))

    for access in ("private", "protected", "public"):
        if sections[access]:
            out.append(f"{access}:")
            out += sections[access]
    out.append("};")
    # Manifest order mirrors the model's declaration order, not section order.
    order = {(k, n): i for i, (k, n, _, _) in enumerate(m.members())}
    flat = [e for a in ("private", "protected", "public") for e in members[a]]
    structure += sorted(flat, key=lambda e: order[(e.kind, e.name)])

    for meth in methods:
        out += ["", f"inline {_signature(meth, m.name)} {{"]
        out += _method_body(meth, m, m.name)
        out.append("}")
    out += ["", f"#endif  // {guard}", ""]
    return EmittedUnit(filename, "\n".join(out), tuple(structure))


def emit_driver(m: TargetClassModel, iut_class_name: str,
                iut_header: Optional[str] = None) -> EmittedUnit:
    """Emit the driver pairing the oracle with the implementation under test."""
    entries = [x for x in m.methods if x.access == "public" and not x.mutates_state]
    if not entries:
        raise EmitError(f"{m.name} has no public entry point to compare")
    signatures = [x.param_types for x in entries]
    clash = len(set(signatures)) != len(signatures)
    iut_header = iut_header or f"{iut_class_name}.h"
    guard = _guard(DRIVER_FILE)
    out = [f"#ifndef {guard}", f"#define {guard}", "",
           f'#include "{m.name}.gen.h"', f'#include "{iut_header}"', "",
           "class driver {", "public:"]
    structure = [Entity("class", "driver", "class driver {")]
    for name, cls in (("ot", m.name), ("t", iut_class_name)):
        decl = f"{cls} {name};"
        out.append(IND + decl)
        structure.append(Entity("field", name, decl, owner="driver", access="public", arity=0))
    for x in entries:
        name = f"comparator_{x.name}" if clash else "comparator"
        params = ", ".join(_param(n, t) for n, t in x.params)
        args = ", ".join(n for n, _ in x.params)
        decl = f"bool {name}({params})"
        out += ["", f"{IND}{decl} {{",
                f"{IND * 2}if (ot.{x.name}({args}) == t.{x.name}({args}))",
                f"{IND * 3}return true;",
                f"{IND * 2}return false;",
                f"{IND}}}"]
        structure.append(Entity("method", name, decl, owner="driver", access="public",
                                arity=len(x.params)))
    out += ["};", "", f"#endif  // {guard}", ""]
    return EmittedUnit(DRIVER_FILE, "\n".join(out), tuple(structure))


SUPPORT_TEXT = r"""#ifndef VDM_SUPPORT_GEN_H
#define VDM_SUPPORT_GEN_H

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

class error : public std::runtime_error {
public:
    error(const std::string& kind, const std::string& where)
        : std::runtime_error(kind + " violation in " + where), kind(kind) {}
    std::string kind;
};

namespace vdm {

struct empty_seq {
    template <class T> operator std::vector<T>() const { return {}; }
};
struct empty_set {
    template <class T> operator std::set<T>() const { return {}; }
};
struct empty_map {
    template <class K, class V> operator std::map<K, V>() const { return {}; }
};
template <class T> bool operator==(const std::vector<T>& s, empty_seq) { return s.empty(); }
template <class T> bool operator==(const std::set<T>& s, empty_set) { return s.empty(); }
template <class K, class V> bool operator==(const std::map<K, V>& m, empty_map) { return m.empty(); }

inline void fail(const char* what) { throw error("evaluation", what); }

template <class T> T deref(const std::optional<T>& x) {
    if (!x) fail("nil where a value is required");
    return *x;
}

template <class C> long long len(const C& s) { return static_cast<long long>(s.size()); }
template <class C> long long card(const C& s) { return static_cast<long long>(s.size()); }

template <class T> T hd(const std::vector<T>& s) {
    if (s.empty()) fail("hd of an empty sequence");
    return s.front();
}

template <class T> std::vector<T> tail(const std::vector<T>& s) {
    if (s.empty()) fail("tl of an empty sequence");
    return std::vector<T>(s.begin() + 1, s.end());
}

template <class T> std::set<T> elements(const std::vector<T>& s) {
    return std::set<T>(s.begin(), s.end());
}

template <class T> std::set<long long> indexes(const std::vector<T>& s) {
    std::set<long long> out;
    for (long long i = 1; i <= len(s); ++i) out.insert(i);
    return out;
}

template <class T> std::vector<T> concatenation(std::vector<T> a, const std::vector<T>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

template <class T> bool in_set(const T& x, const std::set<T>& s) { return s.count(x) > 0; }
template <class T> bool in_set(const T&, empty_set) { return false; }

template <class T> std::set<T> unite(std::set<T> a, const std::set<T>& b) {
    a.insert(b.begin(), b.end());
    return a;
}

template <class T> std::set<T> intersect(const std::set<T>& a, const std::set<T>& b) {
    std::set<T> out;
    for (const auto& x : a)
        if (b.count(x)) out.insert(x);
    return out;
}

template <class T> std::set<T> difference(const std::set<T>& a, const std::set<T>& b) {
    std::set<T> out;
    for (const auto& x : a)
        if (!b.count(x)) out.insert(x);
    return out;
}

template <class T> bool subset(const std::set<T>& a, const std::set<T>& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

template <class T> bool psubset(const std::set<T>& a, const std::set<T>& b) {
    return a.size() < b.size() && subset(a, b);
}

template <class K, class V> std::set<K> dom(const std::map<K, V>& m) {
    std::set<K> out;
    for (const auto& kv : m) out.insert(kv.first);
    return out;
}

template <class K, class V> std::set<V> rng(const std::map<K, V>& m) {
    std::set<V> out;
    for (const auto& kv : m) out.insert(kv.second);
    return out;
}

template <class K, class V> std::map<K, V> override_map(std::map<K, V> a, const std::map<K, V>& b) {
    for (const auto& kv : b) a[kv.first] = kv.second;
    return a;
}

template <class C, class P> bool all_of(const C& c, P p) {
    for (const auto& x : c)
        if (!p(x)) return false;
    return true;
}

template <class F, class... A> auto apply(const F& f, const A&... a) {
    if constexpr (std::is_invocable_v<const F&, const A&...>) {
        return f(a...);
    } else if constexpr (sizeof...(A) == 1 && std::is_same_v<F, std::vector<typename F::value_type>>) {
        long long i = static_cast<long long>((a, ...));
        if (i < 1 || i > len(f)) fail("sequence index out of range");
        return f[i - 1];
    } else {
        auto it = f.find(a...);
        if (it == f.end()) fail("map application outside domain");
        return it->second;
    }
}

inline long long div(long long a, long long b) {
    if (b == 0) fail("division by zero");
    return a / b;
}

inline long long mod(long long a, long long b) {
    if (b == 0) fail("division by zero");
    long long r = a % b;
    return (r != 0 && ((r < 0) != (b < 0))) ? r + b : r;
}

inline double divide(double a, double b) {
    if (b == 0) fail("division by zero");
    return a / b;
}

inline long long floor(double x) { return static_cast<long long>(std::floor(x)); }
template <class T> T abs(T x) { return x < 0 ? -x : x; }

template <class T> bool is_nat(const T& x) {
    if constexpr (std::is_arithmetic_v<T>) return x >= 0 && x == static_cast<long long>(x);
    else return false;
}

template <class T> bool is_nat1(const T& x) { return is_nat(x) && x >= 1; }

template <class... T> auto make_set(const T&... x) {
    using E = std::common_type_t<T...>;
    return std::set<E>{E(x)...};
}

template <class... T> auto make_seq(const T&... x) {
    using E = std::common_type_t<T...>;
    return std::vector<E>{E(x)...};
}

template <class K, class V, class... P> auto make_map(const std::pair<K, V>& first, const P&... rest) {
    std::map<K, V> out{first, rest...};
    if (out.size() != 1 + sizeof...(P)) fail("map enumeration repeats a key");
    return out;
}

template <class T> std::vector<std::string> make_token(const T& x) {
    std::ostringstream s;
    s << x;
    return {s.str()};
}

}  // namespace vdm

#endif  // VDM_SUPPORT_GEN_H
"""

_SUPPORT_FUNCS = (
    "len", "card", "hd", "tail", "elements", "indexes", "concatenation", "in_set", "unite",
    "intersect", "difference", "subset", "psubset", "dom", "rng", "override_map", "all_of",
    "apply", "deref", "div", "mod", "divide", "floor", "abs", "is_nat", "is_nat1", "make_set",
    "make_seq", "make_map", "make_token",
)


def emit_support() -> EmittedUnit:
    """The shared support unit: the error class and the collection helpers."""
    structure = [Entity("class", "error", "class error : public std::runtime_error {")]
    for tag in ("empty_seq", "empty_set", "empty_map"):
        structure.append(Entity("struct", tag, f"struct {tag} {{", owner="vdm"))
    for name in _SUPPORT_FUNCS:
        line = next(l for l in SUPPORT_TEXT.splitlines()
                    if f" {name}(" in l and not l.startswith(" "))
        structure.append(Entity("function", name, line.rstrip(" {"), owner="vdm"))
    return EmittedUnit(SUPPORT_FILE, SUPPORT_TEXT, tuple(structure))


def transpile(m: TargetClassModel, iut_class_name: Optional[str] = None) -> list[EmittedUnit]:
    """Oracle, driver and support units for one model.

    The driver is skipped when the class has no public entry point.
    """
    units = [emit_oracle_class(m)]
    if any(x.access == "public" and not x.mutates_state for x in m.methods):
        units.append(emit_driver(m, iut_class_name or m.source_name))
    units.append(emit_support())
    return units


def manifest_text(units: Sequence[EmittedUnit]) -> str:
    lines = []
    for u in units:
        for e in u.structure:
            lines.append(json.dumps({"unit": u.filename, **e.to_json()}, sort_keys=False))
    return "\n".join(lines) + "\n"


def write_units(units: Sequence[EmittedUnit], out_dir) -> list[Path]:
    """Write every unit plus ``manifest.jsonl``; returns the written paths."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = []
    for u in list(units):
        paths.append(_write(out / u.filename, u.text))
    paths.append(_write(out / MANIFEST_FILE, manifest_text(units)))
    return paths


def _write(path: Path, text: str) -> Path:
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text, encoding="utf-8")
    os.replace(tmp, path)
    return path


def balanced(text: str) -> bool:
    """Counter scan over (), [] and {} that skips string and char literals."""
    pairs = {")": "(", "]": "[", "}": "{"}
    stack = []
    quote = None
    escaped = False
    for ch in text:
        if quote:
            if escaped:
                escaped = False
            elif ch == "\\":
                escaped = True
            elif ch == quote:
                quote = None
            continue
        if ch in "\"'":
            quote = ch
        elif ch in "([{":
            stack.append(ch)
        elif ch in pairs:
            if not stack or stack.pop() != pairs[ch]:
                return False
    return not stack and quote is None
