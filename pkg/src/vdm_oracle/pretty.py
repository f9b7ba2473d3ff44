"""Concrete syntax for ClassDef values.

Output uses the ASCII spellings and explicit section keywords; parsing it
yields a ClassDef equal to the input. Parentheses are added only where
operator precedence or a right-open construct (``if``, ``let``, ``forall``)
would otherwise change the parse.
"""

from __future__ import annotations

from fractions import Fraction

from .lexer import _escape_text
from .syntax import (
    Apply, Basic, Binary, Cases, ClassDef, CompositeType, FieldSelect, FuncType,
    FunctionDef, IfThenElse, LetIn, Literal, MapEnum, MapType, Named,
    OperationDef, OptionalType, ProductType, Quantifier, QuoteType, QuoteUnion,
    RecordCtor, SeqEnum, SeqType, SetEnum, SetType, TypeJudgement, Unary, Var,
    walk,
)
from .values import Char, Quote, render

_BIN_PREC = {
    "=>": 1, "or": 2, "and": 3,
    "=": 5, "<>": 5, "<": 5, "<=": 5, ">": 5, ">=": 5, "in-set": 5,
    "not-in-set": 5, "subset": 5, "psubset": 5,
    "+": 6, "-": 6, "union": 6, "setdiff": 6, "concat": 6, "map-override": 6,
    "*": 7, "/": 7, "div": 7, "mod": 7, "inter": 7,
}
_BIN_TEXT = {"in-set": "in set", "not-in-set": "not in set", "setdiff": "\\",
             "concat": "^", "map-override": "++"}
_NOT_PREC = 4
_UNARY_PREC = 8
_POSTFIX_PREC = 9
_ATOM_PREC = 10


def _prec(e) -> int:
    if isinstance(e, Binary):
        return _BIN_PREC[e.op]
    if isinstance(e, Unary):
        return _NOT_PREC if e.op == "not" else _UNARY_PREC
    if isinstance(e, (IfThenElse, LetIn, Quantifier)):
        return 0
    if isinstance(e, FieldSelect):
        return _POSTFIX_PREC
    if isinstance(e, Literal) and _is_negative(e.value):
        return _UNARY_PREC
    return _ATOM_PREC


def _is_negative(v) -> bool:
    return (type(v) is int or isinstance(v, Fraction)) and v < 0


def quote_text(name: str) -> str:
    return f"<{name}>"


def literal_text(v) -> str:
    if isinstance(v, Quote):
        return quote_text(v.name)
    if isinstance(v, tuple) and all(isinstance(x, Char) for x in v):
        return '"' + _escape_text("".join(c.ch for c in v), '"') + '"'
    if isinstance(v, Char):
        return "'" + _escape_text(v.ch, "'") + "'"
    if isinstance(v, tuple):
        return "[" + ", ".join(literal_text(x) for x in v) + "]"
    if isinstance(v, frozenset):
        return "{" + ", ".join(sorted(literal_text(x) for x in v)) + "}"
    if isinstance(v, Fraction) and render(v).count("/"):
        return f"({v.numerator} / {v.denominator})"
    return render(v)


# -- types ---------------------------------------------------------------------

def _atomic_type(t) -> bool:
    return isinstance(t, (Basic, Named, QuoteType, OptionalType, CompositeType))


def type_text(t, nested: bool = False) -> str:
    """Render a type; ``nested`` parenthesizes anything non-atomic."""
    if nested and not _atomic_type(t):
        return "(" + type_text(t) + ")"
    if isinstance(t, Basic):
        return t.kind
    if isinstance(t, Named):
        return t.name
    if isinstance(t, QuoteType):
        return quote_text(t.name)
    if isinstance(t, QuoteUnion):
        return " | ".join(quote_text(n) for n in t.names)
    if isinstance(t, SetType):
        return "set of " + type_text(t.elem, True)
    if isinstance(t, SeqType):
        return "seq of " + type_text(t.elem, True)
    if isinstance(t, MapType):
        return f"map {type_text(t.key, True)} to {type_text(t.val, True)}"
    if isinstance(t, ProductType):
        return " * ".join(type_text(x, True) for x in t.items)
    if isinstance(t, CompositeType):
        fields = " ".join(f"{f.name} : {type_text(f.type)}" for f in t.fields)
        return f"compose {t.tag} of {fields} end" if fields else f"compose {t.tag} of end"
    if isinstance(t, OptionalType):
        return "[" + type_text(t.inner) + "]"
    if isinstance(t, FuncType):
        return f"{params_text(t.params)} -> {type_text(t.result)}"
    raise TypeError(f"not a type: {t!r}")


def params_text(params) -> str:
    if not params:
        return "()"
    return " * ".join(type_text(p, True) for p in params)


# -- expressions -------------------------------------------------------------------

def expr_text(e) -> str:
    if isinstance(e, Literal):
        return literal_text(e.value)
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Unary):
        if e.op == "not":
            return "not " + _wrap(e.operand, 5)
        if e.op == "neg":
            inner = _wrap(e.operand, _UNARY_PREC)
            if inner.startswith("-"):
                inner = "(" + inner + ")"
            return "-" + inner
        return f"{e.op} " + _wrap(e.operand, _UNARY_PREC)
    if isinstance(e, Binary):
        p = _BIN_PREC[e.op]
        text = _BIN_TEXT.get(e.op, e.op)
        if e.op == "=>":
            left, right = _wrap(e.left, p + 1), _wrap(e.right, p)
        elif p == 5:
            left, right = _wrap(e.left, p + 1), _wrap(e.right, p + 1)
        else:
            left, right = _wrap(e.left, p), _wrap(e.right, p + 1)
        return f"{left} {text} {right}"
    if isinstance(e, IfThenElse):
        return f"if {expr_text(e.cond)} then {expr_text(e.then)} else {expr_text(e.orelse)}"
    if isinstance(e, Cases):
        arms = [f"{literal_text(b.pattern)} -> {expr_text(b.body)}" for b in e.branches]
        if e.others is not None:
            arms.append(f"others -> {expr_text(e.others)}")
        return f"cases {expr_text(e.scrutinee)} : " + ", ".join(arms) + " end"
    if isinstance(e, LetIn):
        binds = ", ".join(f"{b.name} = {expr_text(b.value)}" for b in e.bindings)
        return f"let {binds} in {expr_text(e.body)}"
    if isinstance(e, Quantifier):
        dom = expr_text(e.domain)
        if any(isinstance(n, FieldSelect) for n in walk(e.domain)) or _prec(e.domain) == 0:
            dom = "(" + dom + ")"
        return f"{e.kind} {e.var} in set {dom} & {expr_text(e.predicate)}"
    if isinstance(e, SetEnum):
        return "{" + ", ".join(expr_text(x) for x in e.items) + "}"
    if isinstance(e, SeqEnum):
        return "[" + ", ".join(expr_text(x) for x in e.items) + "]"
    if isinstance(e, MapEnum):
        if not e.items:
            return "{|->}"
        return "{" + ", ".join(f"{expr_text(k)} |-> {expr_text(v)}" for k, v in e.items) + "}"
    if isinstance(e, Apply):
        return e.callee + "(" + ", ".join(expr_text(a) for a in e.args) + ")"
    if isinstance(e, RecordCtor):
        return f"mk_{e.tag}(" + ", ".join(expr_text(a) for a in e.args) + ")"
    if isinstance(e, FieldSelect):
        return _wrap(e.target, _POSTFIX_PREC) + "." + e.field
    if isinstance(e, TypeJudgement):
        name = e.type.kind if isinstance(e.type, Basic) else e.type.name
        return f"is_{name}({expr_text(e.operand)})"
    raise TypeError(f"not an expression: {e!r}")


def _wrap(e, min_prec: int) -> str:
    s = expr_text(e)
    return f"({s})" if _prec(e) < min_prec else s


# -- classes ---------------------------------------------------------------------

def _function_text(f: FunctionDef, ind: str) -> list[str]:
    lines = [f"{ind}{f.access} {f.name} : {params_text(f.param_types)} -> {type_text(f.result_type)}",
             f"{ind}{f.name}({', '.join(f.params)}) ==",
             f"{ind}  {expr_text(f.body)}"]
    if f.pre is not None:
        lines.append(f"{ind}pre {expr_text(f.pre)}")
    if f.post is not None:
        lines.append(f"{ind}post {expr_text(f.post)}")
    lines[-1] += ";"
    return lines


def _operation_text(o: OperationDef, ind: str) -> list[str]:
    result = type_text(o.result_type) if o.result_type is not None else "()"
    lines = [f"{ind}{o.access} {o.name} : {params_text(o.param_types)} ==> {result}",
             f"{ind}{o.name}({', '.join(o.params)}) ==",
             f"{ind}  {' '.join(o.body)}"]
    if o.pre is not None:
        lines.append(f"{ind}pre {expr_text(o.pre)}")
    if o.post is not None:
        lines.append(f"{ind}post {expr_text(o.post)}")
    lines[-1] += ";"
    return lines


def pretty_print(c: ClassDef) -> str:
    """Render ``c`` as source text that parses back to an equal ClassDef."""
    out = [f"class {c.name}" + (f" is subclass of {', '.join(c.superclasses)}" if c.superclasses else "")]
    ind = "  "
    if c.type_defs:
        out.append("types")
        for t in c.type_defs:
            if isinstance(t.body, CompositeType) and t.body.tag == t.name:
                fields = " ".join(f"{f.name} : {type_text(f.type)}" for f in t.body.fields)
                line = f"{ind}{t.access} {t.name} :: {fields}".rstrip()
            else:
                line = f"{ind}{t.access} {t.name} = {type_text(t.body)}"
            if t.invariant is not None:
                line += f"\n{ind}  inv {t.invariant.binder} == {expr_text(t.invariant.expr)}"
            out.append(line + ";")
    if c.value_defs:
        out.append("values")
        for v in c.value_defs:
            typed = f" : {type_text(v.type)}" if v.type is not None else ""
            out.append(f"{ind}{v.access} {v.name}{typed} = {expr_text(v.expr)};")
    if c.instance_vars:
        out.append("instance variables")
        for iv in c.instance_vars:
            init = f" := {expr_text(iv.init)}" if iv.init is not None else ""
            out.append(f"{ind}{iv.access} {iv.name} : {type_text(iv.declared_type)}{init};")
    if c.invariant is not None:
        out.append(f"inv {c.name}({c.invariant.binder}) ==")
        out.append(f"{ind}{expr_text(c.invariant.expr)}")
    if c.function_defs:
        out.append("functions")
        for f in c.function_defs:
            out.extend(_function_text(f, ind))
    if c.operations:
        out.append("operations")
        for o in c.operations:
            out.extend(_operation_text(o, ind))
    for raw in c.raw_sections:
        out.append(raw.keyword)
        if raw.tokens:
            out.append(ind + " ".join(raw.tokens))
    out.append(f"end {c.name}")
    return "\n".join(out)
