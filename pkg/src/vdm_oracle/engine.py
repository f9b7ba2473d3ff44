"""Expected-result generation: direct evaluation of specifications.

Expressions evaluate under VDM semantics with exact arithmetic. Function calls
check argument types, pre-conditions, result types and post-conditions, and
report failures as :class:`ContractViolation`. Membership tests (``is_T``) and
class invariants are total: any error raised while checking them counts as
"not a member".
"""

from __future__ import annotations

import math
import sys
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping, Optional, Sequence, Union

from . import scope
from .inputs import DEFAULT_M, InputToken, token_value
from .syntax import (
    RESULT, Apply, Basic, Binary, Cases, ClassDef, CompositeType, FieldSelect,
    FuncType, FunctionDef, IfThenElse, LetIn, Literal, MapEnum, MapType, Named,
    OptionalType, Pos, ProductType, Quantifier, QuoteType, QuoteUnion,
    RecordCtor, SeqEnum, SeqType, SetEnum, SetType, TypeExpr, TypeJudgement,
    Unary, Var, lookup_type,
)
from .values import (
    FALSE, TRUE, Bool, Char, Closure, Quote, Record, Token, Tup, VMap,
    is_number, kind_name, number, render, vbool,
)

DEFAULT_DEPTH_LIMIT = 10_000

# Python frames consumed per nested specification call, with headroom.
_FRAMES_PER_CALL = 40
_STACK_BYTES = 1 << 30


class EvalError(Exception):
    """Evaluation failed (empty ``hd``, division by zero, depth limit, ...)."""

    def __init__(self, message: str, location: Optional[Pos] = None):
        super().__init__(message)
        self.message = message
        self.location = location

    def __str__(self) -> str:
        where = f" at {self.location}" if self.location else ""
        return f"{self.message}{where}"

    def __eq__(self, other):
        return (type(other) is type(self) and other.message == self.message
                and other.location == self.location)

    __hash__ = Exception.__hash__


class ContractViolation(Exception):
    """An invariant, pre-condition, post-condition or type-membership check failed."""

    KINDS = ("invariant", "precondition", "postcondition", "type-membership")

    def __init__(self, kind: str, message: str, location: Optional[Pos] = None):
        assert kind in self.KINDS, kind
        super().__init__(message)
        self.kind = kind
        self.message = message
        self.location = location

    def __str__(self) -> str:
        where = f" at {self.location}" if self.location else ""
        return f"{self.kind} violation: {self.message}{where}"

    def __eq__(self, other):
        return (type(other) is type(self) and other.kind == self.kind
                and other.message == self.message and other.location == self.location)

    __hash__ = Exception.__hash__


@dataclass(frozen=True)
class Result:
    value: object


OracleOutcome = Union[Result, ContractViolation, EvalError]


def render_outcome(outcome: OracleOutcome) -> str:
    if isinstance(outcome, Result):
        return render(outcome.value)
    if isinstance(outcome, ContractViolation):
        return f"ContractViolation({outcome.kind}): {outcome.message}"
    return f"EvalError: {outcome}"


# -- context and environments ---------------------------------------------------


class Context:
    """A class with superclass members flattened, ready for evaluation."""

    def __init__(self, cls: ClassDef, library: Mapping[str, ClassDef] | None = None,
                 depth_limit: int = DEFAULT_DEPTH_LIMIT):
        self.source = cls
        self.cls = scope.flatten(cls, library)
        self.depth_limit = depth_limit
        self._values: dict[str, object] = {}
        self._value_defs = {v.name: v for v in self.cls.value_defs}
        self._functions: dict[str, list[FunctionDef]] = {}
        for f in self.cls.function_defs:
            self._functions.setdefault(f.name, []).append(f)
        self.state_type = scope.state_type(self.cls)
        self._evaluating: set[str] = set()

    @classmethod
    def of(cls, ctx: Union["Context", ClassDef]) -> "Context":
        return ctx if isinstance(ctx, Context) else cls(ctx)

    def functions(self, name: str) -> list[FunctionDef]:
        return self._functions.get(name, [])

    def has_value(self, name: str) -> bool:
        return name in self._value_defs

    def value(self, name: str):
        if name in self._values:
            return self._values[name]
        if name in self._evaluating:
            raise EvalError(f"value {name} is defined in terms of itself")
        vd = self._value_defs[name]
        self._evaluating.add(name)
        try:
            v = eval_expr(Env(self), vd.expr)
        finally:
            self._evaluating.discard(name)
        if vd.type is not None and not type_membership(v, vd.type, self):
            raise ContractViolation("type-membership", f"value {name} is not of its declared type", vd.pos)
        self._values[name] = v
        return v


@dataclass(frozen=True)
class Env:
    """Lexical environment: a chain of frames over a class context."""

    ctx: Context
    frame: Mapping[str, object] = field(default_factory=dict)
    parent: Optional["Env"] = None
    depth: int = 0

    def bind(self, **names) -> "Env":
        return Env(self.ctx, names, self, self.depth)

    def bind_map(self, names: Mapping[str, object], depth: int | None = None) -> "Env":
        return Env(self.ctx, dict(names), self, self.depth if depth is None else depth)

    def lookup(self, name: str):
        env = self
        while env is not None:
            if name in env.frame:
                return env.frame[name]
            env = env.parent
        raise KeyError(name)


# -- deep recursion support -------------------------------------------------------

_local = threading.local()
_stack_lock = threading.Lock()
# The recursion limit is process-wide: raise it while any deep evaluation
# runs and put it back when the last one finishes.
_limit_lock = threading.Lock()
_limit_state = {"active": 0, "saved": None}


def _raise_limit(needed: int):
    with _limit_lock:
        if _limit_state["active"] == 0:
            _limit_state["saved"] = sys.getrecursionlimit()
        _limit_state["active"] += 1
        if sys.getrecursionlimit() < needed:
            sys.setrecursionlimit(needed)


def _restore_limit():
    with _limit_lock:
        _limit_state["active"] -= 1
        if _limit_state["active"] == 0:
            sys.setrecursionlimit(_limit_state["saved"])


def _run_deep(fn: Callable, depth_limit: int):
    """Run ``fn`` on a thread whose stack can hold ``depth_limit`` nested calls."""
    if getattr(_local, "deep", False):
        return fn()
    box: dict = {}

    def target():
        _local.deep = True
        try:
            box["value"] = fn()
        except BaseException as exc:  # re-raised on the caller's thread
            box["error"] = exc

    _raise_limit(depth_limit * _FRAMES_PER_CALL + 2000)
    try:
        with _stack_lock:
            old = threading.stack_size(_STACK_BYTES)
            try:
                worker = threading.Thread(target=target, name="vdm-eval")
                worker.start()
            finally:
                threading.stack_size(old)
        worker.join()
    finally:
        _restore_limit()
    if "error" in box:
        raise box["error"]
    return box["value"]


# -- expression evaluation ----------------------------------------------------------


def _err(message: str, e) -> EvalError:
    return EvalError(message, getattr(e, "pos", None))


def _need(cond: bool, message: str, e):
    if not cond:
        raise _err(message, e)


def _as_bool(v, e) -> bool:
    if not isinstance(v, Bool):
        raise _err(f"expected a bool, got {kind_name(v)}", e)
    return v.value


def _as_number(v, e):
    if not is_number(v):
        raise _err(f"expected a number, got {kind_name(v)}", e)
    return v


def _as_int(v, e) -> int:
    if type(v) is not int:
        raise _err(f"expected an integer, got {kind_name(v)}", e)
    return v


def _as_seq(v, e) -> tuple:
    if not isinstance(v, tuple):
        raise _err(f"expected a sequence, got {kind_name(v)}", e)
    return v


def _as_set(v, e) -> frozenset:
    if not isinstance(v, frozenset):
        raise _err(f"expected a set, got {kind_name(v)}", e)
    return v


def _as_map(v, e) -> VMap:
    if not isinstance(v, VMap):
        raise _err(f"expected a map, got {kind_name(v)}", e)
    return v


def _unary(env: Env, e: Unary):
    v = eval_expr(env, e.operand)
    op = e.op
    if op == "not":
        return vbool(not _as_bool(v, e))
    if op == "neg":
        return -_as_number(v, e)
    if op == "abs":
        return abs(_as_number(v, e))
    if op == "floor":
        return math.floor(_as_number(v, e))
    if op == "len":
        return len(_as_seq(v, e))
    if op == "hd":
        s = _as_seq(v, e)
        _need(bool(s), "hd of an empty sequence", e)
        return s[0]
    if op == "tl":
        s = _as_seq(v, e)
        _need(bool(s), "tl of an empty sequence", e)
        return s[1:]
    if op == "elems":
        return frozenset(_as_seq(v, e))
    if op == "inds":
        return frozenset(range(1, len(_as_seq(v, e)) + 1))
    if op == "card":
        return len(_as_set(v, e))
    if op == "dom":
        return frozenset(_as_map(v, e).keys())
    if op == "rng":
        return frozenset(_as_map(v, e).values())
    raise _err(f"unknown unary operator {op}", e)


def _compare(op: str, a, b, e):
    a, b = _as_number(a, e), _as_number(b, e)
    if op == "<":
        return vbool(a < b)
    if op == "<=":
        return vbool(a <= b)
    if op == ">":
        return vbool(a > b)
    return vbool(a >= b)


def _binary(env: Env, e: Binary):
    op = e.op
    if op in ("and", "or", "=>"):
        left = _as_bool(eval_expr(env, e.left), e)
        if op == "and" and not left:
            return FALSE
        if op == "or" and left:
            return TRUE
        if op == "=>" and not left:
            return TRUE
        return vbool(_as_bool(eval_expr(env, e.right), e))
    a = eval_expr(env, e.left)
    b = eval_expr(env, e.right)
    if op == "=":
        return vbool(a == b)
    if op == "<>":
        return vbool(a != b)
    if op in ("<", "<=", ">", ">="):
        return _compare(op, a, b, e)
    if op in ("+", "-", "*"):
        a, b = _as_number(a, e), _as_number(b, e)
        return number(a + b if op == "+" else a - b if op == "-" else a * b)
    if op == "/":
        a, b = _as_number(a, e), _as_number(b, e)
        _need(b != 0, "division by zero", e)
        return number(Fraction(a) / b)
    if op in ("div", "mod"):
        a, b = _as_int(a, e), _as_int(b, e)
        _need(b != 0, "division by zero", e)
        if op == "div":
            q = abs(a) // abs(b)
            return q if (a >= 0) == (b > 0) else -q
        return a - b * math.floor(Fraction(a, b))
    if op in ("in-set", "not-in-set"):
        inside = b is not None and a in _as_set(b, e)
        return vbool(inside if op == "in-set" else not inside)
    if op == "union":
        return _as_set(a, e) | _as_set(b, e)
    if op == "inter":
        return _as_set(a, e) & _as_set(b, e)
    if op == "setdiff":
        return _as_set(a, e) - _as_set(b, e)
    if op == "subset":
        return vbool(_as_set(a, e) <= _as_set(b, e))
    if op == "psubset":
        return vbool(_as_set(a, e) < _as_set(b, e))
    if op == "concat":
        return _as_seq(a, e) + _as_seq(b, e)
    if op == "map-override":
        merged = dict(_as_map(a, e))
        merged.update(_as_map(b, e))
        return VMap(merged)
    raise _err(f"unknown binary operator {op}", e)


def _lookup_var(env: Env, e: Var):
    try:
        return env.lookup(e.name)
    except KeyError:
        pass
    ctx = env.ctx
    if ctx.has_value(e.name):
        return ctx.value(e.name)
    fns = ctx.functions(e.name)
    if len(fns) == 1:
        return Closure(fns[0], None)
    if fns:
        raise _err(f"overloaded function {e.name} used as a value", e)
    raise _err(f"unbound identifier {e.name}", e)


def _apply(env: Env, e: Apply):
    args = tuple(eval_expr(env, a) for a in e.args)
    try:
        target = env.lookup(e.callee)
    except KeyError:
        target = None
        if env.ctx.has_value(e.callee):
            target = env.ctx.value(e.callee)
    if target is None:
        fns = env.ctx.functions(e.callee)
        if not fns:
            raise _err(f"unknown function {e.callee}", e)
        fdef = resolve_overload(env.ctx, e.callee, args, e)
        return invoke(env.ctx, fdef, args, env.depth + 1, e)
    if isinstance(target, Closure):
        return invoke(env.ctx, target.func, args, env.depth + 1, e)
    _need(len(args) == 1, f"{e.callee} takes exactly one argument", e)
    (arg,) = args
    if isinstance(target, VMap):
        _need(arg in target, f"map application outside domain: {render(arg)}", e)
        return target[arg]
    if isinstance(target, tuple):
        i = _as_int(arg, e)
        _need(1 <= i <= len(target), f"sequence index {i} out of range", e)
        return target[i - 1]
    raise _err(f"{e.callee} is not applicable ({kind_name(target)})", e)


def _record(env: Env, e: RecordCtor):
    args = tuple(eval_expr(env, a) for a in e.args)
    if e.tag == "":
        _need(len(args) >= 2, "a tuple needs at least two components", e)
        return Tup(args)
    if e.tag == "token":
        _need(len(args) == 1, "mk_token takes one argument", e)
        return Token(render(args[0]))
    comp, named = _composite(env.ctx.cls, e.tag)
    _need(comp is not None, f"unknown record type {e.tag}", e)
    _need(len(args) == len(comp.fields), f"mk_{e.tag} expects {len(comp.fields)} fields", e)
    rec = Record(e.tag, tuple((f.name, a) for f, a in zip(comp.fields, args)))
    check = Named(named) if named else comp
    if not type_membership(rec, check, env.ctx):
        raise ContractViolation("invariant", f"mk_{e.tag} violates its type", e.pos)
    return rec


def _composite(cls: ClassDef, tag: str):
    td = lookup_type(cls, tag)
    if td is not None and isinstance(td.body, CompositeType) and td.body.tag == tag:
        return td.body, td.name
    for t in cls.type_defs:
        found = _find_composite(t.body, tag)
        if found is not None:
            return found, None
    return None, None


def _find_composite(t, tag):
    if isinstance(t, CompositeType):
        if t.tag == tag:
            return t
        for f in t.fields:
            found = _find_composite(f.type, tag)
            if found is not None:
                return found
    elif isinstance(t, (SetType, SeqType)):
        return _find_composite(t.elem, tag)
    elif isinstance(t, MapType):
        return _find_composite(t.key, tag) or _find_composite(t.val, tag)
    elif isinstance(t, ProductType):
        for x in t.items:
            found = _find_composite(x, tag)
            if found is not None:
                return found
    elif isinstance(t, OptionalType):
        return _find_composite(t.inner, tag)
    return None


def eval_expr(env: Env, e) -> object:
    """Evaluate ``e``; raises :class:`EvalError` or :class:`ContractViolation`."""
    if isinstance(e, Literal):
        return e.value
    if isinstance(e, Var):
        return _lookup_var(env, e)
    if isinstance(e, Binary):
        return _binary(env, e)
    if isinstance(e, Unary):
        return _unary(env, e)
    if isinstance(e, Apply):
        return _apply(env, e)
    if isinstance(e, IfThenElse):
        if _as_bool(eval_expr(env, e.cond), e):
            return eval_expr(env, e.then)
        return eval_expr(env, e.orelse)
    if isinstance(e, Cases):
        v = eval_expr(env, e.scrutinee)
        for branch in e.branches:
            if branch.pattern == v:
                return eval_expr(env, branch.body)
        if e.others is not None:
            return eval_expr(env, e.others)
        raise _err(f"no cases branch matches {render(v)}", e)
    if isinstance(e, LetIn):
        for b in e.bindings:
            env = env.bind_map({b.name: eval_expr(env, b.value)})
        return eval_expr(env, e.body)
    if isinstance(e, Quantifier):
        dom = eval_expr(env, e.domain)
        if not isinstance(dom, (frozenset, tuple)):
            raise _err(f"quantifier domain must be a set, got {kind_name(dom)}", e)
        want = e.kind == "forall"
        for x in dom:
            if _as_bool(eval_expr(env.bind_map({e.var: x}), e.predicate), e) != want:
                return vbool(not want)
        return vbool(want)
    if isinstance(e, SetEnum):
        return frozenset(eval_expr(env, x) for x in e.items)
    if isinstance(e, SeqEnum):
        return tuple(eval_expr(env, x) for x in e.items)
    if isinstance(e, MapEnum):
        out: dict = {}
        for ke, ve in e.items:
            k, v = eval_expr(env, ke), eval_expr(env, ve)
            if k in out and out[k] != v:
                raise _err(f"map enumeration gives two values for {render(k)}", e)
            out[k] = v
        return VMap(out)
    if isinstance(e, RecordCtor):
        return _record(env, e)
    if isinstance(e, FieldSelect):
        target = eval_expr(env, e.target)
        if not isinstance(target, Record):
            raise _err(f"field selection on {kind_name(target)}", e)
        try:
            return target.get(e.field)
        except KeyError:
            raise _err(f"record {target.tag} has no field {e.field}", e) from None
    if isinstance(e, TypeJudgement):
        return vbool(type_membership(eval_expr(env, e.operand), e.type, env.ctx))
    raise _err(f"cannot evaluate {type(e).__name__}", e)


# -- type membership -------------------------------------------------------------------


def type_membership(v, t: TypeExpr, ctx: Union[Context, ClassDef]) -> bool:
    """True iff ``v`` inhabits ``t``, including invariants of named types."""
    return _member(v, t, Context.of(ctx), ())


def _member(v, t, ctx: Context, named_stack: tuple) -> bool:
    if isinstance(t, Basic):
        k = t.kind
        if k == "bool":
            return isinstance(v, Bool)
        if k == "nat":
            return type(v) is int and v >= 0
        if k == "nat1":
            return type(v) is int and v >= 1
        if k == "int":
            return type(v) is int
        if k in ("rat", "real"):
            return is_number(v)
        if k == "char":
            return isinstance(v, Char)
        if k == "token":
            return isinstance(v, Token)
        return False
    if isinstance(t, QuoteType):
        return v == Quote(t.name)
    if isinstance(t, QuoteUnion):
        return isinstance(v, Quote) and v.name in t.names
    if isinstance(t, SetType):
        return isinstance(v, frozenset) and all(_member(x, t.elem, ctx, named_stack) for x in v)
    if isinstance(t, SeqType):
        return isinstance(v, tuple) and all(_member(x, t.elem, ctx, named_stack) for x in v)
    if isinstance(t, MapType):
        return isinstance(v, VMap) and all(
            _member(k, t.key, ctx, named_stack) and _member(x, t.val, ctx, named_stack)
            for k, x in v.items())
    if isinstance(t, ProductType):
        return (isinstance(v, Tup) and len(v.items) == len(t.items)
                and all(_member(x, it, ctx, named_stack) for x, it in zip(v.items, t.items)))
    if isinstance(t, CompositeType):
        return (isinstance(v, Record) and v.tag == t.tag and len(v.fields) == len(t.fields)
                and all(name == f.name and _member(x, f.type, ctx, named_stack)
                        for (name, x), f in zip(v.fields, t.fields)))
    if isinstance(t, OptionalType):
        return v is None or _member(v, t.inner, ctx, named_stack)
    if isinstance(t, FuncType):
        return isinstance(v, Closure) and len(v.func.params) == len(t.params)
    if isinstance(t, Named):
        return _member_named(v, t.name, ctx, named_stack)
    return False


def _member_named(v, name: str, ctx: Context, named_stack: tuple) -> bool:
    if (name, id(v)) in named_stack:
        return True
    stack = named_stack + ((name, id(v)),)
    cls = ctx.cls
    td = lookup_type(cls, name)
    if td is not None:
        if not _member(v, td.body, ctx, stack):
            return False
        if td.invariant is None:
            return True
        return _holds(ctx, td.invariant.binder, v, td.invariant.expr)
    body = scope.resolve_named(cls, name)
    if body is not None:
        return _member(v, body, ctx, stack)
    if scope.is_class_name(cls, name):
        return _class_member(ctx, v)
    return False


def _holds(ctx: Context, binder: str, v, expr) -> bool:
    """Evaluate a predicate with ``binder`` bound; any failure counts as false."""
    try:
        return eval_expr(Env(ctx).bind_map({binder: v}), expr) == TRUE
    except (EvalError, ContractViolation, RecursionError):
        return False


def _class_member(ctx: Context, v) -> bool:
    st = ctx.state_type
    if st is not None and not _member(v, st, ctx, ()):
        return False
    inv = ctx.cls.invariant
    if inv is None:
        return True
    return _holds(ctx, inv.binder, v, inv.expr)


def invariant_predicate(ctx: Union[Context, ClassDef]) -> Callable[[object], bool]:
    """The synthesized ``is_<Class>`` test: state-type membership plus invariant."""
    context = Context.of(ctx)
    if context.cls.invariant is None:
        raise ValueError(f"class {context.cls.name} has no invariant")

    def predicate(v) -> bool:
        return _run_deep(lambda: _class_member(context, v), context.depth_limit)

    return predicate


# -- function calls ---------------------------------------------------------------------


def resolve_overload(ctx: Context, name: str, args: Sequence, node=None) -> FunctionDef:
    """Arity first, then argument type membership from the leftmost argument on."""
    candidates = [f for f in ctx.functions(name) if len(f.params) == len(args)]
    if not candidates and any(o.name == name for o in ctx.cls.operations):
        raise _err(f"{name} is an operation; only functions can be evaluated", node)
    if not candidates:
        raise _err(f"no definition of {name} takes {len(args)} arguments", node)
    if len(candidates) == 1:
        return candidates[0]
    for i, arg in enumerate(args):
        narrowed = [f for f in candidates if _member(arg, f.param_types[i], ctx, ())]
        if len(narrowed) == 1:
            return narrowed[0]
        if not narrowed:
            raise ContractViolation(
                "type-membership",
                f"no overload of {name} accepts argument {i + 1} ({render(arg)})",
                getattr(node, "pos", None))
        candidates = narrowed
    raise _err(f"ambiguous call to overloaded {name}", node)


def invoke(ctx: Context, fdef: FunctionDef, args: Sequence, depth: int,
           node=None, check_args: bool = True):
    """Call ``fdef``; raises on contract violation or evaluation failure."""
    if depth > ctx.depth_limit:
        raise _err(f"recursion depth limit {ctx.depth_limit} exceeded in {fdef.name}", node)
    if check_args:
        for pname, ptype, arg in zip(fdef.params, fdef.param_types, args):
            if not _member(arg, ptype, ctx, ()):
                raise ContractViolation(
                    "type-membership",
                    f"argument {pname} of {fdef.name} is not of its declared type: {render(arg)}",
                    fdef.pos)
    env = Env(ctx, dict(zip(fdef.params, args)), None, depth)
    if fdef.pre is not None:
        if not _as_bool(eval_expr(env, fdef.pre), fdef.pre):
            raise ContractViolation("precondition", f"pre-condition of {fdef.name} failed", fdef.pre.pos)
    value = eval_expr(env, fdef.body)
    if not _member(value, fdef.result_type, ctx, ()):
        raise ContractViolation(
            "postcondition", f"result of {fdef.name} is not of its declared type: {render(value)}",
            fdef.pos)
    if fdef.post is not None:
        post_env = env.bind_map({RESULT: value})
        if not _as_bool(eval_expr(post_env, fdef.post), fdef.post):
            raise ContractViolation("postcondition", f"post-condition of {fdef.name} failed", fdef.post.pos)
    return value


def _outcome(thunk) -> OracleOutcome:
    try:
        return Result(thunk())
    except (ContractViolation, EvalError) as exc:
        return exc
    except RecursionError:
        return EvalError("evaluation exhausted the interpreter stack")


def call_function(ctx: Union[Context, ClassDef], name: str, args: Sequence,
                  check_args: bool = True) -> OracleOutcome:
    """Evaluate ``name(args)`` under full contract checking."""
    context = Context.of(ctx)
    args = tuple(args)

    def run():
        if check_args:
            fdef = resolve_overload(context, name, args)
        else:
            candidates = [f for f in context.functions(name) if len(f.params) == len(args)]
            if len(candidates) != 1:
                raise EvalError(f"cannot select an unchecked overload of {name}")
            fdef = candidates[0]
        return invoke(context, fdef, args, 1, check_args=check_args)

    return _run_deep(lambda: _outcome(run), context.depth_limit)


def is_guarded(fdef: FunctionDef) -> bool:
    """True when the body is ``if is_T(param) ... then ... else ...``.

    Such a function encodes its own rejection path for out-of-type inputs.
    """
    body = fdef.body
    if not isinstance(body, IfThenElse):
        return False
    cond = body.cond
    while isinstance(cond, Binary) and cond.op == "and":
        cond = cond.left
    return (isinstance(cond, TypeJudgement) and isinstance(cond.operand, Var)
            and cond.operand.name in fdef.params)


def rejection_value(ctx: Union[Context, ClassDef], entry: str):
    """The literal a guarded entry returns for rejected input, if it has one."""
    for f in Context.of(ctx).functions(entry):
        if is_guarded(f) and isinstance(f.body.orelse, Literal):
            return f.body.orelse.value
    return None


def _seq_param(ctx: Context, t: TypeExpr) -> bool:
    seen = set()
    while isinstance(t, Named) and t.name not in seen:
        seen.add(t.name)
        body = scope.resolve_named(ctx.cls, t.name)
        if body is None:
            return False
        t = body
    return isinstance(t, SeqType)


def shape_arguments(ctx: Context, entry: str, values: list) -> tuple:
    """Map decoded input values onto the entry's parameters.

    A single sequence-typed parameter receives the whole input list as one
    sequence; otherwise inputs bind positionally.
    """
    for f in ctx.functions(entry):
        if len(f.params) == 1 and _seq_param(ctx, f.param_types[0]):
            return (tuple(values),)
    return tuple(values)


def expected_result(ctx: Union[Context, ClassDef], entry: str,
                    raw_inputs: Sequence[InputToken], M: int = DEFAULT_M) -> OracleOutcome:
    """Expected result for one test case, as the oracle defines it."""
    context = Context.of(ctx)
    fdefs = [f for f in context.functions(entry) if f.access == "public"]
    if not fdefs:
        raise LookupError(f"{entry} is not a public function of {context.cls.name}")
    values = [token_value(t, M) for t in raw_inputs]
    args = shape_arguments(context, entry, values)
    outcome = call_function(context, entry, args)
    if (isinstance(outcome, ContractViolation) and outcome.kind == "type-membership"
            and any(is_guarded(f) and len(f.params) == len(args) for f in fdefs)):
        outcome = call_function(context, entry, args, check_args=False)
    return outcome
