from fractions import Fraction

import pytest

from vdm_oracle import (
    Context, ContractViolation, EvalError, Result, call_function, eval_expr, expected_result,
    invariant_predicate, parse_class, type_membership,
)
from vdm_oracle.engine import Env, render_outcome
from vdm_oracle.inputs import CharTok, IntTok, SymbolTok
from vdm_oracle.parser import parse_expr, parse_type_expr
from vdm_oracle.values import FALSE, TRUE, Char, Quote, Record, Tup, VMap
from conftest import corpus_class

M = 2**31 - 1


def ev(text, ctx=None):
    ctx = ctx or Context(parse_class("class E end E"))
    return eval_expr(Env(ctx), parse_expr(text))


@pytest.mark.parametrize("text, value", [
    ("card elems [2, 2, 1]", 2),
    ("forall i in set elems [1, 2, 5] & 2 * i < 8", FALSE),
    ("exists i in set {1, 2} & i > 1", TRUE),
    ("len [1, 2, 3]", 3),
    ("hd [7, 8]", 7),
    ("tl [7, 8]", (8,)),
    ("inds [5, 5]", frozenset({1, 2})),
    ("[1] ^ [2]", (1, 2)),
    ("{1, 2} union {3}", frozenset({1, 2, 3})),
    ("{1, 2} inter {2, 3}", frozenset({2})),
    ("{1, 2} \\ {2}", frozenset({1})),
    ("{1} subset {1, 2}", TRUE),
    ("{1, 2} psubset {1, 2}", FALSE),
    ("2 in set {1, 2}", TRUE),
    ("2 not in set {1, 2}", FALSE),
    ("dom {1 |-> 2, 3 |-> 4}", frozenset({1, 3})),
    ("rng {1 |-> 2, 3 |-> 2}", frozenset({2})),
    ("{1 |-> 2} ++ {1 |-> 3}", VMap({1: 3})),
    ("7 div 2", 3), ("-7 div 2", -3), ("-7 mod 3", 2), ("7 mod -3", -2),
    ("1 / 3 + 1 / 6", Fraction(1, 2)),
    ("4 / 2", 2),
    ("floor (7 / 2)", 3), ("abs -4", 4),
    ("let x = 2, y = x + 1 in x * y", 6),
    ("if 1 < 2 then <A> else <B>", Quote("A")),
    ("cases 2 : 1 -> 10, 2 -> 20 end", 20),
    ("cases 9 : 1 -> 10, others -> 0 end", 0),
    ("false and (1 / 0 = 1)", FALSE),
    ("true or hd [] = 1", TRUE),
    ("false => hd [] = 1", TRUE),
    ("mk_(1, 'a') = mk_(1, 'a')", TRUE),
])
def test_expressions(text, value):
    assert ev(text) == value


def test_unbounded_arithmetic():
    assert ev(f"{M} + {M} + {M}") == 3 * M
    assert ev("2 * 4611686018427387904") == 2**63


@pytest.mark.parametrize("text, fragment", [
    ("hd []", "hd of an empty sequence"),
    ("tl []", "tl of an empty sequence"),
    ("1 div 0", "division by zero"),
    ("1 / 0", "division by zero"),
    ("cases 3 : 1 -> 1 end", "no cases branch"),
    ("1 + true", "expected a number"),
    ("undefined_name", "unbound"),
])
def test_eval_errors(text, fragment):
    with pytest.raises(EvalError, match=fragment):
        ev(text)


def test_map_application_outside_domain():
    ctx = Context(parse_class("class E values m : map nat to nat = {1 |-> 2}; end E"))
    assert ev("m(1)", ctx) == 2
    with pytest.raises(EvalError, match="outside domain"):
        ev("m(3)", ctx)


def test_cross_variant_equality_is_false():
    assert ev("1 = 'a'") == FALSE
    assert ev("true = 1") == FALSE
    assert ev("{} = []") == FALSE
    assert ev("<A> <> \"A\"") == TRUE


def test_sum_examples(tctx):
    assert call_function(tctx, "sum", [()]) == Result(0)
    assert call_function(tctx, "sum", [(3, 1, 2)]) == Result(6)


def test_recursion_depth_limit():
    cls = parse_class("class A functions f : nat -> nat f(n) == if n = 0 then 0 else 1 + f(n - 1); end A")
    ctx = Context(cls)
    assert call_function(ctx, "f", [9000]) == Result(9000)
    out = call_function(ctx, "f", [20000])
    assert isinstance(out, EvalError) and "depth limit" in out.message


def test_long_sum(tctx):
    assert call_function(tctx, "sum", [tuple(range(2000))]) == Result(sum(range(2000)))


def test_custom_depth_limit(triangle):
    ctx = Context(triangle, depth_limit=10)
    assert call_function(ctx, "sum", [tuple(range(9))]) == Result(36)
    assert isinstance(call_function(ctx, "sum", [tuple(range(11))]), EvalError)


@pytest.mark.parametrize("value, text, expected", [
    (-6, "nat", False), (0, "nat", True), (0, "nat1", False), (1, "nat1", True),
    (-1, "int", True), (Char("A"), "nat", False), ((1, 1, 1), "N*", True),
    ((1, -1), "N*", False), ((), "seq of nat", True), (Fraction(1, 2), "real", True),
    (Fraction(1, 2), "int", False), (TRUE, "bool", True), (1, "bool", False),
    (Quote("RED"), "<RED> | <GREEN>", True), (Quote("BLUE"), "<RED> | <GREEN>", False),
    (None, "[nat]", True), (3, "[nat]", True), (frozenset({1}), "set of nat", True),
    (VMap({1: Tup((1, 2))}), "map nat to (nat * nat)", True),
    (VMap({1: Tup((1, -2))}), "map nat to (nat * nat)", False),
    (Tup((1, Char("a"))), "nat * char", True), (Tup((1, 2, 3)), "nat * nat", False),
])
def test_type_membership(value, text, expected, triangle):
    assert type_membership(value, parse_type_expr(text), triangle) is expected


def test_named_membership_checks_type_invariant():
    cls, _ = corpus_class("records.vdmpp")
    ctx = Context(cls)
    box = lambda lo, hi: Record("Box", (("lo", Record("Point", (("x", lo), ("y", 0)))),
                                        ("hi", Record("Point", (("x", hi), ("y", 0))))))
    assert type_membership(box(1, 5), parse_type_expr("Box"), ctx)
    assert not type_membership(box(5, 1), parse_type_expr("Box"), ctx)
    assert call_function(ctx, "valid", [box(1, 5)]) == Result(TRUE)


@pytest.mark.parametrize("sides, expected", [
    ((3, 1, 2), False), ((2, 2, 3, 2), False), ((1, 1, 1), True), ((M, M, M), True),
    ((Char("A"), 2, 3), False), ((), False), (7, False),
])
def test_invariant_predicate(triangle, sides, expected):
    assert invariant_predicate(triangle)(sides) is expected


def test_invariant_predicate_needs_invariant():
    with pytest.raises(ValueError):
        invariant_predicate(parse_class("class A end A"))


@pytest.mark.parametrize("args, expected", [
    ([(2, 3, 4)], Quote("SCALENE")),
    ([(0, 0, 0)], Quote("INVALID")),
    ([(M, M, M)], Quote("EQUILATERAL")),
])
def test_classify(tctx, args, expected):
    assert call_function(tctx, "classify", args) == Result(expected)


def test_variety_isosceles(tctx):
    assert call_function(tctx, "variety", [(2, 1, 2)]) == Result(Quote("ISOSCELES"))


def test_argument_type_violation(tctx):
    out = call_function(tctx, "classify", [(1, -2, 3)])
    assert isinstance(out, ContractViolation) and out.kind == "type-membership"


def test_result_type_violation():
    cls = parse_class("class A functions f : int -> nat f(x) == x; end A")
    out = call_function(cls, "f", [-1])
    assert isinstance(out, ContractViolation) and out.kind == "postcondition"


def test_pre_and_post():
    cls, _ = corpus_class("contracts.vdmpp")
    assert call_function(cls, "remainder", [-7, 3]) == Result(2)
    pre = call_function(cls, "remainder", [1, 0])
    assert isinstance(pre, ContractViolation) and pre.kind == "precondition"
    post = call_function(cls, "bad", [11])
    assert isinstance(post, ContractViolation) and post.kind == "postcondition"


def test_overload_resolution():
    cls, lib = corpus_class("shapes.vdmpp", "Square")
    ctx = Context(cls, lib)
    assert call_function(ctx, "area", [3]) == Result(9)
    assert call_function(ctx, "area", [3, 2]) == Result(6)
    assert call_function(ctx, "area", [TRUE]) == Result(1)
    assert call_function(ctx, "total", [3]) == Result(16)
    out = call_function(ctx, "area", [Char("x")])
    assert isinstance(out, ContractViolation) and out.kind == "type-membership"


def test_ambiguous_overload_is_eval_error():
    cls = parse_class("class A functions f : nat -> nat f(x) == 1; f : int -> nat f(x) == 2; end A")
    assert isinstance(call_function(cls, "f", [3]), EvalError)
    assert call_function(cls, "f", [-3]) == Result(2)


def test_higher_order_functions():
    cls, _ = corpus_class("functions.vdmpp")
    assert call_function(cls, "run", [3]) == Result(5)
    assert call_function(cls, "fact", [5]) == Result(120)


def test_expected_result_guarded_entry(tctx):
    out = expected_result(tctx, "classify", [CharTok("A")] * 3)
    assert out == Result(Quote("INVALID"))
    assert expected_result(tctx, "classify", []) == Result(Quote("INVALID"))
    row23 = [SymbolTok("M+1"), SymbolTok("M-1"), SymbolTok("M")]
    assert expected_result(tctx, "classify", row23, M) == Result(Quote("SCALENE"))


def test_expected_result_depends_on_m(tctx):
    toks = [SymbolTok("M"), SymbolTok("M"), IntTok(1)]
    assert expected_result(tctx, "classify", toks, 3) == Result(Quote("ISOSCELES"))
    assert expected_result(tctx, "classify", toks, M) == Result(Quote("ISOSCELES"))


def test_expected_result_unguarded_entry_reports_violation():
    cls, _ = corpus_class("sequences.vdmpp")
    out = expected_result(cls, "reverse", [CharTok("a")])
    assert isinstance(out, ContractViolation) and out.kind == "type-membership"


def test_expected_result_requires_public_entry(tctx):
    with pytest.raises(LookupError):
        expected_result(tctx, "sum", [IntTok(1)])


def test_render_outcome():
    assert render_outcome(Result(Quote("SCALENE"))) == "SCALENE"
    assert render_outcome(ContractViolation("precondition", "nope")).startswith("ContractViolation(precondition)")
    assert render_outcome(EvalError("boom")).startswith("EvalError")


def test_values_are_cached_and_checked():
    cls = parse_class("class A values v : nat = -1; functions f : () -> int f() == v; end A")
    out = call_function(cls, "f", [])
    assert isinstance(out, ContractViolation) and out.kind == "type-membership"


def test_record_construction_checks_invariant():
    cls, _ = corpus_class("records.vdmpp")
    assert call_function(cls, "origin", []) == Result(Record("Point", (("x", 0), ("y", 0))))
    bad = parse_class(
        "class A types P :: n : nat inv p == p.n > 5; functions f : () -> nat f() == mk_P(1).n; end A")
    out = call_function(bad, "f", [])
    assert isinstance(out, ContractViolation) and out.kind == "invariant"


def test_recursion_limit_restored(tctx):
    import sys
    before = sys.getrecursionlimit()
    call_function(tctx, "sum", [tuple(range(50))])
    assert sys.getrecursionlimit() == before


def test_operations_are_not_evaluable():
    cls, _ = corpus_class("bank.vdmpp")
    out = call_function(cls, "get", [])
    assert isinstance(out, EvalError) and "operation" in out.message
