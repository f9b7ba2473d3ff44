import pytest

from vdm_oracle import map_class, map_type, parse_class
from vdm_oracle.optimizer import (
    Bool, Char, Enumeration, Float, FunctionResult, Int, MapOf, MappingError, OptionalOf,
    SetOf, StringVector, Struct, VectorOf,
)
from vdm_oracle.lexer import ParseError
from vdm_oracle.parser import parse_type_expr
from conftest import corpus_class, corpus_files, load_corpus

EMPTY = parse_class("class A end A")


def tmap(text, ctx=EMPTY):
    return map_type(parse_type_expr(text), ctx)


# Basic data types, one row per line of the mapping table.
BASIC_ROWS = [
    (("bool",), Bool()),
    (("nat1", "nat", "int"), Int()),
    (("rat", "real"), Float()),
    (("char",), Char()),
    (("<RED>",), Enumeration("RED", ("RED",))),
    (("token",), StringVector()),
]


@pytest.mark.parametrize("sources, target", BASIC_ROWS)
def test_basic_table_row(sources, target):
    for s in sources:
        assert tmap(s) == target


def test_basic_table_has_six_rows():
    assert len(BASIC_ROWS) == 6


def test_quote_union_keeps_order(triangle):
    got = map_type(parse_type_expr("triangle_type"), triangle)
    assert got == Enumeration("triangle_type", ("INVALID", "EQUILATERAL", "ISOSCELES", "SCALENE"))


def test_seq_of_nat_is_vector_of_int():
    assert tmap("seq of nat") == VectorOf(Int())


def test_set_of_set_of_bool():
    assert tmap("set of set of bool") == SetOf(SetOf(Bool()))


def test_product_is_struct():
    got = tmap("nat * char")
    assert isinstance(got, Struct)
    assert [t for _, t in got.fields] == [Int(), Char()]


# Compound rules, each nested three levels deep.
NESTED = [
    ("set of set of set of nat", SetOf(SetOf(SetOf(Int())))),
    ("seq of seq of seq of char", VectorOf(VectorOf(VectorOf(Char())))),
    ("map nat to map char to map bool to real",
     MapOf(Int(), MapOf(Char(), MapOf(Bool(), Float())))),
    ("seq of set of map nat to bool", VectorOf(SetOf(MapOf(Int(), Bool())))),
    ("[seq of [nat]]", OptionalOf(VectorOf(OptionalOf(Int())))),
]


@pytest.mark.parametrize("text, target", NESTED)
def test_nested_compound(text, target):
    assert tmap(text) == target


def test_nested_product():
    got = tmap("(nat * (char * (bool * real)))")
    assert isinstance(got, Struct)
    assert got.fields[0][1] == Int()
    mid = got.fields[1][1]
    assert isinstance(mid, Struct) and mid.fields[0][1] == Char()
    inner = mid.fields[1][1]
    assert isinstance(inner, Struct) and [t for _, t in inner.fields] == [Bool(), Float()]


def test_nested_composite():
    cls = parse_class("""class C types
      A :: b : B; B :: c : Cc; Cc :: n : nat;
    end C""")
    got = map_type(parse_type_expr("A"), cls)
    assert got == Struct("A", (("b", Struct("B", (("c", Struct("Cc", (("n", Int()),))),))),))


def test_nested_function_type():
    got = tmap("(nat -> seq of set of bool) * nat")
    fn = got.fields[0][1]
    assert fn == FunctionResult(VectorOf(SetOf(Bool())), (Int(),))


def test_general_union_never_reaches_mapping():
    with pytest.raises(ParseError, match="general union"):
        tmap("nat | char")


def test_recursive_type_is_refused():
    cls = parse_class("class C types Node :: next : [Node]; end C")
    with pytest.raises(MappingError, match="recursive"):
        map_type(parse_type_expr("Node"), cls)


def test_unresolved_name_is_refused():
    with pytest.raises(MappingError, match="unresolved"):
        tmap("Nowhere")


def test_triangle_model(triangle):
    m = map_class(triangle)
    assert m.name == "Oracle_Triangle"
    assert m.enums == (Enumeration("triangle_type", ("INVALID", "EQUILATERAL", "ISOSCELES", "SCALENE")),)
    access = {name: acc for kind, name, acc, _ in m.members() if kind == "method"}
    assert access == {"inv": "private", "sum": "private", "variety": "private", "classify": "public"}
    assert m.inv_method.result == Bool()
    assert m.inv_method.param_types == (VectorOf(Int()),)
    assert m.method("classify").result == Enumeration("triangle_type", m.enums[0].members)


def test_empty_class():
    m = map_class(EMPTY)
    assert m.name == "Oracle_A"
    assert m.members() == [] and m.enums == () and m.inv_method is None


def test_instance_variable_initializer():
    cls = parse_class("class Counter instance variables count : nat := 0; end Counter")
    m = map_class(cls)
    (f,) = m.fields
    assert (f.name, f.type, f.access) == ("count", Int(), "private")
    assert f.init is not None and f.init.value == 0


def test_values_become_constants():
    cls = parse_class("class A values public k : nat = 3; end A")
    (c,) = map_class(cls).constants
    assert (c.name, c.type, c.access) == ("k", Int(), "public")


def test_untyped_value_is_refused():
    with pytest.raises(MappingError, match="declared type"):
        map_class(parse_class("class A values k = 3; end A"))


def test_thread_section_is_refused():
    cls, _ = corpus_class("threads.vdmpp")
    with pytest.raises(MappingError) as info:
        map_class(cls)
    assert info.value.location is not None


def test_function_returning_function_is_refused():
    cls = parse_class("class A functions g : nat -> nat g(n) == n; "
                      "f : nat -> (nat -> nat) f(n) == g; end A")
    with pytest.raises(MappingError, match="returns a function"):
        map_class(cls)


def test_overloads_and_inheritance():
    cls, lib = corpus_class("shapes.vdmpp", "Square")
    m = map_class(cls, lib)
    assert m.base_classes == ("Oracle_Shape",)
    areas = [x for x in m.methods if x.name == "area"]
    assert len(areas) >= 2
    assert len({x.param_types for x in areas}) == len(areas)


def test_operations_mutate_state():
    cls, _ = corpus_class("bank.vdmpp")
    m = map_class(cls)
    ops = [x for x in m.methods if x.mutates_state]
    assert ops and all(x.body is None for x in ops)


def test_type_invariant_becomes_method():
    cls, _ = corpus_class("records.vdmpp")
    m = map_class(cls)
    assert any(x.name.startswith("inv_") and x.result == Bool() for x in m.type_invariants)


def test_state_record_named_apart_from_class():
    cls = parse_class("class P instance variables x : nat := 0; y : bool := true; inv P(p) == p.x < 5 end P")
    m = map_class(cls)
    assert m.inv_method.param_types == (Struct("P_state", (("x", Int()), ("y", Bool()))),)


@pytest.mark.parametrize("path", corpus_files(), ids=lambda p: p.name)
def test_corpus_preserves_names_and_access(path):
    classes, lib = load_corpus(path)
    for c in classes:
        try:
            m = map_class(c, lib)
        except MappingError as err:
            assert err.location is not None
            continue
        assert m.name == "Oracle_" + c.name
        source = {(f.name, f.access) for f in c.function_defs} | {(o.name, o.access) for o in c.operations}
        target = {(x.name, x.access) for x in m.methods}
        assert source == target
        assert len(m.methods) == len(c.function_defs) + len(c.operations)
        assert {(v.name, v.access) for v in c.value_defs} == {(k.name, k.access) for k in m.constants}
        assert (m.inv_method is not None) == (c.invariant is not None)
