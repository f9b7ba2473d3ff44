import json
import shutil
import subprocess

import pytest

from vdm_oracle import expected_result, map_class, parse_class
from vdm_oracle.inputs import CharTok, token_value
from vdm_oracle.optimizer import MappingError
from vdm_oracle.transpiler import (
    MANIFEST_FILE, EmitError, balanced, emit_driver, emit_oracle_class, emit_support,
    manifest_text, predicate_translate, transpile, write_units,
)
from vdm_oracle.parser import parse_expr
from conftest import corpus_files, load_corpus

TRIANGLE_MEMBERS = ["INVALID", "EQUILATERAL", "ISOSCELES", "SCALENE"]


@pytest.fixture(scope="module")
def tmodel(triangle):
    return map_class(triangle)


def entities(unit, kind=None, owner=None):
    return [e for e in unit.structure
            if (kind is None or e.kind == kind) and (owner is None or e.owner == owner)]


def test_triangle_structure(tmodel):
    unit = emit_oracle_class(tmodel)
    (enum,) = entities(unit, "enum")
    assert (enum.name, list(enum.members)) == ("triangle_type", TRIANGLE_MEMBERS)
    methods = {(e.name, e.access) for e in entities(unit, "method", "Oracle_Triangle")}
    assert methods == {("sum", "private"), ("variety", "private"), ("inv", "private"), ("classify", "public")}
    assert [e.name for e in entities(unit, "class")] == ["Oracle_Triangle"]


def test_manifest_matches_model(tmodel):
    unit = emit_oracle_class(tmodel)
    got = [(e.kind, e.name, e.access, e.arity) for e in unit.structure if e.owner == tmodel.name]
    assert got == tmodel.members()


@pytest.mark.parametrize("path", corpus_files(), ids=lambda p: p.name)
def test_corpus_manifest_fidelity(path):
    classes, lib = load_corpus(path)
    for c in classes:
        try:
            m = map_class(c, lib)
            unit = emit_oracle_class(m)
        except (MappingError, EmitError) as err:
            assert err.location is not None or str(err)
            continue
        got = [(e.kind, e.name, e.access, e.arity) for e in unit.structure if e.owner == m.name]
        assert got == m.members()
        for e in unit.structure:
            assert e.decl in unit.text
        assert balanced(unit.text)


def test_every_decl_appears_verbatim(tmodel):
    for unit in transpile(tmodel, "Triangle"):
        for e in unit.structure:
            assert e.decl in unit.text, e


def test_balance(tmodel):
    for unit in transpile(tmodel, "Triangle"):
        assert balanced(unit.text), unit.filename


@pytest.mark.parametrize("text, ok", [
    ("{ ( [ ] ) }", True), ("{ ( }", False), ("}", False), ("'{'", True),
    ('"}" {}', True), ("(", False), ('"\\"" ()', True),
])
def test_balance_scanner(text, ok):
    assert balanced(text) is ok


def test_reemission_is_byte_identical(tmodel, triangle):
    a = transpile(tmodel, "Triangle")
    b = transpile(map_class(triangle), "Triangle")
    assert [u.text for u in a] == [u.text for u in b]
    assert manifest_text(a) == manifest_text(b)


def test_inv_body_combines_length_and_perimeter(tmodel):
    text = emit_oracle_class(tmodel).text
    body = text[text.index("Oracle_Triangle::inv("):]
    body = body[:body.index("\n}\n")]
    assert "vdm::len(sides) == 3LL" in body
    assert "(2LL * i) < perim" in body
    assert "return false" in body and "return true" in body


def test_cases_become_switch(tmodel):
    text = emit_oracle_class(tmodel).text
    assert "switch (vdm::card(vdm::elements(sides)))" in text
    assert "case 1LL:\n            return EQUILATERAL;" in text


def test_predicate_translate_literals(tmodel):
    assert predicate_translate(parse_expr("true"), tmodel) == "true"
    assert predicate_translate(parse_expr("1 + 2"), tmodel) == "(1LL + 2LL)"


def test_forall_becomes_loop(tmodel):
    code = predicate_translate(parse_expr("forall i in set elems s & 2 * i < 9"), tmodel,
                               bound=("s",), as_body=True)
    assert "for (const auto& i : vdm::elements(s))" in code
    assert code.index("return false") < code.index("return true")


def test_empty_model():
    m = map_class(parse_class("class A end A"))
    unit = emit_oracle_class(m)
    assert "class Oracle_A {" in unit.text
    assert not entities(unit, "enum")
    assert [e.name for e in unit.structure] == ["Oracle_A"]
    with pytest.raises(EmitError):
        emit_driver(m, "A")
    assert [u.filename for u in transpile(m)] == ["Oracle_A.gen.h", "vdm_support.gen.h"]


def test_driver_triangle(tmodel):
    unit = emit_driver(tmodel, "Triangle")
    methods = [(e.name, e.access, e.arity) for e in entities(unit, "method", "driver")]
    assert methods == [("comparator", "public", 1)]
    assert "if (ot.classify(sides) == t.classify(sides))" in unit.text
    assert {e.name for e in entities(unit, "field", "driver")} == {"ot", "t"}


def test_driver_two_entries():
    cls = parse_class("""class Calc functions
      public twice : nat -> nat twice(n) == 2 * n;
      public add : nat * nat -> nat add(a, b) == a + b;
    end Calc""")
    unit = emit_driver(map_class(cls), "Calc")
    methods = [(e.name, e.arity) for e in entities(unit, "method", "driver")]
    assert methods == [("comparator", 1), ("comparator", 2)]


def test_driver_same_signature_entries_get_distinct_names():
    cls = parse_class("""class Calc functions
      public inc : nat -> nat inc(n) == n + 1;
      public dec : nat -> int dec(n) == n - 1;
    end Calc""")
    unit = emit_driver(map_class(cls), "Calc")
    assert [e.name for e in entities(unit, "method", "driver")] == ["comparator_inc", "comparator_dec"]


def test_support_declares_error_class():
    unit = emit_support()
    assert [e.name for e in entities(unit, "class")] == ["error"]
    assert balanced(unit.text)


def test_untyped_tuple_is_emit_error():
    cls = parse_class("class A functions public f : nat -> bool f(n) == mk_(n, n) = mk_(n, n); end A")
    with pytest.raises(EmitError, match="tuple"):
        emit_oracle_class(map_class(cls))


def test_write_units(tmp_path, tmodel):
    units = transpile(tmodel, "Triangle")
    paths = write_units(units, tmp_path)
    assert sorted(p.name for p in paths) == sorted([u.filename for u in units] + [MANIFEST_FILE])
    lines = [json.loads(x) for x in (tmp_path / MANIFEST_FILE).read_text().splitlines()]
    assert len(lines) == sum(len(u.structure) for u in units)
    for u in units:
        assert (tmp_path / u.filename).read_text() == u.text
    assert not list(tmp_path.glob("*.tmp"))


IUT_HEADER = """#pragma once
#include <vector>
class Triangle {
public:
    triangle_type classify(const std::vector<long long>& s) {
        if (s.size() != 3) return INVALID;
        for (long long x : s) if (x < 0) return INVALID;
        long long p = s[0] + s[1] + s[2];
        for (long long x : s) if (2 * x >= p) return INVALID;
        if (s[0] == s[1] && s[1] == s[2]) return EQUILATERAL;
        if (s[0] == s[1] || s[1] == s[2] || s[0] == s[2]) return ISOSCELES;
        return SCALENE;
    }
};
"""


@pytest.mark.skipif(shutil.which("g++") is None, reason="g++ not installed")
def test_emitted_triangle_agrees_with_engine(tmp_path, tmodel, tctx, table8):
    write_units(transpile(tmodel, "Triangle"), tmp_path)
    (tmp_path / "Triangle.h").write_text(IUT_HEADER)
    rows = [c for c in table8 if not any(isinstance(t, CharTok) for t in c.inputs)]
    assert len(rows) == 34
    calls = []
    for c in rows:
        vals = ", ".join(f"{token_value(t)}LL" for t in c.inputs)
        calls.append(f"    std::cout << d.ot.classify({{{vals}}}) << ' ' << d.comparator({{{vals}}}) << '\\n';")
    main = "\n".join(['#include <iostream>', '#include "driver.gen.h"', "int main() {",
                      "    driver d;", *calls, "    return 0;", "}"])
    (tmp_path / "main.cpp").write_text(main)
    exe = tmp_path / "tri"
    subprocess.run(["g++", "-std=c++20", "-Wall", "-Werror", "-o", str(exe), "main.cpp"],
                   cwd=tmp_path, check=True, capture_output=True, timeout=120)
    out = subprocess.run([str(exe)], capture_output=True, text=True, check=True, timeout=30).stdout.split("\n")
    for c, line in zip(rows, out):
        verdict, agree = line.split()
        want = expected_result(tctx, "classify", list(c.inputs)).value.name
        assert TRIANGLE_MEMBERS[int(verdict)] == want, c.id
        assert agree == "1", c.id
