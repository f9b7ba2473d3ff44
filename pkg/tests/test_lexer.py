import pytest
from hypothesis import given, strategies as st

from vdm_oracle.lexer import LexError, ParseError, detokenize, tokenize
from conftest import corpus_files


def kinds(text):
    return [(t.kind, t.text) for t in tokenize(text)]


def test_len_sides():
    assert kinds("len sides = 3") == [
        ("keyword", "len"), ("identifier", "sides"), ("symbol", "="), ("number", "3")]


def test_empty_input():
    assert tokenize("") == []
    assert tokenize("  -- only a comment\n") == []


def test_quote_literals_are_upper_case_words():
    toks = tokenize("INVALID | EQUILATERAL")
    assert [(t.kind, t.text) for t in toks] == [
        ("quote-literal", "INVALID"), ("symbol", "|"), ("quote-literal", "EQUILATERAL")]
    assert tokenize("<red>")[0].kind == "quote-literal"


def test_result_is_an_identifier():
    assert tokenize("RESULT")[0].kind == "identifier"
    assert tokenize("<RESULT>")[0].kind == "quote-literal"


@pytest.mark.parametrize("uni, ascii_", [
    ("→", "->"), ("∧", "and"), ("∀", "forall"), ("∈", "in set"), ("*", "*"),
])
def test_unicode_and_ascii_tokenize_alike(uni, ascii_):
    assert kinds(f"a {uni} b") == kinds(f"a {ascii_} b")


def test_keywords_are_case_insensitive():
    assert kinds("Class End Inv") == kinds("class end inv")


def test_positions_are_one_based():
    toks = tokenize("class A\n  end A")
    assert (toks[0].line, toks[0].column) == (1, 1)
    assert (toks[2].line, toks[2].column) == (2, 3)


def test_bad_character_reports_position():
    with pytest.raises(LexError) as info:
        tokenize("a = 1\nb = ` 2")
    d = info.value.diagnostics[0]
    assert (d.severity, d.line, d.column) == ("error", 2, 5)
    assert isinstance(info.value, ParseError)


def test_unterminated_string():
    with pytest.raises(LexError):
        tokenize('"abc')


@pytest.mark.parametrize("path", corpus_files(), ids=lambda p: p.name)
def test_detokenize_round_trip_on_corpus(path):
    toks = tokenize(path.read_text(encoding="utf-8"))
    assert [(t.kind, t.text) for t in tokenize(detokenize(toks))] == [(t.kind, t.text) for t in toks]


def test_detokenize_round_trip_on_triangle(triangle_text):
    toks = tokenize(triangle_text)
    assert [(t.kind, t.text) for t in tokenize(detokenize(toks))] == [(t.kind, t.text) for t in toks]


_atoms = st.sampled_from([
    "x", "sides", "3", "0", "'a'", '"hi"', "<RED>", "SCALENE", "len", "hd", "and", "->",
    "(", ")", "[", "]", "{", "}", "|->", "<=", "<>", "=>", "\\", "^", "++", "in set",
    "not in set", "mk_", "is_", ".", ",", "&", "1.5",
])


@given(st.lists(_atoms, max_size=30))
def test_detokenize_round_trip_property(atoms):
    toks = tokenize(" ".join(atoms))
    assert [(t.kind, t.text) for t in tokenize(detokenize(toks))] == [(t.kind, t.text) for t in toks]
