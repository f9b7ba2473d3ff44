import json
import sys
import textwrap

import pytest

from vdm_oracle.engine import ContractViolation, EvalError, Result
from vdm_oracle.harness import (
    MUTANTS, CallableAdapter, DiffError, IUTError, IUTTimeout, ReportError, RunReport,
    SubprocessAdapter, SuiteError, UnknownMutant, VerdictRecord, comparator, decode_verdict,
    diff_runs, encode_request, golden_agreement, load_report, load_suite, parse_suite,
    reference_iut, resolve_iut, resummarize, run_suite, suite_digest, summarize,
)
from vdm_oracle.inputs import CharTok, IntTok, SymbolTok
from vdm_oracle.values import FALSE, TRUE, Quote
from conftest import FIXTURES

FROZEN = json.loads((FIXTURES / "mutant_failures.json").read_text())


def ref():
    return CallableAdapter(reference_iut, "builtin:reference")


# -- suites ----------------------------------------------------------------------


def test_bundled_suite(table8):
    assert len(table8) == 36
    assert [c.id for c in table8] == list(range(1, 37))
    assert {c.entry for c in table8} == {"classify"}
    assert table8[16].inputs == (CharTok("A"), IntTok(2), IntTok(3))
    assert table8[22].inputs == (SymbolTok("M+1"), SymbolTok("M-1"), SymbolTok("M"))
    assert {c.id for c in table8 if c.discrepancy} == {20, 23}


@pytest.mark.parametrize("data, fragment", [
    ({"id": 1}, "JSON array"),
    ([1], "not an object"),
    ([{"id": 1, "entry": "f"}], "lacks inputs"),
    ([{"id": 0, "entry": "f", "inputs": []}], "invalid id"),
    ([{"id": True, "entry": "f", "inputs": []}], "invalid id"),
    ([{"id": 2, "entry": "f", "inputs": []}, {"id": 2, "entry": "f", "inputs": []}], "strictly increase"),
    ([{"id": 1, "entry": "", "inputs": []}], "no entry"),
    ([{"id": 1, "entry": "f", "inputs": 3}], "must be an array"),
    ([{"id": 1, "entry": "f", "inputs": [True]}], "booleans"),
    ([{"id": 1, "entry": "f", "inputs": ["AB"]}], "cannot decode"),
])
def test_suite_validation(data, fragment):
    with pytest.raises(SuiteError, match=fragment):
        parse_suite(data)


def test_suite_file_errors(tmp_path):
    with pytest.raises(SuiteError, match="cannot read"):
        load_suite(tmp_path / "missing.json")
    bad = tmp_path / "bad.json"
    bad.write_text("[{")
    with pytest.raises(SuiteError, match="not valid JSON"):
        load_suite(bad)


def test_suite_round_trip(tmp_path, table8):
    path = tmp_path / "copy.json"
    path.write_text(json.dumps([c.to_json() for c in table8]))
    again = load_suite(path)
    assert again == table8
    assert suite_digest(again) == suite_digest(table8)


def test_digest_ignores_labels(table8):
    relabelled = parse_suite([{**c.to_json(), "expected_label": "x"} for c in table8])
    assert suite_digest(relabelled) == suite_digest(table8)
    shifted = parse_suite([{**c.to_json(), "inputs": [9]} if c.id == 1 else c.to_json() for c in table8])
    assert suite_digest(shifted) != suite_digest(table8)


def test_char_m_is_distinct_from_symbol():
    (case,) = parse_suite([{"id": 1, "entry": "f", "inputs": ["M", "'M'"]}])
    assert case.inputs == (SymbolTok("M"), CharTok("M"))
    assert case.to_json()["inputs"] == ["M", "'M'"]


# -- comparator --------------------------------------------------------------------


@pytest.mark.parametrize("text, value", [
    ("SCALENE", Quote("SCALENE")), ("<SCALENE>", Quote("SCALENE")), (" INVALID\n", Quote("INVALID")),
    ("true", TRUE), ("false", FALSE), ("-12", -12), ("{1, 2}", frozenset({1, 2})),
    ("[1, 2]", (1, 2)), ("", None), ("Scalene", None), ("what?", None),
])
def test_decode_verdict(text, value):
    assert decode_verdict(text) == value


def test_comparator_examples():
    assert comparator(Result(Quote("SCALENE")), "SCALENE")
    assert not comparator(Result(Quote("SCALENE")), "ISOSCELES")
    assert not comparator(Result(Quote("SCALENE")), "")
    assert comparator(Result(3), "3")
    violation = ContractViolation("precondition", "no")
    assert comparator(violation, "INVALID", rejection=Quote("INVALID"))
    assert not comparator(violation, "INVALID")
    assert not comparator(EvalError("boom"), "SCALENE", rejection=Quote("INVALID"))


def test_record_consistency():
    with pytest.raises(ValueError):
        VerdictRecord(1, "[]", "X", "X", True, "mismatch")
    with pytest.raises(ValueError):
        VerdictRecord(1, "[]", "X", "Y", False, None)
    with pytest.raises(ValueError):
        VerdictRecord(1, "[]", "X", "Y", False, "weird")


# -- runs ----------------------------------------------------------------------------


def test_reference_run(triangle, table8):
    report = run_suite(triangle, table8, ref())
    assert report.passed and report.summary["pass"] == 36
    by_id = {r.case_id: r for r in report.records}
    assert by_id[20].oracle_outcome == "EQUILATERAL" and by_id[20].discrepancy
    assert by_id[23].oracle_outcome == "SCALENE"
    assert by_id[17].oracle_outcome == "INVALID"


def test_golden_agreement(triangle, table8):
    agree = golden_agreement(run_suite(triangle, table8, ref()), table8)
    assert [k for k, ok in agree.items() if not ok] == [20]


@pytest.mark.parametrize("mid", sorted(MUTANTS))
def test_mutant_failures_match_frozen_rows(triangle, table8, mid):
    report = run_suite(triangle, table8, resolve_iut(f"builtin:mutant:{mid}"))
    assert report.failing_ids() == FROZEN["failing_rows"][mid]
    assert report.summary["mismatch"] == len(FROZEN["failing_rows"][mid])


def test_unknown_mutant():
    with pytest.raises(UnknownMutant):
        resolve_iut("builtin:mutant:M9")
    with pytest.raises(ValueError):
        resolve_iut("nonsense")


def test_empty_output_is_iut_error(triangle, table8):
    report = run_suite(triangle, table8[:3], CallableAdapter(lambda inputs, M: "  "))
    assert report.summary["iut-error"] == 3
    assert all(r.iut_outcome.startswith("error:") for r in report.records)


def test_raising_callable_is_iut_error(triangle, table8):
    def boom(inputs, M):
        raise RuntimeError("kaput")
    report = run_suite(triangle, table8[:1], CallableAdapter(boom))
    assert report.records[0].failure_kind == "iut-error" and "kaput" in report.records[0].iut_outcome


def test_unknown_entry_rejected(triangle):
    (case,) = parse_suite([{"id": 1, "entry": "sum", "inputs": [1]}])
    with pytest.raises(SuiteError, match="not a public function"):
        run_suite(triangle, [case], ref())
    with pytest.raises(SuiteError, match="empty"):
        run_suite(triangle, [], ref())


def test_small_m_changes_boundary_rows(triangle, table8):
    report = run_suite(triangle, table8, ref(), M=3)
    assert report.M == 3 and report.passed


def test_workers_keep_order(triangle, table8):
    one = run_suite(triangle, table8, resolve_iut("builtin:mutant:M2"))
    four = run_suite(triangle, table8, resolve_iut("builtin:mutant:M2"), workers=4)
    assert one.records == four.records and one.summary == four.summary


# -- persistence and diffs -------------------------------------------------------------


def test_report_reload_and_resummarize(tmp_path, triangle, table8):
    report = run_suite(triangle, table8, resolve_iut("builtin:mutant:M1"), report_dir=tmp_path)
    path = tmp_path / f"{report.run_id}.json"
    assert path.exists() and not list(tmp_path.glob(".tmp-*"))
    again = load_report(path)
    assert again == report
    assert resummarize(again) == report.summary == summarize(report.records)


def test_report_errors(tmp_path):
    with pytest.raises(ReportError):
        load_report(tmp_path / "none.json")
    bad = tmp_path / "bad.json"
    bad.write_text('{"run_id": "x"}')
    with pytest.raises(ReportError, match="malformed"):
        load_report(bad)


def test_run_ids_unique(triangle, table8):
    ids = {run_suite(triangle, table8[:1], ref()).run_id for _ in range(20)}
    assert len(ids) == 20


def test_diff_reference_against_mutant(triangle, table8):
    base = run_suite(triangle, table8, ref())
    for mid, rows in FROZEN["failing_rows"].items():
        d = diff_runs(base, run_suite(triangle, table8, resolve_iut(f"builtin:mutant:{mid}")))
        assert list(d.regressions) == rows and d.fixes == ()
        back = diff_runs(run_suite(triangle, table8, resolve_iut(f"builtin:mutant:{mid}")), base)
        assert list(back.fixes) == rows and back.regressions == ()
    assert diff_runs(base, base).empty


def test_diff_needs_same_suite(triangle, table8):
    a = run_suite(triangle, table8, ref())
    b = run_suite(triangle, table8[:5], ref())
    with pytest.raises(DiffError):
        diff_runs(a, b)


def test_report_json_shape(triangle, table8):
    data = run_suite(triangle, table8[:2], ref()).to_json()
    assert set(data) == {"run_id", "spec_digest", "suite_digest", "M", "iut", "summary", "records"}
    assert RunReport.from_json(json.loads(json.dumps(data))).to_json() == data


# -- subprocess implementations ------------------------------------------------------------

RESPONDER = textwrap.dedent("""
    import json, sys, time
    MODE = sys.argv[1]
    for n, line in enumerate(sys.stdin, 1):
        sides = json.loads(line)
        if MODE == "crash" and n == 2:
            sys.exit(3)
        if MODE == "hang" and sides == [1, 1, 1]:
            time.sleep(30)
        if MODE == "blank":
            print("", flush=True)
            continue
        ok = len(sides) == 3 and all(isinstance(s, int) and s >= 0 for s in sides)
        ok = ok and all(2 * s < sum(sides) for s in sides)
        names = {1: "EQUILATERAL", 2: "ISOSCELES", 3: "SCALENE"}
        print(names[len(set(sides))] if ok else "INVALID", flush=True)
""")


@pytest.fixture
def responder(tmp_path):
    path = tmp_path / "iut.py"
    path.write_text(RESPONDER)
    return lambda mode, timeout=5.0: SubprocessAdapter([sys.executable, str(path), mode], timeout)


def test_encode_request_resolves_symbols():
    toks = [SymbolTok("M"), SymbolTok("M+1"), CharTok("A"), CharTok("M"), IntTok(-2)]
    assert json.loads(encode_request(toks, 10)) == [10, 11, "A", "'M'", -2]


def test_subprocess_reference_run(triangle, table8, responder):
    adapter = responder("ok")
    try:
        report = run_suite(triangle, table8, adapter)
    finally:
        adapter.close()
    assert report.passed


def test_subprocess_crash_restarts(responder):
    adapter = responder("crash")
    try:
        assert adapter.query([IntTok(2), IntTok(3), IntTok(4)], 10) == "SCALENE"
        with pytest.raises(IUTError):
            adapter.query([IntTok(1), IntTok(1), IntTok(1)], 10)
        assert adapter.query([IntTok(1), IntTok(1), IntTok(1)], 10) == "EQUILATERAL"
    finally:
        adapter.close()


def test_subprocess_timeout_then_recovers(responder):
    adapter = responder("hang", timeout=0.5)
    try:
        with pytest.raises(IUTTimeout):
            adapter.query([IntTok(1), IntTok(1), IntTok(1)], 10)
        assert adapter.query([IntTok(2), IntTok(2), IntTok(1)], 10) == "ISOSCELES"
    finally:
        adapter.close()


def test_subprocess_timeout_recorded(triangle, table8, responder):
    adapter = responder("hang", timeout=0.5)
    try:
        report = run_suite(triangle, table8, adapter)
    finally:
        adapter.close()
    assert report.failing_ids() == [24]
    assert report.summary["iut-timeout"] == 1


def test_subprocess_blank_line_is_error(responder):
    adapter = responder("blank")
    try:
        with pytest.raises(IUTError, match="empty"):
            adapter.query([IntTok(1)], 10)
    finally:
        adapter.close()


def test_subprocess_missing_program():
    adapter = SubprocessAdapter(["/nonexistent/iut"])
    with pytest.raises(IUTError, match="cannot start"):
        adapter.query([IntTok(1)], 10)


def test_subprocess_workers(triangle, table8, responder):
    adapter = responder("ok")
    try:
        report = run_suite(triangle, table8, adapter, workers=3)
    finally:
        adapter.close()
    assert report.passed and [r.case_id for r in report.records] == list(range(1, 37))
