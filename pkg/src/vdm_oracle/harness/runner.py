"""The test oracle manager: run a suite through oracle and implementation."""

from __future__ import annotations

import hashlib
import secrets
from concurrent.futures import ThreadPoolExecutor
from datetime import datetime, timezone
from typing import Mapping, Optional, Sequence, Union

from ..engine import Context, expected_result, rejection_value, render_outcome
from ..inputs import DEFAULT_M
from ..pretty import pretty_print
from ..syntax import ClassDef
from .adapters import IUTAdapter, IUTError, IUTTimeout
from .compare import comparator, failure_kind
from .report import RunReport, VerdictRecord, save_report, summarize
from .suite import SuiteError, TestCase, suite_digest


def new_run_id() -> str:
    stamp = datetime.now(timezone.utc).strftime("%Y%m%dT%H%M%S%fZ")
    return f"{stamp}-{secrets.token_hex(3)}"


def spec_digest(spec_text: str) -> str:
    return hashlib.sha256(spec_text.encode("utf-8")).hexdigest()


def judge(ctx: Context, case: TestCase, adapter: IUTAdapter, M: int) -> VerdictRecord:
    """Run one case through both sides and record the comparator verdict."""
    expected = expected_result(ctx, case.entry, case.inputs, M)
    rendered = render_outcome(expected)
    common = dict(case_id=case.id, inputs=case.inputs_text(), oracle_outcome=rendered,
                  discrepancy=case.discrepancy)
    try:
        actual = adapter.query(case.inputs, M)
    except IUTTimeout as exc:
        return VerdictRecord(iut_outcome=f"timeout: {exc}", comparator=False,
                             failure_kind="iut-timeout", **common)
    except IUTError as exc:
        return VerdictRecord(iut_outcome=f"error: {exc}", comparator=False,
                             failure_kind="iut-error", **common)
    rejection = rejection_value(ctx, case.entry)
    ok = comparator(expected, actual, rejection)
    return VerdictRecord(iut_outcome=actual, comparator=ok,
                         failure_kind=failure_kind(expected, ok, rejection), **common)


def _check_entries(ctx: Context, suite: Sequence[TestCase]):
    for entry in sorted({c.entry for c in suite}):
        if not any(f.access == "public" for f in ctx.functions(entry)):
            raise SuiteError(f"{entry} is not a public function of {ctx.cls.name}")


def run_suite(spec: Union[ClassDef, Context], suite: Sequence[TestCase], iut: IUTAdapter,
              M: int = DEFAULT_M, report_dir=None, workers: int = 1,
              spec_text: Optional[str] = None) -> RunReport:
    """Judge every case; persist the report when ``report_dir`` is given.

    With several workers, cases are dealt round-robin to independent adapter
    instances. Records come back ordered by case id either way.
    """
    if not suite:
        raise SuiteError("the suite is empty")
    ctx = Context.of(spec)
    _check_entries(ctx, suite)
    workers = max(1, min(workers, len(suite)))
    if workers == 1:
        records = [judge(ctx, c, iut, M) for c in suite]
    else:
        adapters = [iut] + [iut.fresh() for _ in range(workers - 1)]
        lanes = [list(suite[i::workers]) for i in range(workers)]

        def lane(i: int) -> list[VerdictRecord]:
            return [judge(ctx, c, adapters[i], M) for c in lanes[i]]

        try:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                chunks = list(pool.map(lane, range(workers)))
        finally:
            for a in adapters[1:]:
                if a is not iut:
                    a.close()
        records = sorted((r for chunk in chunks for r in chunk), key=lambda r: r.case_id)
    text = spec_text if spec_text is not None else pretty_print(ctx.source)
    report = RunReport(
        run_id=new_run_id(),
        spec_digest=spec_digest(text),
        suite_digest=suite_digest(suite),
        M=M,
        iut=getattr(iut, "name", type(iut).__name__),
        records=tuple(records),
        summary=summarize(records),
    )
    if report_dir is not None:
        save_report(report, report_dir)
    return report


def golden_agreement(report: RunReport, suite: Sequence[TestCase]) -> Mapping[int, bool]:
    """Per case: does the oracle's verdict match the stored label?

    Labels are compared case-insensitively; a label offering alternatives
    ("Scalene or Invalid") matches any of them.
    """
    labels = {c.id: c.expected_label for c in suite}
    out = {}
    for r in report.records:
        label = labels.get(r.case_id)
        if label is None:
            continue
        options = {x.strip().upper() for x in label.split(" or ")}
        out[r.case_id] = r.oracle_outcome.upper() in options
    return out
