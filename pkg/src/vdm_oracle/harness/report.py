"""Verdict records, run reports, persistence and regression diffs."""

from __future__ import annotations

import json
import os
import tempfile
from collections import Counter
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Optional, Sequence

FAILURE_KINDS = ("mismatch", "oracle-error", "iut-error", "iut-timeout")
SUMMARY_KEYS = ("pass",) + FAILURE_KINDS


class ReportError(Exception):
    pass


class DiffError(Exception):
    pass


@dataclass(frozen=True)
class VerdictRecord:
    case_id: int
    inputs: str
    oracle_outcome: str
    iut_outcome: str
    comparator: bool
    failure_kind: Optional[str] = None
    discrepancy: Optional[str] = None

    def __post_init__(self):
        if self.comparator != (self.failure_kind is None):
            raise ValueError("a record fails exactly when it carries a failure kind")
        if self.failure_kind is not None and self.failure_kind not in FAILURE_KINDS:
            raise ValueError(f"unknown failure kind {self.failure_kind!r}")


def summarize(records: Sequence[VerdictRecord]) -> dict[str, int]:
    counts = Counter(r.failure_kind or "pass" for r in records)
    return {k: counts.get(k, 0) for k in SUMMARY_KEYS}


@dataclass(frozen=True)
class RunReport:
    run_id: str
    spec_digest: str
    suite_digest: str
    M: int
    iut: str
    records: tuple[VerdictRecord, ...]
    summary: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(r.comparator for r in self.records)

    def failing_ids(self) -> list[int]:
        return [r.case_id for r in self.records if not r.comparator]

    def to_json(self) -> dict:
        return {
            "run_id": self.run_id,
            "spec_digest": self.spec_digest,
            "suite_digest": self.suite_digest,
            "M": self.M,
            "iut": self.iut,
            "summary": dict(self.summary),
            "records": [asdict(r) for r in self.records],
        }

    @classmethod
    def from_json(cls, data: dict) -> "RunReport":
        try:
            records = tuple(VerdictRecord(**r) for r in data["records"])
            return cls(data["run_id"], data["spec_digest"], data["suite_digest"], int(data["M"]),
                       data.get("iut", ""), records, dict(data["summary"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise ReportError(f"malformed report: {exc}") from exc


def resummarize(report: RunReport) -> dict[str, int]:
    return summarize(report.records)


def save_report(report: RunReport, report_dir) -> Path:
    """Write ``<report_dir>/<run_id>.json`` atomically."""
    out = Path(report_dir)
    out.mkdir(parents=True, exist_ok=True)
    target = out / f"{report.run_id}.json"
    fd, tmp = tempfile.mkstemp(prefix=".tmp-", suffix=".json", dir=out)
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            json.dump(report.to_json(), fh, indent=2)
            fh.write("\n")
        os.replace(tmp, target)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return target


def load_report(path) -> RunReport:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ReportError(f"cannot read report {path}: {exc}") from exc
    return RunReport.from_json(data)


@dataclass(frozen=True)
class RegressionDiff:
    regressions: tuple[int, ...]
    fixes: tuple[int, ...]

    @property
    def empty(self) -> bool:
        return not self.regressions and not self.fixes


def diff_runs(older: RunReport, newer: RunReport) -> RegressionDiff:
    """Case ids whose comparator verdict changed between two runs of one suite."""
    if older.suite_digest != newer.suite_digest:
        raise DiffError("reports were produced from different suites")
    before = {r.case_id: r.comparator for r in older.records}
    regressions, fixes = [], []
    for r in newer.records:
        was = before.get(r.case_id)
        if was is True and not r.comparator:
            regressions.append(r.case_id)
        elif was is False and r.comparator:
            fixes.append(r.case_id)
    return RegressionDiff(tuple(regressions), tuple(fixes))
