"""Comparator and test oracle manager, with the reference and mutant implementations."""

from .adapters import (
    CallableAdapter, IUTAdapter, IUTError, IUTTimeout, SubprocessAdapter, encode_request,
    resolve_iut,
)
from .compare import comparator, decode_verdict
from .iut import MUTANTS, UnknownMutant, mutant_iut, reference_iut
from .report import (
    DiffError, RegressionDiff, ReportError, RunReport, VerdictRecord, diff_runs, load_report,
    resummarize, save_report, summarize,
)
from .runner import golden_agreement, judge, run_suite
from .suite import SuiteError, TestCase, load_suite, parse_suite, suite_digest

__all__ = [
    "CallableAdapter", "DiffError", "IUTAdapter", "IUTError", "IUTTimeout", "MUTANTS",
    "RegressionDiff", "ReportError", "RunReport", "SubprocessAdapter", "SuiteError",
    "TestCase", "UnknownMutant", "VerdictRecord", "comparator", "decode_verdict",
    "diff_runs", "encode_request", "golden_agreement", "judge", "load_report",
    "load_suite", "mutant_iut", "parse_suite", "reference_iut", "resolve_iut",
    "resummarize", "run_suite", "save_report", "suite_digest", "summarize",
]
