"""Command-line front end.

Exit codes:

====  ==========================================================
0     success (eval: a Result; run: every comparator true; diff: no regressions)
1     diagnostics: unreadable or invalid spec, suite, report or model
2     eval: the oracle reported a contract violation
3     eval: the oracle reported an evaluation error
4     run: at least one comparator verdict is false
5     diff: at least one regression
64    usage error
====  ==========================================================
"""

from __future__ import annotations

import argparse
import sys
from importlib import resources
from pathlib import Path
from typing import Optional, Sequence

from .engine import Context, ContractViolation, EvalError, Result, expected_result, render_outcome
from .inputs import DEFAULT_M, InputError, split_inputs
from .lexer import ParseError
from .optimizer import MappingError, map_class
from .parser import parse_class
from .scope import UnknownClass
from .transpiler import EmitError, transpile, write_units
from .harness import (
    DiffError, ReportError, SuiteError, UnknownMutant, diff_runs, load_report, load_suite,
    resolve_iut, run_suite,
)

EXIT_OK, EXIT_DIAG, EXIT_CONTRACT, EXIT_EVAL, EXIT_FAIL, EXIT_REGRESSION = 0, 1, 2, 3, 4, 5
EXIT_USAGE = 64
BUNDLED_SPECS = {"triangle": "triangle.vdmpp"}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _max_nat(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 3:
        raise argparse.ArgumentTypeError("M must be at least 3")
    return value


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="vdm-oracle", description="Specification-based test oracle toolkit.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def spec_arg(sp):
        sp.add_argument("spec", help="specification file (.vdmpp), or 'triangle' for the bundled one")

    def m_arg(sp):
        sp.add_argument("-M", "--max-nat", dest="M", type=_max_nat, default=DEFAULT_M,
                        help=f"value substituted for the symbol M (default {DEFAULT_M})")

    sp = sub.add_parser("parse", help="parse and check a specification")
    spec_arg(sp)

    sp = sub.add_parser("eval", help="compute the expected result for one input")
    spec_arg(sp)
    sp.add_argument("--entry", required=True, help="public function to call")
    sp.add_argument("--inputs", required=True, help="comma-separated tokens, e.g. 2,'A',M+1")
    m_arg(sp)

    sp = sub.add_parser("transpile", help="emit oracle, driver and support units")
    spec_arg(sp)
    sp.add_argument("--out", dest="out_dir", required=True, help="output directory")
    sp.add_argument("--iut-class", help="implementation class named in the driver")

    sp = sub.add_parser("run", help="run a suite through oracle and implementation")
    spec_arg(sp)
    sp.add_argument("--suite", required=True, help="suite file, or 'table8' for the bundled one")
    sp.add_argument("--entry", help="only run cases for this entry function")
    sp.add_argument("--iut", default="builtin:reference",
                    help="builtin:reference, builtin:mutant:<id> or exec:<path>")
    sp.add_argument("--report-dir", default="runs", help="where reports are written (default runs/)")
    sp.add_argument("--workers", type=int, default=1, help="concurrent adapter instances")
    sp.add_argument("--timeout", type=float, default=5.0, help="seconds per case for exec: adapters")
    m_arg(sp)

    sp = sub.add_parser("diff", help="compare two run reports")
    sp.add_argument("older")
    sp.add_argument("newer")
    return p


def _read_spec(spec: str) -> str:
    if spec in BUNDLED_SPECS and not Path(spec).exists():
        return resources.files("vdm_oracle.fixtures").joinpath(BUNDLED_SPECS[spec]).read_text("utf-8")
    return Path(spec).read_text(encoding="utf-8")


def _load(spec: str):
    text = _read_spec(spec)
    return parse_class(text), text


def _diagnose(exc: ParseError, spec: str) -> str:
    d = exc.diagnostics[0]
    more = f" (+{len(exc.diagnostics) - 1} more)" if len(exc.diagnostics) > 1 else ""
    return f"{spec}:{d.line}:{d.column}: {d.severity}: {d.message}{more}"


def cmd_parse(args) -> int:
    cls, _ = _load(args.spec)
    funcs = ", ".join(f"{f.access} {f.name}/{len(f.params)}" for f in cls.function_defs) or "none"
    print(f"class {cls.name}" + (f" is subclass of {', '.join(cls.superclasses)}" if cls.superclasses else ""))
    print(f"  types: {len(cls.type_defs)}  values: {len(cls.value_defs)}  "
          f"instance variables: {len(cls.instance_vars)}  operations: {len(cls.operations)}")
    print(f"  functions: {funcs}")
    print(f"  invariant: {'yes' if cls.invariant is not None else 'no'}")
    return EXIT_OK


def cmd_eval(args) -> int:
    cls, _ = _load(args.spec)
    try:
        tokens = split_inputs(args.inputs)
    except InputError as exc:
        raise UsageError(str(exc)) from exc
    outcome = expected_result(Context(cls), args.entry, tokens, args.M)
    print(render_outcome(outcome))
    if isinstance(outcome, Result):
        return EXIT_OK
    return EXIT_CONTRACT if isinstance(outcome, ContractViolation) else EXIT_EVAL


def cmd_transpile(args) -> int:
    cls, _ = _load(args.spec)
    units = transpile(map_class(cls), args.iut_class)
    for path in write_units(units, args.out_dir):
        print(path)
    return EXIT_OK


def cmd_run(args) -> int:
    cls, text = _load(args.spec)
    suite = load_suite(args.suite)
    if args.entry:
        suite = [c for c in suite if c.entry == args.entry]
        if not suite:
            raise SuiteError(f"no cases for entry {args.entry}")
    if args.workers < 1:
        raise UsageError("--workers must be at least 1")
    try:
        iut = resolve_iut(args.iut, args.timeout)
    except (UnknownMutant, ValueError) as exc:
        raise UsageError(str(exc)) from exc
    try:
        report = run_suite(cls, suite, iut, args.M, args.report_dir, args.workers, spec_text=text)
    finally:
        iut.close()
    counts = "  ".join(f"{k}: {v}" for k, v in report.summary.items())
    print(f"run {report.run_id}: {len(report.records)} cases  {counts}")
    failing = report.failing_ids()
    if failing:
        print("failing cases: " + ", ".join(map(str, failing)))
    print(f"report: {Path(args.report_dir) / (report.run_id + '.json')}")
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_diff(args) -> int:
    diff = diff_runs(load_report(args.older), load_report(args.newer))
    print("regressions: " + (", ".join(map(str, diff.regressions)) or "none"))
    print("fixes: " + (", ".join(map(str, diff.fixes)) or "none"))
    return EXIT_REGRESSION if diff.regressions else EXIT_OK


COMMANDS = {"parse": cmd_parse, "eval": cmd_eval, "transpile": cmd_transpile,
            "run": cmd_run, "diff": cmd_diff}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"vdm-oracle: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ParseError as exc:
        print(_diagnose(exc, args.spec), file=sys.stderr)
        return EXIT_DIAG
    except (OSError, SuiteError, ReportError, DiffError, MappingError, EmitError,
            UnknownClass, LookupError) as exc:
        print(f"vdm-oracle: error: {exc}", file=sys.stderr)
        return EXIT_DIAG
    except (ContractViolation, EvalError) as exc:
        print(f"vdm-oracle: error: {exc}", file=sys.stderr)
        return EXIT_DIAG


if __name__ == "__main__":
    sys.exit(main())
