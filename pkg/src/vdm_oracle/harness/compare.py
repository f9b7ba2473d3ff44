"""The comparator: does an implementation's verdict match the oracle's?"""

from __future__ import annotations

import re
from typing import Optional

from ..engine import Context, ContractViolation, Env, EvalError, OracleOutcome, Result, eval_expr
from ..lexer import ParseError
from ..parser import parse_expr
from ..syntax import ClassDef
from ..values import FALSE, TRUE, Quote

_QUOTE = re.compile(r"<([A-Z][A-Z0-9_]*)>|([A-Z][A-Z0-9_]*)")
_EMPTY = Context(ClassDef("Verdict"))


def decode_verdict(text: str):
    """Parse a rendered verdict back into a value; None if it is not one.

    Accepts bare upper-case quote names, decimal numbers, booleans and any
    literal expression (sets, sequences, tuples, strings).
    """
    s = text.strip()
    if not s:
        return None
    m = _QUOTE.fullmatch(s)
    if m:
        return Quote(m.group(1) or m.group(2))
    if s == "true":
        return TRUE
    if s == "false":
        return FALSE
    try:
        return int(s)
    except ValueError:
        pass
    try:
        return eval_expr(Env(_EMPTY), parse_expr(s))
    except (ParseError, EvalError, ContractViolation, RecursionError):
        return None


def comparator(expected: OracleOutcome, actual: str, rejection=None) -> bool:
    """True iff ``actual`` renders the value the oracle expects.

    When the oracle rejects the input (a contract violation or evaluation
    error), the only matching answer is the designated ``rejection`` value.
    """
    value = decode_verdict(actual)
    if value is None:
        return False
    if isinstance(expected, Result):
        return value == expected.value
    return rejection is not None and value == rejection


def failure_kind(expected: OracleOutcome, matched: bool, rejection=None) -> Optional[str]:
    if matched:
        return None
    if not isinstance(expected, Result) and rejection is None:
        return "oracle-error"
    return "mismatch"
