"""Specification-based test oracles for a VDM++ subset.

The pipeline: parse a class (:mod:`.parser`), evaluate it to get expected
results (:mod:`.engine`), map it to a target model (:mod:`.optimizer`), emit
C++ oracle skeletons (:mod:`.transpiler`), and compare implementations against
the oracle (:mod:`.harness`).
"""

from .engine import (
    Context, ContractViolation, Env, EvalError, Result, call_function, eval_expr,
    expected_result, invariant_predicate, render_outcome, type_membership,
)
from .inputs import DEFAULT_M, CharTok, InputError, IntTok, SymbolTok, decode_token, split_inputs
from .lexer import Diagnostic, ParseError, Token, detokenize, tokenize
from .optimizer import MappingError, TargetClassModel, map_class, map_type
from .parser import parse_class, parse_document, parse_expr, parse_type_expr
from .pretty import pretty_print
from .syntax import ClassDef, ast_equal
from .transpiler import (
    EmitError, EmittedUnit, emit_driver, emit_oracle_class, emit_support, predicate_translate,
    transpile, write_units,
)

__version__ = "0.1.0"


def bundled_spec_text(name: str = "triangle") -> str:
    from importlib import resources
    return resources.files("vdm_oracle.fixtures").joinpath(f"{name}.vdmpp").read_text("utf-8")


__all__ = [
    "CharTok", "ClassDef", "Context", "ContractViolation", "DEFAULT_M", "Diagnostic",
    "EmitError", "EmittedUnit", "Env", "EvalError", "InputError", "IntTok", "MappingError",
    "ParseError", "Result", "SymbolTok", "TargetClassModel", "Token", "ast_equal",
    "bundled_spec_text", "call_function", "decode_token", "detokenize", "emit_driver",
    "emit_oracle_class", "emit_support", "eval_expr", "expected_result",
    "invariant_predicate", "map_class", "map_type", "parse_class", "parse_document",
    "parse_expr", "parse_type_expr", "predicate_translate", "pretty_print",
    "render_outcome", "split_inputs", "tokenize", "transpile", "type_membership",
    "write_units",
]
