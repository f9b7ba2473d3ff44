"""Reference Triangle classifier and its fault-seeded mutants.

All of them take decoded input tokens and return the verdict string a real
implementation would print. Anything that is not a list of three natural
numbers forming a proper triangle is INVALID.
"""

from __future__ import annotations

from typing import Callable, Optional, Sequence

from ..inputs import DEFAULT_M, CharTok, InputToken, token_value


class UnknownMutant(ValueError):
    pass


MUTANTS = {
    "M1": "drop-perimeter-check",
    "M2": "swap-isosceles-scalene",
    "M3": "length-check-accepts-4",
    "M4": "strict-inequality-flipped",
}


def _classify(inputs: Sequence[InputToken], M: int, fault: Optional[str] = None) -> str:
    if any(isinstance(t, CharTok) for t in inputs):
        return "INVALID"
    sides = [token_value(t, M) for t in inputs]
    lengths = (3, 4) if fault == "M3" else (3,)
    if len(sides) not in lengths or any(s < 0 for s in sides):
        return "INVALID"
    perim = sum(sides)
    if fault != "M1":
        if fault == "M4":
            if any(2 * s > perim for s in sides):
                return "INVALID"
        elif any(2 * s >= perim for s in sides):
            return "INVALID"
    distinct = len(set(sides))
    if distinct == 1:
        return "EQUILATERAL"
    if distinct == 2:
        return "SCALENE" if fault == "M2" else "ISOSCELES"
    return "ISOSCELES" if fault == "M2" else "SCALENE"


def reference_iut(inputs: Sequence[InputToken], M: int = DEFAULT_M) -> str:
    """A hand-written correct classifier."""
    return _classify(inputs, M)


def mutant_iut(mutant_id: str, inputs: Sequence[InputToken], M: int = DEFAULT_M) -> str:
    if mutant_id not in MUTANTS:
        raise UnknownMutant(f"unknown mutant {mutant_id!r}; expected one of {', '.join(MUTANTS)}")
    return _classify(inputs, M, mutant_id)


def mutant(mutant_id: str) -> Callable[[Sequence[InputToken], int], str]:
    if mutant_id not in MUTANTS:
        raise UnknownMutant(f"unknown mutant {mutant_id!r}; expected one of {', '.join(MUTANTS)}")
    return lambda inputs, M=DEFAULT_M: mutant_iut(mutant_id, inputs, M)
