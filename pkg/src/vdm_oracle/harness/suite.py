"""Test suites: loading, validation and content digests."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Optional, Sequence

from ..inputs import InputError, InputToken, decode_token

BUNDLED = {"table8": "table8.json"}


class SuiteError(Exception):
    pass


@dataclass(frozen=True)
class TestCase:
    id: int
    entry: str
    inputs: tuple[InputToken, ...]
    expected_label: Optional[str] = None
    # Why the stored label is not what the oracle produces, when known.
    discrepancy: Optional[str] = None

    __test__ = False  # not a pytest class

    def inputs_text(self) -> str:
        return "[" + ",".join(t.text() for t in self.inputs) + "]"

    def to_json(self) -> dict:
        out = {"id": self.id, "entry": self.entry, "inputs": [t.encode() for t in self.inputs]}
        if self.expected_label is not None:
            out["expected_label"] = self.expected_label
        if self.discrepancy is not None:
            out["discrepancy"] = self.discrepancy
        return out


def _read(source) -> tuple[str, str]:
    name = str(source)
    if name in BUNDLED and not Path(name).exists():
        text = resources.files("vdm_oracle.fixtures").joinpath(BUNDLED[name]).read_text("utf-8")
        return text, name
    try:
        return Path(source).read_text(encoding="utf-8"), name
    except (OSError, UnicodeDecodeError) as exc:
        raise SuiteError(f"cannot read suite {name}: {exc}") from exc


def parse_suite(data) -> list[TestCase]:
    """Validate decoded JSON and build test cases."""
    if not isinstance(data, list):
        raise SuiteError("a suite must be a JSON array of cases")
    cases: list[TestCase] = []
    last = 0
    for i, raw in enumerate(data, 1):
        if not isinstance(raw, dict):
            raise SuiteError(f"case #{i} is not an object")
        missing = {"id", "entry", "inputs"} - raw.keys()
        if missing:
            raise SuiteError(f"case #{i} lacks {', '.join(sorted(missing))}")
        cid = raw["id"]
        if not isinstance(cid, int) or isinstance(cid, bool) or cid < 1:
            raise SuiteError(f"case #{i} has invalid id {cid!r}")
        if cid <= last:
            raise SuiteError(f"case ids must strictly increase (saw {cid} after {last})")
        last = cid
        if not isinstance(raw["entry"], str) or not raw["entry"]:
            raise SuiteError(f"case {cid} has no entry function name")
        if not isinstance(raw["inputs"], list):
            raise SuiteError(f"case {cid} inputs must be an array")
        try:
            inputs = tuple(decode_token(x) for x in raw["inputs"])
        except InputError as exc:
            raise SuiteError(f"case {cid}: {exc}") from exc
        cases.append(TestCase(cid, raw["entry"], inputs, raw.get("expected_label"),
                              raw.get("discrepancy")))
    return cases


def load_suite(source) -> list[TestCase]:
    """Load a suite file, or a bundled suite by name (``"table8"``)."""
    text, name = _read(source)
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SuiteError(f"suite {name} is not valid JSON: {exc}") from exc
    return parse_suite(data)


def suite_digest(cases: Sequence[TestCase]) -> str:
    """Content hash over ids, entries and inputs; labels and notes do not count."""
    canon = [[c.id, c.entry, [t.encode() for t in c.inputs]] for c in cases]
    blob = json.dumps(canon, separators=(",", ":"), sort_keys=True).encode()
    return hashlib.sha256(blob).hexdigest()
