"""Adapters that obtain actual results from an implementation under test.

In-process adapters wrap a Python callable. Subprocess adapters speak a line
protocol: one JSON array of input tokens per request line, one verdict line
per response. The child is started lazily, reused across cases, and restarted
after a crash or a timeout.
"""

from __future__ import annotations

import json
import os
import queue
import shlex
import subprocess
import threading
from typing import Callable, Optional, Protocol, Sequence

from ..inputs import DEFAULT_M, IntTok, InputToken, SymbolTok, token_value
from .iut import MUTANTS, UnknownMutant, mutant, reference_iut

DEFAULT_TIMEOUT = 5.0


class IUTError(Exception):
    """The implementation crashed, printed nothing, or could not be started."""


class IUTTimeout(IUTError):
    pass


class IUTAdapter(Protocol):
    name: str

    def query(self, inputs: Sequence[InputToken], M: int) -> str: ...

    def fresh(self) -> "IUTAdapter": ...

    def close(self) -> None: ...


class CallableAdapter:
    def __init__(self, fn: Callable[[Sequence[InputToken], int], str], name: str = "callable"):
        self.fn = fn
        self.name = name

    def query(self, inputs, M=DEFAULT_M) -> str:
        try:
            out = self.fn(list(inputs), M)
        except Exception as exc:
            raise IUTError(f"{type(exc).__name__}: {exc}") from exc
        if not isinstance(out, str):
            raise IUTError(f"implementation returned {type(out).__name__}, not a verdict string")
        out = out.strip()
        if not out:
            raise IUTError("empty output")
        return out

    def fresh(self) -> "CallableAdapter":
        return self

    def close(self) -> None:
        pass


def encode_request(inputs: Sequence[InputToken], M: int) -> str:
    """One request line. Boundary symbols are resolved, so the child never needs M."""
    resolved = [IntTok(token_value(t, M)) if isinstance(t, SymbolTok) else t for t in inputs]
    return json.dumps([t.encode() for t in resolved])


class SubprocessAdapter:
    def __init__(self, argv: Sequence[str], timeout: float = DEFAULT_TIMEOUT, name: Optional[str] = None):
        self.argv = list(argv)
        self.timeout = timeout
        self.name = name or "exec:" + " ".join(self.argv)
        self._proc: Optional[subprocess.Popen] = None
        self._lines: "queue.Queue[Optional[str]]" = queue.Queue()

    def _start(self):
        try:
            self._proc = subprocess.Popen(
                self.argv, stdin=subprocess.PIPE, stdout=subprocess.PIPE,
                stderr=subprocess.DEVNULL, text=True, encoding="utf-8", bufsize=1)
        except OSError as exc:
            self._proc = None
            raise IUTError(f"cannot start {self.argv[0]}: {exc}") from exc
        self._lines = queue.Queue()
        threading.Thread(target=self._pump, args=(self._proc, self._lines), daemon=True).start()

    @staticmethod
    def _pump(proc: subprocess.Popen, lines: "queue.Queue"):
        for line in proc.stdout:
            lines.put(line)
        lines.put(None)

    def query(self, inputs, M=DEFAULT_M) -> str:
        if self._proc is None or self._proc.poll() is not None:
            self._start()
        try:
            self._proc.stdin.write(encode_request(inputs, M) + "\n")
            self._proc.stdin.flush()
        except (BrokenPipeError, OSError) as exc:
            self._kill()
            raise IUTError(f"implementation closed its input: {exc}") from exc
        try:
            line = self._lines.get(timeout=self.timeout)
        except queue.Empty:
            self._kill()
            raise IUTTimeout(f"no response within {self.timeout:g}s") from None
        if line is None:
            self._kill()
            raise IUTError("implementation exited without a response")
        out = line.strip()
        if not out:
            raise IUTError("empty output")
        return out

    def _kill(self):
        proc, self._proc = self._proc, None
        if proc is None:
            return
        try:
            proc.kill()
            proc.wait(timeout=5)
        except (OSError, subprocess.TimeoutExpired):
            pass
        for stream in (proc.stdin, proc.stdout):
            try:
                stream.close()
            except OSError:
                pass

    def fresh(self) -> "SubprocessAdapter":
        return SubprocessAdapter(self.argv, self.timeout, self.name)

    def close(self) -> None:
        self._kill()

    def __del__(self):
        self._kill()


def resolve_iut(spec: str, timeout: float = DEFAULT_TIMEOUT) -> IUTAdapter:
    """``builtin:reference``, ``builtin:mutant:<id>`` or ``exec:<command line>``."""
    if spec == "builtin:reference":
        return CallableAdapter(reference_iut, spec)
    if spec.startswith("builtin:mutant:"):
        mid = spec.split(":", 2)[2]
        if mid not in MUTANTS:
            raise UnknownMutant(f"unknown mutant {mid!r}; expected one of {', '.join(MUTANTS)}")
        return CallableAdapter(mutant(mid), spec)
    if spec.startswith("exec:"):
        cmd = spec[len("exec:"):].strip()
        if not cmd:
            raise ValueError("exec: needs a command")
        argv = shlex.split(cmd) if not os.path.exists(cmd) else [cmd]
        return SubprocessAdapter(argv, timeout, spec)
    raise ValueError(f"unknown implementation {spec!r}")
