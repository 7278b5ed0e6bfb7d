"""Structured reports emitted by the command-line driver."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from ._version import __version__
from .diagnostics import Check

__all__ = ["Report", "to_jsonable"]


def to_jsonable(v):
    """numpy / complex values -> plain JSON types (complex as ``[re, im]``)."""
    if isinstance(v, dict):
        return {str(k): to_jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [to_jsonable(x) for x in v]
    if isinstance(v, np.ndarray):
        return to_jsonable(v.tolist())
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (complex, np.complexfloating)):
        z = complex(v)
        if z.imag == 0:
            return _float(z.real)
        return [_float(z.real), _float(z.imag)]
    if isinstance(v, (float, np.floating)):
        return _float(float(v))
    if isinstance(v, Check):
        return v.as_dict()
    return v


def _float(x: float):
    # JSON has no inf/nan literals
    if np.isfinite(x):
        return x
    return "nan" if np.isnan(x) else ("inf" if x > 0 else "-inf")


@dataclass
class Report:
    command: str
    tolerances: dict
    inputs: list = field(default_factory=list)
    checks: list = field(default_factory=list)
    results: dict = field(default_factory=dict)
    witnesses: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)
    tool: str = "quasistar"
    version: str = __version__

    def add_input(self, path, digest: str) -> None:
        self.inputs.append({"path": str(path), "sha256": digest})

    def add_checks(self, checks, prefix: str = "") -> None:
        for c in checks:
            if prefix:
                c = Check(prefix + c.name, c.passed, c.residual, c.note, c.required)
            self.checks.append(c)

    @property
    def failed(self) -> list[Check]:
        return [c for c in self.checks if c.required and not c.passed]

    @property
    def ok(self) -> bool:
        return not self.failed

    def as_dict(self) -> dict:
        return to_jsonable({
            "tool": self.tool,
            "version": self.version,
            "command": self.command,
            "inputs": self.inputs,
            "tolerances": self.tolerances,
            "status": "pass" if self.ok else "fail",
            "failed": [c.name for c in self.failed],
            "checks": self.checks,
            "results": self.results,
            "witnesses": self.witnesses,
            "notes": self.notes,
        })

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=2, sort_keys=True) + "\n"

    def to_text(self) -> str:
        lines = [f"{self.tool} {self.version} :: {self.command}"]
        for inp in self.inputs:
            lines.append(f"  input  {inp['path']}  sha256={inp['sha256'][:16]}")
        width = max((len(c.name) for c in self.checks), default=0)
        for c in self.checks:
            tag = {"pass": "PASS", "fail": "FAIL", "info": "INFO"}[c.status]
            extra = f"  {c.note}" if c.note else ""
            lines.append(f"  [{tag}] {c.name:<{width}}  residual={c.residual:.3e}{extra}")
        for key, val in sorted(self.results.items()):
            lines.append(f"  {key}: {_short(val)}")
        for key, val in sorted(self.witnesses.items()):
            lines.append(f"  witness {key}: {_short(val)}")
        for note in self.notes:
            lines.append(f"  note: {note}")
        lines.append(f"  status: {'pass' if self.ok else 'FAIL'}")
        if self.failed:
            lines.append("  failed: " + ", ".join(c.name for c in self.failed))
        return "\n".join(lines) + "\n"


def _short(v) -> str:
    v = to_jsonable(v)
    s = json.dumps(v, sort_keys=True)
    return s if len(s) <= 200 else s[:197] + "..."
