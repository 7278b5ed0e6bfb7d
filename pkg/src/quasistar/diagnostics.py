from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class Check:
    """Outcome of one named certification step.

    ``required=False`` marks informational checks (for example the
    standardness verdict) that never make a run fail.
    """

    name: str
    passed: bool
    residual: float = 0.0
    note: str = ""
    required: bool = True

    @property
    def status(self) -> str:
        if self.passed:
            return "pass"
        return "fail" if self.required else "info"

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "status": self.status,
            "residual": float(self.residual),
            "note": self.note,
        }


@dataclass
class CheckList:
    checks: list[Check] = field(default_factory=list)

    def add(self, name, passed, residual=0.0, note="", required=True) -> Check:
        c = Check(name, bool(passed), float(residual), note, required)
        self.checks.append(c)
        return c

    def extend(self, checks) -> None:
        self.checks.extend(checks)

    @property
    def failed(self) -> list[Check]:
        return [c for c in self.checks if c.required and not c.passed]

    @property
    def ok(self) -> bool:
        return not self.failed

    def __getitem__(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def __iter__(self):
        return iter(self.checks)

    def __len__(self) -> int:
        return len(self.checks)
