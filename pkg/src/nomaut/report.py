from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class Check:
    name: str
    passed: bool
    cases: int = 0
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        text = f"{status} {self.name}"
        if self.cases:
            text += f" ({self.cases} cases)"
        if self.detail:
            text += f": {self.detail}"
        return text


@dataclass
class Report:
    title: str
    checks: list[Check] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, name: str, passed: bool, cases: int = 0, detail: str = "") -> Check:
        check = Check(name, passed, cases, detail)
        self.checks.append(check)
        return check

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def lines(self) -> list[str]:
        return [c.line() for c in self.checks]

    def to_json(self) -> dict:
        return {
            "title": self.title,
            "ok": self.ok,
            "checks": [
                {"name": c.name, "passed": c.passed, "cases": c.cases, "detail": c.detail}
                for c in self.checks
            ],
        }

    def __str__(self) -> str:
        return "\n".join([self.title] + ["  " + x for x in self.lines()])
