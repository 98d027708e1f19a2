"""Uniform pass/fail reporting for exact and Monte Carlo checks.

Every verifier produces a TestReport: a list of statistic lines, each with the
two compared values, an uncertainty where one exists, and a verdict.  The CLI
serializes these to JSON; the test suite asserts on `passed`.
"""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class StatLine:
    statistic: str
    lhs: float
    rhs: float
    stderr: float | None
    z: float | None
    passed: bool
    note: str = ""

    def to_dict(self) -> dict:
        return {
            "statistic": self.statistic,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "stderr": self.stderr,
            "z": self.z,
            "pass": self.passed,
            "note": self.note,
        }


@dataclass
class TestReport:
    name: str
    lines: list = field(default_factory=list)
    conventions: dict = field(default_factory=dict)
    meta: dict = field(default_factory=dict)

    def add_z(self, statistic: str, lhs: float, rhs: float, stderr: float,
              gate: float = 3.0, note: str = "") -> StatLine:
        """Compare an estimate to a target with a z-score gate."""
        if stderr > 0:
            z = (lhs - rhs) / stderr
        else:
            z = 0.0 if lhs == rhs else float("inf")
        line = StatLine(statistic, float(lhs), float(rhs), float(stderr),
                        float(z), bool(abs(z) <= gate), note)
        self.lines.append(line)
        return line

    def add_bound(self, statistic: str, value: float, bound: float,
                  note: str = "") -> StatLine:
        """Assert value <= bound (distances, TV, KS, relative errors)."""
        line = StatLine(statistic, float(value), float(bound), None, None,
                        bool(value <= bound), note)
        self.lines.append(line)
        return line

    def add_info(self, statistic: str, value: float, note: str = "") -> StatLine:
        """Record a value with no gate; always passes."""
        line = StatLine(statistic, float(value), float(value), None, None, True, note)
        self.lines.append(line)
        return line

    @property
    def passed(self) -> bool:
        return all(line.passed for line in self.lines)

    def failures(self) -> list:
        return [line for line in self.lines if not line.passed]

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "pass": self.passed,
            "lines": [line.to_dict() for line in self.lines],
            "conventions": self.conventions,
            "meta": self.meta,
        }

    def summary(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        worst = ""
        bad = self.failures()
        if bad:
            worst = f" ({bad[0].statistic}: {bad[0].lhs:.6g} vs {bad[0].rhs:.6g})"
        return f"{self.name}: {verdict} [{len(self.lines)} checks]{worst}"
