"""Pass/fail reports with witnesses, assembled in declaration order."""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .graded_linear import GradedMap, format_vector


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        return f"[{tag}] {self.name}" + (f": {self.detail}" if self.detail else "")


@dataclass
class Report:
    title: str
    checks: list[Check] = dc_field(default_factory=list)
    notes: list[str] = dc_field(default_factory=list)

    def add(self, name: str, passed: bool, detail: str = "") -> bool:
        self.checks.append(Check(name, bool(passed), detail))
        return bool(passed)

    def note(self, text: str) -> None:
        self.notes.append(text)

    def equal(self, name: str, lhs: GradedMap, rhs: GradedMap) -> bool:
        """Record whether two maps agree, with the first differing basis vector as witness."""
        if lhs.domain != rhs.domain or lhs.codomain.dim != rhs.codomain.dim:
            return self.add(name, False, "maps have different shapes")
        j = lhs.first_difference(rhs)
        if j is None:
            return self.add(name, True)
        witness = lhs.domain.names[j] or "1"
        detail = (f"witness {witness}: {format_vector(lhs.codomain, lhs.cols[j])}"
                  f" != {format_vector(rhs.codomain, rhs.cols[j])}")
        return self.add(name, False, detail)

    def merge(self, other: Report, prefix: str = "") -> None:
        for c in other.checks:
            self.checks.append(Check(prefix + c.name, c.passed, c.detail))
        self.notes.extend(other.notes)

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def failed_names(self) -> str:
        return "; ".join(c.name for c in self.failures())

    def passed(self, name: str) -> bool:
        for c in self.checks:
            if c.name == name:
                return c.passed
        raise KeyError(name)

    def lines(self) -> list[str]:
        out = [f"== {self.title} =="]
        out.extend(c.line() for c in self.checks)
        out.extend(f"note: {n}" for n in self.notes)
        return out

    def __str__(self) -> str:
        return "\n".join(self.lines())
