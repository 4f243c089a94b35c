"""Validation reports shared by the model types."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class ValidationReport:
    subject: str
    violations: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok

    def describe(self) -> str:
        if self.ok:
            return f"{self.subject}: valid"
        lines = [f"{self.subject}: INVALID"]
        lines.extend(f"  - {v}" for v in self.violations)
        return "\n".join(lines)


class InvalidModelError(ValueError):
    """Raised when an operation requires a model that fails validation."""

    def __init__(self, report: ValidationReport):
        super().__init__(report.describe())
        self.report = report


def require_valid(report: ValidationReport) -> None:
    if not report.ok:
        raise InvalidModelError(report)
