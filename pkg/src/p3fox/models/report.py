"""Models of the verify suite report."""

from pydantic import BaseModel, computed_field


class CheckResult(BaseModel):
    """Outcome of one identity or property check."""

    name: str
    passed: bool
    cases: int = 0
    worst: float = 0.0
    detail: str | None = None


class VerifyReport(BaseModel):
    """All check outcomes of one verify run."""

    seed: int
    fast: bool
    checks: list[CheckResult]

    @computed_field
    @property
    def failures(self) -> int:
        return sum(not check.passed for check in self.checks)

    @computed_field
    @property
    def passes(self) -> int:
        return sum(check.passed for check in self.checks)
