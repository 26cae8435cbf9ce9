"""Parameter models of the Painleve III equation and its Bessel solutions.

Exposed models:
    1. PIIIParams
    2. SolutionParams
    3. JetPoint
"""

import cmath
from typing import Annotated

from pydantic import BaseModel, ConfigDict, Field, model_validator


class PIIIParams(BaseModel):
    """Generic (alpha, beta) pair of the Painleve III equation."""

    model_config = ConfigDict(frozen=True)

    alpha: complex
    beta: complex

    @model_validator(mode="after")
    def _check_finite(self):
        if not (cmath.isfinite(self.alpha) and cmath.isfinite(self.beta)):
            raise ValueError("alpha and beta must be finite")
        return self

    def inverted(self) -> "PIIIParams":
        """Parameters of 1/u, the image (-beta, -alpha)."""
        return PIIIParams(alpha=-self.beta, beta=-self.alpha)

    def shifted(self, d_alpha: int, d_beta: int) -> "PIIIParams":
        """Parameters shifted by integer steps."""
        return PIIIParams(alpha=self.alpha + d_alpha, beta=self.beta + d_beta)


class SolutionParams(BaseModel):
    """The quadruple (n, alpha, d1, d2) selecting u_n(x, alpha)."""

    model_config = ConfigDict(frozen=True)

    n: Annotated[int, Field(ge=0)]
    alpha: complex
    d1: complex = 1
    d2: complex = 0

    @model_validator(mode="after")
    def _check_coefficients(self):
        values = (self.alpha, self.d1, self.d2)
        if not all(cmath.isfinite(value) for value in values):
            raise ValueError("alpha, d1 and d2 must be finite")
        if self.d1 == 0 and self.d2 == 0:
            raise ValueError("(d1, d2) must not both vanish")
        return self

    def beta(self) -> complex:
        """Beta of the equation solved by u_n, -alpha + 2 + 2n."""
        return -self.alpha + 2 + 2 * self.n

    def piii(self) -> PIIIParams:
        """Parameters (alpha + 2n, beta) of the equation solved by u_n."""
        return PIIIParams(alpha=self.alpha + 2 * self.n, beta=self.beta())

    def with_n(self, n: int) -> "SolutionParams":
        """Copy with another n."""
        return self.model_copy(update={"n": n})

    def with_alpha(self, alpha: complex) -> "SolutionParams":
        """Copy with another alpha."""
        return self.model_copy(update={"alpha": alpha})


class JetPoint(BaseModel):
    """Value and first derivative of a solution at x."""

    model_config = ConfigDict(frozen=True)

    x: complex
    u: complex
    du: complex

    @model_validator(mode="after")
    def _check_point(self):
        if self.x == 0:
            raise ValueError("x must not be 0")
        return self
