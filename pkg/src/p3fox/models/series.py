"""Model for formal series on the exponent lattice m + l*p."""

import math
from typing import Annotated

from pydantic import BaseModel, ConfigDict, Field, model_validator

from p3fox.utilities.errors import ParityError

KEYTYPE = tuple[int, int]


class LatticeSeries(BaseModel):
    """Formal series sum of coefficient * x**(m + l*p) over keys (m, l).

    Attributes:
        p: Base exponent shared by every key.
        terms: Coefficient of each stored key.
        parity: Common value of (m + l) mod 2 over the keys.
        order: Real exponent up to which the series is exact, None when it
            is an exact finite sum.

    """

    model_config = ConfigDict(frozen=True)

    p: complex
    terms: dict[KEYTYPE, complex] = Field(default_factory=dict)
    parity: Annotated[int, Field(ge=0, le=1)] = 1
    order: float | None = None

    @model_validator(mode="after")
    def _check_parity(self):
        for m, l in self.terms:
            if (m + l) % 2 != self.parity:
                raise ParityError(
                    f"key ({m}, {l}) breaks parity {self.parity} of the series"
                )
        return self

    @property
    def m_min(self) -> int:
        """Lower bound on the integer part of the stored keys."""
        return min((m for m, _ in self.terms), default=0)

    def exponent(self, key: KEYTYPE) -> complex:
        """Numeric exponent m + l*p of a key."""
        return key[0] + key[1] * self.p

    def low(self) -> float:
        """Smallest real exponent over the stored keys, inf when empty."""
        return min((self.exponent(key).real for key in self.terms), default=math.inf)

    def ordered(self) -> list[tuple[KEYTYPE, complex]]:
        """Terms sorted by increasing real exponent."""
        return sorted(
            self.terms.items(),
            key=lambda item: (self.exponent(item[0]).real, item[0]),
        )
