"""Model for a validated command-line run."""

import math
from typing import Annotated, Literal

from pydantic import BaseModel, ConfigDict, Field, model_validator

from p3fox.models.params import SolutionParams
from p3fox.models.trajectory import GridSpec

SUBCOMMANDTYPE = Literal["eval", "asym", "expand", "trace", "grid", "verify"]
FORMATTYPE = Literal["csv", "json"]
LOGLEVELTYPE = Literal["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"]


class AlphaScan(BaseModel):
    """Range a:b:step of an exponent scan."""

    model_config = ConfigDict(frozen=True)

    start: float
    stop: float
    step: Annotated[float, Field(gt=0)]


class RunConfig(BaseModel):
    """Everything one CLI run needs."""

    model_config = ConfigDict(frozen=True)

    subcommand: SUBCOMMANDTYPE
    params: SolutionParams = SolutionParams(n=0, alpha=1)
    x: complex | None = None
    x0: complex | None = None
    path: list[complex] | None = None
    grid: GridSpec | None = None
    alpha_scan: AlphaScan | None = None
    tol: Annotated[float, Field(gt=0)] = 1e-9
    budget: Annotated[float, Field(ge=0)] = 12.0
    compare_asym: bool = False
    output: str | None = None
    format: FORMATTYPE = "csv"
    seed: int = 0
    log_level: LOGLEVELTYPE = "WARNING"

    @model_validator(mode="after")
    def _check_finite(self):
        numbers: list[complex] = [self.tol, self.budget]
        numbers += [value for value in (self.x, self.x0) if value is not None]
        numbers += self.path or []
        if not all(math.isfinite(abs(value)) for value in numbers):
            raise ValueError("numeric options must be finite")
        return self
