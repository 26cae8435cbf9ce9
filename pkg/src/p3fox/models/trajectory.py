"""Models of the complex-plane continuation.

Exposed models:
    1. ChartState
    2. Trajectory
    3. GridSpec
    4. GridResult
"""

import cmath
from typing import Annotated, Literal

import numpy as np
from numpy.typing import NDArray
from pydantic import BaseModel, ConfigDict, Field, model_validator

from p3fox.models.params import PIIIParams

# ==============================================================================
CHARTTYPE = Literal["U", "V"]
STATUSTYPE = Literal["ok", "pole", "failed"]


class ChartState(BaseModel):
    """Point of a trajectory in one of the two charts.

    In chart U, y is u and params are those of u. In chart V, y is 1/u and
    params are the inverted pair (-beta, -alpha).
    """

    model_config = ConfigDict(frozen=True)

    x: complex
    y: complex
    dy: complex
    chart: CHARTTYPE = "U"
    params: PIIIParams

    @model_validator(mode="after")
    def _check_finite(self):
        if not all(cmath.isfinite(value) for value in (self.x, self.y, self.dy)):
            raise ValueError("chart state must be finite")
        return self

    def u(self) -> complex:
        """Value of u, nan at a zero of the V chart."""
        if self.chart == "U":
            return self.y
        if self.y == 0:
            return complex("nan")
        return 1 / self.y


class Trajectory(BaseModel):
    """Accepted states along a path, with step statistics."""

    samples: list[ChartState]
    steps: Annotated[int, Field(ge=0)] = 0
    rejected: Annotated[int, Field(ge=0)] = 0
    switches: Annotated[int, Field(ge=0)] = 0
    seed_error: float | None = None

    @property
    def end(self) -> ChartState:
        """Last accepted state."""
        return self.samples[-1]


class GridSpec(BaseModel):
    """Rectangle and node counts of a complex grid."""

    model_config = ConfigDict(frozen=True)

    x_min: float
    x_max: float
    y_min: float
    y_max: float
    nx: Annotated[int, Field(ge=1)]
    ny: Annotated[int, Field(ge=1)]

    @model_validator(mode="after")
    def _check_rect(self):
        if not (self.x_min <= self.x_max and self.y_min <= self.y_max):
            raise ValueError("rectangle bounds must be ordered")
        return self

    def real_nodes(self) -> NDArray[np.float64]:
        """Real parts of the nodes."""
        return np.linspace(self.x_min, self.x_max, self.nx)

    def imag_nodes(self) -> NDArray[np.float64]:
        """Imaginary parts of the nodes."""
        return np.linspace(self.y_min, self.y_max, self.ny)


class GridResult(BaseModel):
    """Values of u on the grid nodes, indexed [x index, y index]."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    spec: GridSpec
    values: NDArray[np.complex128]
    status: NDArray[np.str_]

    @model_validator(mode="after")
    def _check_arrays(self):
        shape = (self.spec.nx, self.spec.ny)
        if self.values.shape != shape or self.status.shape != shape:
            raise ValueError(f"grid arrays must have shape {shape}")
        ok = self.status == "ok"
        if not np.all(np.isfinite(self.values[ok])):
            raise ValueError("values must be finite where status is ok")
        return self

    def counts(self) -> dict[str, int]:
        """Number of nodes per status."""
        return {
            label: int(np.count_nonzero(self.status == label))
            for label in ("ok", "pole", "failed")
        }
