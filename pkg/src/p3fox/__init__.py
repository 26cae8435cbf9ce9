"""P3fox library."""

from .api.asymptotics import delta_leading, u_leading, u_regime
from .api.expansion import expand_u
from .api.hankel import delta, tau
from .api.ode import grid, trace
from .api.painleve import u_n_backlund, u_n_determinant, u_n_recurrence
from .models.params import JetPoint, PIIIParams, SolutionParams

__all__ = [
    "JetPoint",
    "PIIIParams",
    "SolutionParams",
    "delta",
    "delta_leading",
    "expand_u",
    "grid",
    "tau",
    "trace",
    "u_leading",
    "u_n_backlund",
    "u_n_determinant",
    "u_n_recurrence",
    "u_regime",
]
