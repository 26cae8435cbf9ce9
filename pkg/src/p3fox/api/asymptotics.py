"""Small-x classification of Delta_n and u_n and their leading terms.

Notes:
    Windows compare Re(alpha) only. The "or" clauses of the classification
    (d2 = 0, or d1 sin(pi alpha/2) + d2 cos(pi alpha/2) = 0) override the
    windows whenever sin(pi alpha/2) != 0. Barnes G ratios are reduced to
    gamma_product calls.
"""

import cmath
import logging
import math
from typing import Literal

from p3fox.api.special import gamma, gamma_product
from p3fox.models.params import SolutionParams
from p3fox.models.regime import Regime
from p3fox.utilities.errors import (
    BoundaryAlphaError,
    DegenerateCoefficientError,
    DomainError,
    RangeError,
)
from p3fox.utilities.global_instance import Thresholds

logger = logging.getLogger(__name__)

_DEGENERACY_TOLERANCE = 1e-12

FORCED = Literal["first", "last"]


def power_p(r: int, alpha: complex, n: int) -> complex:
    """Power p(r, alpha, n) = alpha r - n alpha/2 - 2 r (n - r)."""
    if not 0 <= r <= n:
        raise RangeError(f"r must lie in [0, {n}], got {r}")
    return alpha * r - n * alpha / 2 - 2 * r * (n - r)


def delta_edges(n: int) -> list[int]:
    """Window edges of critical_r, 2n - 4k + 2 for k = 1..n."""
    return [2 * n - 4 * k + 2 for k in range(1, n + 1)]


def u_edges(n: int) -> list[int]:
    """Window edges of exponent_e, the even integers in [-2n, 2n + 2]."""
    return list(range(-2 * n, 2 * n + 3, 2))


def _check_edges(alpha: complex, edges: list[int], what: str):
    margin = Thresholds.get("boundary")
    for edge in edges:
        if abs(complex(alpha).real - edge) < margin:
            raise BoundaryAlphaError(f"Re(alpha)={edge} is a window edge of {what}")


def critical_r(alpha: complex, n: int) -> int:
    """Index r_c minimizing Re p(r, alpha, n) over r = 0..n.

    Raises:
        BoundaryAlphaError: When Re(alpha) sits on a window edge.

    """
    _check_edges(alpha, delta_edges(n), f"r_c at n={n}")
    re_alpha = complex(alpha).real
    if re_alpha > 2 * n - 2:
        return 0
    if re_alpha < 2 - 2 * n:
        return n
    return min(n, max(0, math.floor(n / 2 - re_alpha / 4 + 0.5)))


def _trig(alpha: complex) -> tuple[complex, complex]:
    angle = math.pi * complex(alpha) / 2
    return cmath.sin(angle), cmath.cos(angle)


def _forced(alpha: complex, d1: complex, d2: complex) -> FORCED | None:
    """Override from the "or" clauses, "first" is case 1 and "last" case 3/4."""
    sin, cos = _trig(alpha)
    if abs(sin) < _DEGENERACY_TOLERANCE:
        # alpha in 2Z, windows alone decide
        return None

    c1_zero = abs(d1 * sin + d2 * cos) <= _DEGENERACY_TOLERANCE * (abs(d1) + abs(d2))
    if d2 == 0 and c1_zero:
        raise DegenerateCoefficientError("both c1 and c2 vanish")
    if d2 == 0:
        return "last"
    if c1_zero:
        return "first"
    return None


def coefficient_c_general(
    alpha: complex, n: int, r: int, d1: complex, d2: complex
) -> complex:
    """Coefficient of the (x/2)**p(r) term of Delta_n.

    (-1)**(n(n-1)/2 + n - r + n r) pi**(-n) (d1 sin + d2 cos)**r d2**(n-r)
    G(alpha/2+r+1) G(n+1-r) G(1+n-r-alpha/2) G(r+1)
    / (G(alpha/2+2r-n+1) G(1-alpha/2-2r+n))
    """
    if not 0 <= r <= n:
        raise RangeError(f"r must lie in [0, {n}], got {r}")

    sin, cos = _trig(alpha)
    half = complex(alpha) / 2
    exponent = n * (n - 1) // 2 + n - r + n * r
    sign = -1 if exponent % 2 else 1

    return (
        sign
        / math.pi**n
        * (d1 * sin + d2 * cos) ** r
        * complex(d2) ** (n - r)
        * gamma_product(half + 2 * r - n + 1, n - r)
        * gamma_product(1, n - r)
        * gamma_product(1 - half - 2 * r + n, r)
        * gamma_product(1, r)
    )


def _delta_index(params: SolutionParams) -> int:
    forced = _forced(params.alpha, params.d1, params.d2)
    if forced == "first":
        return 0
    if forced == "last":
        return params.n
    return critical_r(params.alpha, params.n)


def coefficient_c(params: SolutionParams) -> complex:
    """Leading coefficient c(alpha, n) of Delta_n."""
    r = _delta_index(params)
    return coefficient_c_general(params.alpha, params.n, r, params.d1, params.d2)


def delta_leading(params: SolutionParams) -> Regime:
    """Regime of Delta_n as x -> 0.

    Raises:
        BoundaryAlphaError: When Re(alpha) sits on a window edge.
        DegenerateCoefficientError: When both c1 and c2 vanish.

    """
    n = params.n
    r = _delta_index(params)
    if r == 0:
        case_label, j = 1, None
    elif r == n:
        case_label, j = 3, None
    else:
        case_label, j = 2, r

    return Regime(
        subject="delta",
        case_label=case_label,
        j=j,
        r_c=r,
        exponent=power_p(r, params.alpha, n),
        coefficient=coefficient_c_general(params.alpha, n, r, params.d1, params.d2),
    )


def delta_leading_value(params: SolutionParams, x: complex) -> complex:
    """Leading term c(alpha, n) (x/2)**p_c of Delta_n."""
    regime = delta_leading(params)
    return regime.coefficient * cmath.exp(regime.exponent * cmath.log(x / 2))


# ===== u_n


def _u_window(alpha: complex, n: int) -> tuple[int, int | None]:
    """Case and window index of u_n from Re(alpha) alone."""
    _check_edges(alpha, u_edges(n), f"u_n at n={n}")
    re_alpha = complex(alpha).real
    if re_alpha > 2 * n + 2:
        return 1, None
    if re_alpha < -2 * n:
        return 4, None

    k = math.floor((2 * n + 2 - re_alpha) / 2)
    if k % 2 == 0:
        return 2, k // 2
    return 3, (k - 1) // 2


def _u_case(params: SolutionParams) -> tuple[int, int | None]:
    forced = _forced(params.alpha, params.d1, params.d2)
    if forced == "last":
        return 4, None
    if forced == "first":
        return 1, None
    return _u_window(params.alpha, params.n)


def _exponent_for(case_label: int, j: int | None, alpha: complex, n: int) -> complex:
    if case_label == 1:
        return 1 + 0j
    if case_label == 4:
        return -1 + 0j
    assert j is not None
    if case_label == 2:
        return alpha - 2 * n + 4 * j - 1
    return -alpha + 2 * n - 4 * j - 1


def exponent_e(alpha: complex, n: int) -> complex:
    """Exponent e(alpha, n) of u_n ~ q (x/2)**e, by windows of Re(alpha).

    Raises:
        BoundaryAlphaError: When Re(alpha) is an even integer in [-2n, 2n+2].

    """
    case_label, j = _u_window(alpha, n)
    return _exponent_for(case_label, j, alpha, n)


def exponent_e_composition(alpha: complex, n: int) -> complex:
    """p_c(alpha-2, n+1) - p_c(alpha-2, n) + p_c(alpha, n) - p_c(alpha, n+1)."""

    def p_c(a: complex, m: int) -> complex:
        return power_p(critical_r(a, m), a, m)

    return p_c(alpha - 2, n + 1) - p_c(alpha - 2, n) + p_c(alpha, n) - p_c(alpha, n + 1)


def coefficient_q(params: SolutionParams) -> complex:
    """Coefficient q(alpha, n) of u_n ~ q (x/2)**e.

    Raises:
        BoundaryAlphaError: When Re(alpha) sits on a window edge.

    """
    n, alpha = params.n, complex(params.alpha)
    case_label, j = _u_case(params)

    if case_label == 1:
        return 2 / (2 * n + 2 - alpha)
    if case_label == 4:
        return -alpha / 2 - n + 0j

    assert j is not None
    sin, cos = _trig(alpha)
    ratio = params.d1 / params.d2 * sin + cos
    half = alpha / 2
    sign = -1 if n % 2 else 1

    if case_label == 2:
        return (
            sign
            * ratio
            * (gamma(-half + n - 2 * j + 1) / gamma(half - n + 2 * j)) ** 2
            * gamma(j + half)
            * gamma(j + 1)
            / (gamma(-half + n - j + 1) * gamma(n - j + 1))
        )
    return (
        sign
        / ratio
        * (gamma(half - n + 2 * j + 1) / gamma(-half + n - 2 * j)) ** 2
        * gamma(-half + n - j + 1)
        * gamma(n - j)
        / (gamma(j + half + 1) * gamma(j + 1))
    )


def coefficient_q_composition(params: SolutionParams) -> complex:
    """-c(alpha-2, n+1) c(alpha, n) / (c(alpha-2, n) c(alpha, n+1))."""
    n = params.n
    shifted = params.with_alpha(params.alpha - 2)
    return (
        -coefficient_c(shifted.with_n(n + 1))
        * coefficient_c(params)
        / (coefficient_c(shifted) * coefficient_c(params.with_n(n + 1)))
    )


def u_regime(params: SolutionParams) -> Regime:
    """Regime of u_n as x -> 0."""
    case_label, j = _u_case(params)
    return Regime(
        subject="u",
        case_label=case_label,
        j=j,
        r_c=_delta_index(params),
        exponent=_exponent_for(case_label, j, params.alpha, params.n),
        coefficient=coefficient_q(params),
    )


def u_leading(params: SolutionParams, x: complex) -> complex:
    """Leading term q(alpha, n) (x/2)**e(alpha, n) of u_n."""
    if x == 0:
        raise DomainError("u_leading is undefined at x=0")
    regime = u_regime(params)
    return regime.coefficient * cmath.exp(regime.exponent * cmath.log(x / 2))


def leading_power_scan(
    n: int, start: float, stop: float, step: float
) -> list[dict[str, float | None]]:
    """Exponents of Delta_n and u_n along Re(alpha) in [start, stop].

    Window edges are kept in the output with None exponents.
    """
    if step <= 0:
        raise DomainError(f"scan step must be positive, got {step}")

    count = int(round((stop - start) / step))
    records: list[dict[str, float | None]] = []
    for k in range(count + 1):
        alpha = start + k * step
        record: dict[str, float | None] = {"alpha": alpha}
        try:
            record["delta_exponent"] = power_p(critical_r(alpha, n), alpha, n).real
        except BoundaryAlphaError:
            record["delta_exponent"] = None
        try:
            record["u_exponent"] = exponent_e(alpha, n).real
        except BoundaryAlphaError:
            record["u_exponent"] = None
        if record["delta_exponent"] is None or record["u_exponent"] is None:
            logger.warning("alpha=%g is a window edge at n=%d", alpha, n)
        records.append(record)
    return records
