"""Painleve III layer: residuals, the Riccati seed, Backlund maps and u_n.

The equation is

    u'' = u'**2/u - u'/x + (alpha u**2 + beta)/x + u**3 - 1/u.

Every derivative along a Backlund or recurrence orbit is propagated exactly:
u'' is reconstructed from the equation itself, since each iterate solves it.
"""

import cmath
from collections.abc import Callable
from typing import Literal

from p3fox.api.hankel import delta, delta_derivative, tau
from p3fox.api.special import cylinder
from p3fox.models.params import JetPoint, PIIIParams, SolutionParams
from p3fox.utilities.core import five_point_derivative, richardson_derivatives
from p3fox.utilities.errors import (
    DegenerateError,
    DomainError,
    PoleError,
    SingularError,
)
from p3fox.utilities.global_instance import Thresholds

RICCATI_CASE = Literal[1, 2, 3, 4]


def piii_rhs_values(
    x: complex, u: complex, du: complex, alpha: complex, beta: complex
) -> complex:
    """Right side of the equation on plain numbers, see piii_rhs."""
    threshold = Thresholds.get("pole")
    if abs(u) < threshold:
        raise SingularError(f"u={u} vanishes at x={x}")
    if abs(x) < threshold:
        raise SingularError("x=0 is the fixed singular point")
    return du * du / u - du / x + (alpha * u * u + beta) / x + u**3 - 1 / u


def piii_rhs(jet: JetPoint, p: PIIIParams) -> complex:
    """Second derivative u'' prescribed by the equation at a jet.

    Raises:
        SingularError: When |u| < 1e-13 or |x| < 1e-13.

    """
    return piii_rhs_values(jet.x, jet.u, jet.du, p.alpha, p.beta)


def piii_residual(u_of_x: Callable[[complex], complex], x: complex, p: PIIIParams) -> float:
    """Finite difference residual |u''_FD - piii_rhs| of a scalar function."""
    step = 1e-4 * max(1.0, abs(x))
    du, d2u = richardson_derivatives(u_of_x, x, step)
    jet = JetPoint(x=x, u=u_of_x(x), du=du)
    return abs(d2u - piii_rhs(jet, p))


def jet_residual(
    jet_of_x: Callable[[complex], JetPoint], x: complex, p: PIIIParams
) -> float:
    """Residual |u'' - piii_rhs| with u'' differenced from the exact u'.

    The 5-point step is 1e-3 times the smaller of 1, |x| and |u/u'|, so the
    stencil stays well inside the distance to the nearest pole or zero.
    """
    jet = jet_of_x(x)
    step = 1e-3 * min(1.0, abs(x), abs(jet.u / jet.du) if jet.du != 0 else 1.0)
    d2u = five_point_derivative(lambda y: jet_of_x(y).du, x, step)
    return abs(d2u - piii_rhs(jet, p))


def riccati_coefficients(
    case_id: RICCATI_CASE, alpha: complex
) -> tuple[complex, complex, complex, complex]:
    """Row (a, b, c, beta) of the Riccati table u' = a u**2 + (b/x) u + c.

    The b entry is the scalar multiplying 1/x.
    """
    table: dict[int, tuple[complex, complex, complex, complex]] = {
        1: (1, alpha - 1, 1, 2 - alpha),
        2: (-1, -1 - alpha, -1, -2 - alpha),
        3: (1, alpha - 1, -1, alpha - 2),
        4: (-1, -1 - alpha, 1, alpha + 2),
    }
    if case_id not in table:
        raise DomainError(f"Unknown Riccati case {case_id}")
    return table[case_id]


def u0(x: complex, alpha: complex, d1: complex, d2: complex) -> JetPoint:
    """Riccati seed u_0 = -d/dx ln(x**(alpha/2) C_{alpha/2}(x)).

    Returns:
        The jet with u = -alpha/x + C_{alpha/2+1}/C_{alpha/2} and u' from the
        case 1 Riccati equation u' = u**2 + ((alpha-1)/x) u + 1.

    Raises:
        PoleError: When C_{alpha/2}(x) vanishes.

    """
    if x == 0:
        raise DomainError("u_0 is undefined at x=0")

    nu = alpha / 2
    base = cylinder(nu, x, d1, d2)
    if abs(base) < Thresholds.get("pole"):
        raise PoleError(f"C_{{alpha/2}} vanishes at x={x}, u_0 has a pole")

    u = -alpha / x + cylinder(nu + 1, x, d1, d2) / base
    a, b, c, _beta = riccati_coefficients(1, alpha)
    return JetPoint(x=x, u=u, du=a * u * u + (b / x) * u + c)


def riccati_solution_family(case_id: RICCATI_CASE) -> Callable[[complex, complex, complex, complex], JetPoint]:
    """Seed generator of a Riccati case, only case 1 seeds solutions."""
    if case_id != 1:
        raise DomainError(f"Riccati case {case_id} is stored as table data only")
    return u0


# ===== BACKLUND MAPS


def _quotient_jet(
    jet: JetPoint,
    d2u: complex,
    sign: Literal[1, -1],
    n_shift: complex,
    m_shift: complex,
    overall: Literal[1, -1],
) -> tuple[complex, complex]:
    """W = overall * N / (u M) and its exact derivative.

    N = x u' + sign x u**2 + n_shift u + x
    M = x u' + sign x u**2 + m_shift u + x
    """
    x, u, du = jet.x, jet.u, jet.du

    numerator = x * du + sign * x * u * u + n_shift * u + x
    denominator = x * du + sign * x * u * u + m_shift * u + x
    product = u * denominator
    if abs(product) < Thresholds.get("pole"):
        raise DegenerateError(f"Backlund denominator vanishes at x={x}")

    # shared part of N' and M'
    common = du + x * d2u + sign * (u * u + 2 * x * u * du) + 1
    d_numerator = common + n_shift * du
    d_denominator = common + m_shift * du
    d_product = du * denominator + u * d_denominator

    w = overall * numerator / product
    dw = overall * (d_numerator * product - numerator * d_product) / (product * product)
    return w, dw


def backlund_b1(jet: JetPoint, p: PIIIParams) -> tuple[JetPoint, PIIIParams]:
    """Backlund map B1, (alpha, beta) -> (alpha + 2, beta + 2).

    W = (x u' + x u**2 - beta u - u + x) / (u (x u' + x u**2 + alpha u + u + x))

    Raises:
        DegenerateError: When the denominator vanishes.

    """
    d2u = piii_rhs(jet, p)
    w, dw = _quotient_jet(jet, d2u, 1, -p.beta - 1, p.alpha + 1, 1)
    return JetPoint(x=jet.x, u=w, du=dw), p.shifted(2, 2)


def backlund_b2(jet: JetPoint, p: PIIIParams) -> tuple[JetPoint, PIIIParams]:
    """Backlund map B2, (alpha, beta) -> (alpha - 2, beta + 2).

    W = -(x u' - x u**2 - beta u - u + x) / (u (x u' - x u**2 - alpha u + u + x))

    Raises:
        DegenerateError: When the denominator vanishes.

    """
    d2u = piii_rhs(jet, p)
    w, dw = _quotient_jet(jet, d2u, -1, -p.beta - 1, 1 - p.alpha, -1)
    return JetPoint(x=jet.x, u=w, du=dw), p.shifted(-2, 2)


# ===== THREE PATHS TO u_n


def _seed(params: SolutionParams, x: complex) -> tuple[JetPoint, PIIIParams]:
    jet = u0(x, params.alpha, params.d1, params.d2)
    return jet, PIIIParams(alpha=params.alpha, beta=2 - params.alpha)


def u_n_backlund(params: SolutionParams, x: complex) -> JetPoint:
    """u_n as B1 applied n times to u_0.

    Raises:
        DegenerateError: With the failing iteration index.

    """
    jet, p = _seed(params, x)
    for iteration in range(params.n):
        try:
            jet, p = backlund_b1(jet, p)
        except (DegenerateError, SingularError) as exc:
            raise DegenerateError(
                f"B1 orbit degenerates at iteration {iteration}: {exc}",
                iteration=iteration,
            ) from exc
    return jet


def u_n_determinant(params: SolutionParams, x: complex) -> JetPoint:
    """u_n = -Delta_{n+1}(alpha-2) Delta_n(alpha) / (Delta_{n+1}(alpha) Delta_n(alpha-2)).

    The derivative follows from the quotient rule with delta_derivative.

    Raises:
        PoleError: Naming the vanishing determinant.

    """
    n, alpha, d1, d2 = params.n, params.alpha, params.d1, params.d2

    def jet_of(size: int, a: complex) -> tuple[complex, complex]:
        return delta(size, a, x, d1, d2), delta_derivative(size, a, x, d1, d2)

    top_a, d_top_a = jet_of(n + 1, alpha - 2)
    top_b, d_top_b = jet_of(n, alpha)
    bottom_a, d_bottom_a = jet_of(n + 1, alpha)
    bottom_b, d_bottom_b = jet_of(n, alpha - 2)

    # zeros of the denominator determinants are poles of u_n
    threshold = Thresholds.get("pole")
    if abs(bottom_a) < threshold:
        raise PoleError(f"Delta_{{n+1}}(alpha) vanishes at x={x}", index=n + 1)
    if abs(bottom_b) < threshold:
        raise PoleError(f"Delta_n(alpha-2) vanishes at x={x}", index=n)

    top = top_a * top_b
    d_top = d_top_a * top_b + top_a * d_top_b
    bottom = bottom_a * bottom_b
    d_bottom = d_bottom_a * bottom_b + bottom_a * d_bottom_b

    value = -top / bottom
    return JetPoint(x=x, u=value, du=-(d_top * bottom - top * d_bottom) / bottom**2)


def u_n_recurrence(params: SolutionParams, x: complex) -> JetPoint:
    """u_n by the rational recurrence u_{k+1} = u_k N / (u_k**2 M).

    N = (alpha - 2k - 3) u + x u**2 + x + x u'
    M = (alpha + 2k + 1) u + x u**2 + x + x u'

    Raises:
        DegenerateError: With the failing iteration index.

    """
    jet, _p = _seed(params, x)
    alpha = params.alpha

    for k in range(params.n):
        level = PIIIParams(alpha=alpha + 2 * k, beta=-alpha + 2 + 2 * k)
        u, du = jet.u, jet.du
        try:
            d2u = piii_rhs(jet, level)
        except SingularError as exc:
            raise DegenerateError(
                f"recurrence reaches u=0 at iteration {k}, x={x}", iteration=k
            ) from exc

        numerator = (alpha - 2 * k - 3) * u + x * u * u + x + x * du
        denominator = (alpha + 2 * k + 1) * u + x * u * u + x + x * du
        scale = u * u * denominator
        if abs(scale) < Thresholds.get("pole"):
            raise DegenerateError(
                f"recurrence degenerates at iteration {k}, x={x}", iteration=k
            )

        common = u * u + 2 * x * u * du + 1 + du + x * d2u
        d_numerator = (alpha - 2 * k - 3) * du + common
        d_denominator = (alpha + 2 * k + 1) * du + common
        d_scale = 2 * u * du * denominator + u * u * d_denominator

        # u_{k+1} = u N / S with S = u**2 M
        value = u * numerator / scale
        d_value = (
            (du * numerator + u * d_numerator) * scale - u * numerator * d_scale
        ) / (scale * scale)
        jet = JetPoint(x=x, u=value, du=d_value)

    return jet


# ===== HAMILTONIAN CHAIN


def momentum(jet: JetPoint, beta: complex) -> complex:
    """Momentum v = (x u' + x u**2 - x + u (beta - 1)) / (2 u**2)."""
    if abs(jet.u) < Thresholds.get("pole"):
        raise SingularError(f"momentum undefined for u={jet.u}")
    x, u = jet.x, jet.u
    return (x * jet.du + x * u * u - x + u * (beta - 1)) / (2 * u * u)


def hamiltonian(u: complex, v: complex, x: complex, p: PIIIParams) -> complex:
    """H = v**2 u**2 - v (x u**2 - x + u (beta - 1)) + 2 x u (beta - (2 + alpha)) / 4."""
    return (
        v * v * u * u
        - v * (x * u * u - x + u * (p.beta - 1))
        + 2 * x * u * (p.beta - (2 + p.alpha)) / 4
    )


def aux_hamiltonian(
    h: complex, u: complex, v: complex, x: complex, p: PIIIParams
) -> complex:
    """h = (H + u v - x**2 + (beta - 4)(beta + alpha - 2)/4) / 2."""
    return (h + u * v - x * x + (p.beta - 4) * (p.beta + p.alpha - 2) / 4) / 2


def h_n(params: SolutionParams, x: complex) -> complex:
    """Auxiliary Hamiltonian of u_n at (alpha + 2n, beta + 2n), beta = 2 - alpha."""
    level = PIIIParams(
        alpha=params.alpha + 2 * params.n, beta=2 - params.alpha + 2 * params.n
    )
    jet = u_n_backlund(params, x)
    v = momentum(jet, level.beta)
    return aux_hamiltonian(hamiltonian(jet.u, v, x, level), jet.u, v, x, level)


def chain_identity_residual(params: SolutionParams, x: complex) -> complex:
    """h_{n+1} - h_n + v_n u_n + 3/2 - alpha/4 - 3 beta/4 - 2n with beta = 2 - alpha."""
    n, alpha = params.n, params.alpha
    beta = 2 - alpha
    jet = u_n_backlund(params, x)
    v = momentum(jet, beta + 2 * n)
    return (
        h_n(params.with_n(n + 1), x)
        - h_n(params, x)
        + v * jet.u
        + 1.5
        - alpha / 4
        - 3 * beta / 4
        - 2 * n
    )


def tau_link_residual(params: SolutionParams, x: complex) -> float:
    """|x (ln tau_n)' - h_n| with the log derivative by finite differences."""
    n, alpha, d1, d2 = params.n, params.alpha, params.d1, params.d2
    reference = tau(n, alpha, x, d1, d2)

    def log_tau(y: complex) -> complex:
        return cmath.log(tau(n, alpha, y, d1, d2) / reference)

    d_log, _ = richardson_derivatives(log_tau, x, 1e-4 * max(1.0, abs(x)))
    return abs(x * d_log - h_n(params, x))
