"""Complex special functions: Gamma, Gamma products, Bessel J/Y, cylinder functions.

All functions accept python numbers (int, float, complex) and return complex.
Barnes G never appears directly: every ratio G(z + k)/G(z) with integer k is
evaluated as gamma_product(z, k).
"""

import cmath
import math

from p3fox.utilities.common import is_near_integer, nearest_integer
from p3fox.utilities.errors import (
    ConvergenceError,
    DomainError,
    IntegerOrderError,
    PoleError,
)
from p3fox.utilities.global_instance import Thresholds

# Lanczos approximation, g = 607/128 with 15 coefficients
_LANCZOS_G = 607 / 128
_LANCZOS_COEFFICIENTS = (
    0.999999999999997092,
    57.1562356658629235,
    -59.5979603554754912,
    14.1360979747417471,
    -0.491913816097620199,
    0.339946499848118887e-4,
    0.465236289270485756e-4,
    -0.983744753048795646e-4,
    0.158088703224912494e-3,
    -0.210264441724104883e-3,
    0.217439618115212643e-3,
    -0.164318106536763890e-3,
    0.844182239838527433e-4,
    -0.261908384015814087e-4,
    0.368991826595316234e-5,
)
_SQRT_TWO_PI = math.sqrt(2 * math.pi)

_POLE_TOLERANCE = 1e-12
_SERIES_TOLERANCE = 1e-14
_SERIES_TERMS = 200


def _pole_index(z: complex) -> int | None:
    """Non-positive integer within tolerance of z, if any."""
    nearest = nearest_integer(z)
    if nearest <= 0 and is_near_integer(z, _POLE_TOLERANCE):
        return nearest
    return None


def _lanczos(z: complex) -> complex:
    """Lanczos form of Gamma(z + 1)/z for Re(z) >= 1/2."""
    series = complex(_LANCZOS_COEFFICIENTS[0])
    for k, coefficient in enumerate(_LANCZOS_COEFFICIENTS[1:], start=1):
        series += coefficient / (z + k)
    t = z + _LANCZOS_G + 0.5
    return _SQRT_TWO_PI * series / z * cmath.exp((z + 0.5) * cmath.log(t) - t)


def gamma(z: complex) -> complex:
    """Gamma function of a complex argument.

    Args:
        z: Argument, not a non-positive integer.

    Returns:
        Gamma(z).

    Raises:
        PoleError: If z is within 1e-12 of a non-positive integer.

    """
    z = complex(z)
    pole = _pole_index(z)
    if pole is not None:
        raise PoleError(f"Gamma has a pole at z={z}", index=pole)

    if z.real < 0.5:
        # reflection formula
        return math.pi / (cmath.sin(math.pi * z) * _lanczos(1 - z))
    return _lanczos(z)


def rgamma(z: complex) -> complex:
    """Reciprocal Gamma, 0 at the poles."""
    z = complex(z)
    if _pole_index(z) is not None:
        return 0j
    return 1 / gamma(z)


def gamma_product(z: complex, k: int) -> complex:
    """Product Gamma(z) Gamma(z+1) ... Gamma(z+k-1) = G(z+k)/G(z).

    Args:
        z: Base argument.
        k: Number of factors, k >= 0.

    Returns:
        The product, 1 for k = 0.

    Raises:
        PoleError: Naming the offending factor index j of Gamma(z+j).

    """
    if k < 0:
        raise ValueError(f"gamma_product needs k >= 0, got {k}")

    product = 1 + 0j
    for j in range(k):
        try:
            product *= gamma(z + j)
        except PoleError as exc:
            raise PoleError(
                f"gamma_product factor Gamma(z+{j}) hits a pole at z={z}", index=j
            ) from exc
    return product


def barnes_g_ratio(numerator: complex, denominator: complex) -> complex:
    """Ratio G(numerator)/G(denominator) for an integer offset.

    Raises:
        ValueError: If the arguments differ by a non-integer.

    """
    offset = complex(numerator) - complex(denominator)
    k = round(offset.real)
    if abs(offset - k) > 1e-9:
        raise ValueError(f"Barnes G ratio needs an integer offset, got {offset}")

    if k >= 0:
        return gamma_product(denominator, k)
    return 1 / gamma_product(numerator, -k)


def bessel_j(nu: complex, x: complex) -> complex:
    """Bessel function of the first kind by its power series.

    Uses the term recursion
    term_{k+1} = term_k * (-x**2/4) / ((k+1)(nu+k+1)).

    Raises:
        DomainError: For x = 0 with Re(nu) < 0 (or a purely imaginary nu).
        ConvergenceError: If 200 terms do not reach relative tolerance 1e-14.

    """
    nu, x = complex(nu), complex(x)

    if x == 0:
        if nu == 0:
            return 1 + 0j
        if nu.real > 0:
            return 0j
        raise DomainError(f"J_nu(0) is undefined for nu={nu}")

    # negative integer order, J_{-m} = (-1)**m J_m
    m = nearest_integer(nu)
    if m < 0 and is_near_integer(nu, _POLE_TOLERANCE):
        return (-1) ** (-m) * bessel_j(-m, x)

    half = x / 2
    term = cmath.exp(nu * cmath.log(half)) * rgamma(nu + 1)
    quarter = -(half * half)
    total = term

    for k in range(_SERIES_TERMS):
        term *= quarter / ((k + 1) * (nu + k + 1))
        total += term
        # past the peak of the terms and below tolerance
        if k + 1 > abs(half) and abs(term) <= _SERIES_TOLERANCE * abs(total):
            return total
        if total == 0 and term == 0:
            return total

    raise ConvergenceError(
        f"Bessel series for nu={nu}, x={x} did not converge in {_SERIES_TERMS} terms"
    )


def bessel_y(nu: complex, x: complex) -> complex:
    """Bessel function of the second kind, Y = cot(pi nu) J_nu - csc(pi nu) J_{-nu}.

    Raises:
        IntegerOrderError: If nu is within 1e-10 of an integer.

    """
    nu = complex(nu)
    if is_near_integer(nu, Thresholds.get("integer_order")):
        raise IntegerOrderError(f"Bessel Y is not supported at integer order {nu}")

    angle = math.pi * nu
    return (cmath.cos(angle) * bessel_j(nu, x) - bessel_j(-nu, x)) / cmath.sin(angle)


def cylinder(nu: complex, x: complex, d1: complex, d2: complex) -> complex:
    """Cylinder function C_nu = d1 J_nu + d2 Y_nu."""
    value = 0j
    if d1 != 0:
        value += d1 * bessel_j(nu, x)
    if d2 != 0:
        value += d2 * bessel_y(nu, x)
    return value


def cylinder_derivative(nu: complex, x: complex, d1: complex, d2: complex) -> complex:
    """Derivative of C_nu from the identity C'_nu = (nu/x) C_nu - C_{nu+1}.

    Raises:
        DomainError: At x = 0.

    """
    if x == 0:
        raise DomainError("cylinder derivative is undefined at x=0")
    return (nu / x) * cylinder(nu, x, d1, d2) - cylinder(nu + 1, x, d1, d2)
