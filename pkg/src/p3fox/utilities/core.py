"""Core numeric helpers shared by the verification harnesses."""

from collections.abc import Callable

ScalarFunction = Callable[[complex], complex]


def richardson_derivatives(
    f: ScalarFunction, x: complex, step: float
) -> tuple[complex, complex]:
    """First and second derivative by Richardson-extrapolated central differences.

    Uses the 5-point stencil x, x +- h, x +- h/2 and one Richardson level,
    which cancels the h**2 error term of both central formulas.

    Args:
        f: Analytic scalar function.
        x: Evaluation point.
        step: Base step h.

    Returns:
        The pair (f'(x), f''(x)).

    """
    h = step
    half = step / 2
    f0 = f(x)
    fp, fm = f(x + h), f(x - h)
    fp2, fm2 = f(x + half), f(x - half)

    d1_h = (fp - fm) / (2 * h)
    d1_half = (fp2 - fm2) / (2 * half)
    d2_h = (fp - 2 * f0 + fm) / (h * h)
    d2_half = (fp2 - 2 * f0 + fm2) / (half * half)

    return (4 * d1_half - d1_h) / 3, (4 * d2_half - d2_h) / 3


def euler_operator_squared(f: ScalarFunction, x: complex, step: float) -> complex:
    """Evaluate (x d/dx)**2 f = x f' + x**2 f'' at x."""
    d1, d2 = richardson_derivatives(f, x, step)
    return x * d1 + x * x * d2


def five_point_derivative(f: ScalarFunction, x: complex, step: float) -> complex:
    """Classical fourth order 5-point first derivative."""
    return (
        -f(x + 2 * step) + 8 * f(x + step) - 8 * f(x - step) + f(x - 2 * step)
    ) / (12 * step)
