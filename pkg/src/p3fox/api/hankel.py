"""Determinants of cylinder functions and the identities they satisfy.

Notes:
    Matrices are numpy complex arrays. The Hankel matrix of Delta_n has
    entries C_{alpha/2 - j + k}(x) for j, k = 0..n-1.
"""

import cmath
import logging
import math
from collections.abc import Sequence

import numpy as np
from numpy.typing import ArrayLike, NDArray

from p3fox.api.special import cylinder, cylinder_derivative, gamma
from p3fox.utilities.core import euler_operator_squared
from p3fox.utilities.errors import DeterminantOverflowError, DomainError, ShapeError
from p3fox.utilities.global_instance import RULE, RuleCache

logger = logging.getLogger(__name__)

ComplexMatrix = NDArray[np.complex128]

QUADRATURE_NODES = 64


def _as_square(m: ArrayLike) -> ComplexMatrix:
    matrix = np.array(m, dtype=np.complex128)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise ShapeError(f"Expected a square matrix, got shape {matrix.shape}")
    return matrix


def determinant(m: ArrayLike) -> complex:
    """Determinant by LU elimination with partial pivoting on the modulus.

    Args:
        m: Square complex matrix, 0x0 allowed.

    Returns:
        The determinant, 1 for the empty matrix.

    Raises:
        ShapeError: For a non square input.
        DeterminantOverflowError: If the product of pivots leaves the
            double precision range.

    """
    lu = _as_square(m) if np.size(m) else np.zeros((0, 0), dtype=np.complex128)
    size = lu.shape[0]
    sign = 1
    det = 1 + 0j

    for col in range(size):
        pivot_row = col + int(np.argmax(np.abs(lu[col:, col])))
        pivot = lu[pivot_row, col]
        if pivot == 0:
            return 0j

        if pivot_row != col:
            lu[[col, pivot_row]] = lu[[pivot_row, col]]
            sign = -sign

        # eliminate below the pivot
        factors = lu[col + 1 :, col] / pivot
        lu[col + 1 :, col:] -= np.outer(factors, lu[col, col:])
        det *= pivot

    det *= sign
    if not cmath.isfinite(det):
        raise DeterminantOverflowError(f"Determinant of size {size} overflowed")
    return complex(det)


def hankel_matrix(n: int, alpha: complex, x: complex, d1: complex, d2: complex) -> ComplexMatrix:
    """The n x n matrix {C_{alpha/2 - j + k}(x)}."""
    nu = alpha / 2
    # entries depend only on k - j, one cylinder call per diagonal
    diagonals = {
        offset: cylinder(nu + offset, x, d1, d2) for offset in range(1 - n, n)
    }
    matrix = np.empty((n, n), dtype=np.complex128)
    for j in range(n):
        for k in range(n):
            matrix[j, k] = diagonals[k - j]
    return matrix


def delta(n: int, alpha: complex, x: complex, d1: complex, d2: complex) -> complex:
    """Hankel determinant Delta_n(x, alpha), with Delta_0 = 1."""
    if n < 0:
        raise DomainError(f"n must be non-negative, got {n}")
    if x == 0:
        raise DomainError("Delta_n is undefined at x=0")
    if n == 0:
        return 1 + 0j
    return determinant(hankel_matrix(n, alpha, x, d1, d2))


def delta_derivative(
    n: int, alpha: complex, x: complex, d1: complex, d2: complex
) -> complex:
    """Derivative d/dx Delta_n as a sum of row-differentiated determinants."""
    if x == 0:
        raise DomainError("Delta_n is undefined at x=0")
    if n == 0:
        return 0j

    nu = alpha / 2
    matrix = hankel_matrix(n, alpha, x, d1, d2)
    derivatives = {
        offset: cylinder_derivative(nu + offset, x, d1, d2)
        for offset in range(1 - n, n)
    }

    total = 0j
    for row in range(n):
        replaced = matrix.copy()
        replaced[row] = [derivatives[k - row] for k in range(n)]
        total += determinant(replaced)
    return total


def tau(n: int, alpha: complex, x: complex, d1: complex, d2: complex) -> complex:
    """Tau function tau_n = x**(n(n-1)) (-1)**(n(n-1)/2) Delta_n."""
    power = n * (n - 1)
    sign = -1 if (power // 2) % 2 else 1
    return sign * complex(x) ** power * delta(n, alpha, x, d1, d2)


def _euler_power_terms(order: int, nu: complex) -> dict[tuple[int, int], complex]:
    """(x d/dx)**order C_nu as {(a, m): c} meaning sum c x**a C_{nu+m}."""
    terms: dict[tuple[int, int], complex] = {(0, 0): 1 + 0j}
    for _ in range(order):
        updated: dict[tuple[int, int], complex] = {}
        for (a, m), c in terms.items():
            # x d/dx [x**a C_{nu+m}] = (a + nu + m) x**a C_{nu+m} - x**(a+1) C_{nu+m+1}
            updated[(a, m)] = updated.get((a, m), 0j) + c * (a + nu + m)
            updated[(a + 1, m + 1)] = updated.get((a + 1, m + 1), 0j) - c
        terms = updated
    return terms


def tau_wronskian(
    n: int, alpha: complex, x: complex, d1: complex, d2: complex
) -> complex:
    """Tau function in Wronskian form det{(x d/dx)**(i+j) tau_1}.

    Each entry is evaluated exactly as a finite combination of cylinder
    functions, no numerical differentiation is involved.
    """
    if x == 0:
        raise DomainError("tau_n is undefined at x=0")
    if n == 0:
        return 1 + 0j

    nu = alpha / 2
    values = {m: cylinder(nu + m, x, d1, d2) for m in range(2 * n - 1)}

    entries: list[complex] = []
    for order in range(2 * n - 1):
        terms = _euler_power_terms(order, nu)
        entries.append(
            sum(c * complex(x) ** a * values[m] for (a, m), c in terms.items())
        )

    matrix = np.array(
        [[entries[i + j] for j in range(n)] for i in range(n)], dtype=np.complex128
    )
    return determinant(matrix)


def toda_residual(
    n: int, alpha: complex, x: complex, d1: complex, d2: complex, step: float = 1e-3
) -> float:
    """Relative residual of (x d/dx)**2 ln tau_n = tau_{n+1} tau_{n-1} / tau_n**2."""
    if n < 1:
        raise DomainError(f"Toda residual needs n >= 1, got {n}")

    reference = tau(n, alpha, x, d1, d2)

    # log of a ratio close to 1 stays on the principal branch
    def log_tau(y: complex) -> complex:
        return cmath.log(tau(n, alpha, y, d1, d2) / reference)

    lhs = euler_operator_squared(log_tau, x, step * max(1.0, abs(x)))
    rhs = tau(n + 1, alpha, x, d1, d2) * tau(n - 1, alpha, x, d1, d2) / reference**2
    return abs(lhs - rhs) / abs(rhs)


# ===== MOMENT DETERMINANTS


def laguerre_moment(gamma_: complex, j: int) -> complex:
    """Moment mu_j = Gamma(gamma + j + 1) of the weight z**gamma exp(-z)."""
    if complex(gamma_).real + j <= -1:
        raise DomainError(f"Moment {j} diverges for gamma={gamma_}")
    return gamma(gamma_ + j + 1)


def _moment_matrix(gamma_: complex, size: int) -> ComplexMatrix:
    moments = [laguerre_moment(gamma_, j) for j in range(2 * size - 1)]
    return np.array(
        [[moments[j + k] for k in range(size)] for j in range(size)],
        dtype=np.complex128,
    )


def laguerre_hankel_numeric(gamma_: complex, n: int) -> complex:
    """Determinant of the (n+1) x (n+1) moment matrix {mu_{j+k}}."""
    if complex(gamma_).real <= -1:
        raise DomainError(f"Laguerre weight needs Re(gamma) > -1, got {gamma_}")
    return determinant(_moment_matrix(gamma_, n + 1))


def laguerre_hankel_closed(gamma_: complex, n: int) -> complex:
    """Closed form prod_{j=0}^{n} Gamma(j + gamma + 1) Gamma(j + 1)."""
    value = 1 + 0j
    for j in range(n + 1):
        value *= gamma(j + gamma_ + 1) * gamma(j + 1)
    return value


def desnanot_jacobi_residual(m: ArrayLike, i: int, j: int) -> float:
    """Residual of det(A) det(A_ij|ij) = det(A_i|i) det(A_j|j) - det(A_i|j) det(A_j|i).

    Args:
        m: Square matrix of size >= 2.
        i: First index, 0 based.
        j: Second index, 0 based, different from i.

    Returns:
        |LHS - RHS| / (1 + |RHS|).

    """
    matrix = _as_square(m)
    size = matrix.shape[0]
    if size < 2 or i == j or not (0 <= i < size and 0 <= j < size):
        raise ShapeError(f"Invalid Desnanot-Jacobi indices ({i}, {j}) for size {size}")

    def minor(rows: Sequence[int], cols: Sequence[int]) -> complex:
        keep_rows = [r for r in range(size) if r not in rows]
        keep_cols = [c for c in range(size) if c not in cols]
        return determinant(matrix[np.ix_(keep_rows, keep_cols)])

    lhs = determinant(matrix) * minor((i, j), (i, j))
    rhs = minor((i,), (i,)) * minor((j,), (j,)) - minor((i,), (j,)) * minor((j,), (i,))
    return abs(lhs - rhs) / (1 + abs(rhs))


def vandermonde_residual(xs: Sequence[complex]) -> float:
    """Relative difference between det{x_j**k} and prod_{j<k} (x_k - x_j)."""
    points = [complex(x) for x in xs]
    size = len(points)
    matrix = np.array(
        [[point**k for k in range(size)] for point in points], dtype=np.complex128
    )
    numeric = determinant(matrix)

    closed = 1 + 0j
    for j in range(size):
        for k in range(j + 1, size):
            closed *= points[k] - points[j]

    scale = max(abs(closed), 1e-300)
    return abs(numeric - closed) / scale


# ===== QUADRATURE


def _laguerre_values(order: int, gamma_: float, x: NDArray[np.float64]):
    """Generalized Laguerre L_order and L_{order-1} by the three term recurrence."""
    previous = np.zeros_like(x)
    current = np.ones_like(x)
    for k in range(order):
        previous, current = current, (
            (2 * k + 1 + gamma_ - x) * current - (k + gamma_) * previous
        ) / (k + 1)
    return current, previous


def gauss_laguerre(nodes: int, gamma_: float) -> RULE:
    """Gauss-Laguerre rule for the weight x**gamma exp(-x) on [0, inf).

    Nodes start from the Golub-Welsch eigenvalues of the Jacobi matrix and
    are polished by Newton iteration on the Laguerre recurrence. Rules are
    memoized in RuleCache.

    Returns:
        The pair (nodes, weights).

    """
    cache = RuleCache.get_cache()
    key = (nodes, float(gamma_))
    if key in cache:
        return cache[key]

    k = np.arange(nodes, dtype=np.float64)
    diagonal = 2 * k + 1 + gamma_
    off = np.sqrt(k[1:] * (k[1:] + gamma_))
    jacobi = np.diag(diagonal) + np.diag(off, 1) + np.diag(off, -1)
    x = np.linalg.eigvalsh(jacobi)

    for _ in range(8):
        value, previous = _laguerre_values(nodes, gamma_, x)
        slope = (nodes * value - (nodes + gamma_) * previous) / x
        step = value / slope
        x = x - step
        if np.all(np.abs(step) <= 1e-15 * x):
            break

    following, _ = _laguerre_values(nodes + 1, gamma_, x)
    log_scale = math.lgamma(nodes + gamma_ + 1) - math.lgamma(nodes + 1)
    weights = math.exp(log_scale) * x / ((nodes + 1) ** 2 * following**2)

    logger.debug("Gauss-Laguerre rule built: nodes=%d gamma=%g", nodes, gamma_)
    cache[key] = (x, weights)
    return x, weights


def andreief_residual(n: int, gamma_: float) -> float:
    """Relative residual of the Andreief identity for monomial systems.

    Compares the n-fold Gauss-Laguerre quadrature of
    det{x_k**j}**2 prod w(x_k) with n! det{mu_{j+k}}.
    """
    if n not in (1, 2, 3):
        raise DomainError(f"Andreief check supports n in {{1, 2, 3}}, got {n}")
    if gamma_ <= -1:
        raise DomainError(f"Laguerre weight needs gamma > -1, got {gamma_}")

    x, w = gauss_laguerre(QUADRATURE_NODES, gamma_)

    # every n-tuple of nodes at once
    points = np.stack(
        [grid.ravel() for grid in np.meshgrid(*([x] * n), indexing="ij")], axis=1
    )
    weights = np.prod(
        np.stack([grid.ravel() for grid in np.meshgrid(*([w] * n), indexing="ij")], axis=1),
        axis=1,
    )
    powers = points[:, None, :] ** np.arange(n)[None, :, None]
    dets = np.linalg.det(powers)
    quadrature = float(np.sum(weights * dets * dets))

    exact = math.factorial(n) * determinant(_moment_matrix(gamma_, n)).real
    return abs(quadrature - exact) / abs(exact)
