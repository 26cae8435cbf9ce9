"""Small-x series of u_n by undetermined coefficients on the lattice m + l*p.

Notes:
    The matched object is the cleared equation
    G[u] = x u u'' - x u'^2 + u u' - A u^3 - B u - x u^4 + x
    with A = alpha + 2n and B = -alpha + 2 + 2n. Its derivative part is the
    bilinear sum over key pairs c_i c_j (s_i - s_j)^2 x^(s_i + s_j - 1), which
    vanishes on a single monomial. For non-integer exponents the lead
    a x^p is stored at key (0, 1) and the residual at key (m, l) fixes the
    unknown at (m + 1, l - 1). For p = +-1 the lattice folds onto odd powers
    stored at keys (m, 0).
"""

import cmath
import logging
import math
from collections import defaultdict
from collections.abc import Iterable

from p3fox.api.asymptotics import u_regime
from p3fox.models.params import SolutionParams
from p3fox.models.series import KEYTYPE, LatticeSeries
from p3fox.utilities.errors import (
    DomainError,
    ParityError,
    ResonanceError,
    ZeroLeadError,
)
from p3fox.utilities.global_instance import Thresholds

logger = logging.getLogger(__name__)

DEFAULT_BUDGET = 12.0
MAX_LEVELS = 32
_COLLISION = 1e-12
_EDGE = 1e-9

TERMS = dict[KEYTYPE, complex]


# ===== construction helpers


def _min_order(*orders: float | None) -> float | None:
    known = [order for order in orders if order is not None]
    return min(known) if known else None


def make_series(
    p: complex,
    terms: dict[KEYTYPE, complex],
    parity: int,
    order: float | None = None,
) -> LatticeSeries:
    """Series with denormal coefficients and out-of-order keys dropped."""
    drop = Thresholds.get("drop")
    kept = {
        key: complex(value)
        for key, value in terms.items()
        if abs(value) > drop
        and (order is None or (key[0] + key[1] * p).real <= order + _COLLISION)
    }
    return LatticeSeries(p=p, terms=kept, parity=parity, order=order)


def monomial(p: complex, key: KEYTYPE, coefficient: complex = 1) -> LatticeSeries:
    """One-term series coefficient * x**(m + l*p)."""
    return make_series(p, {key: coefficient}, (key[0] + key[1]) % 2)


def truncate(series: LatticeSeries, order: float) -> LatticeSeries:
    """Keep the terms with real exponent up to order."""
    return make_series(
        series.p, series.terms, series.parity, _min_order(series.order, order)
    )


def check_resonance(series: LatticeSeries):
    """Raise when two distinct keys share a numeric exponent.

    Raises:
        ResonanceError: On a collision within 1e-12.

    """
    exponents = sorted(
        ((series.exponent(key), key) for key in series.terms),
        key=lambda item: (item[0].real, item[0].imag),
    )
    for (left, left_key), (right, right_key) in zip(exponents, exponents[1:]):
        if abs(left - right) < _COLLISION:
            raise ResonanceError(
                f"keys {left_key} and {right_key} share exponent {left} "
                f"for p={series.p}"
            )


def _check_compatible(a: LatticeSeries, b: LatticeSeries):
    if a.p != b.p:
        raise DomainError(f"series bases differ, {a.p} against {b.p}")


# ===== arithmetic


def series_add(a: LatticeSeries, b: LatticeSeries) -> LatticeSeries:
    """Termwise sum of two series of the same parity.

    Raises:
        ParityError: When the parities differ.

    """
    _check_compatible(a, b)
    if a.parity != b.parity:
        raise ParityError(f"cannot add parity {a.parity} to parity {b.parity}")

    terms: dict[KEYTYPE, complex] = defaultdict(complex, a.terms)
    for key, value in b.terms.items():
        terms[key] += value
    return make_series(a.p, terms, a.parity, _min_order(a.order, b.order))


def series_scale(a: LatticeSeries, factor: complex) -> LatticeSeries:
    """Series multiplied by a constant."""
    return make_series(
        a.p,
        {key: value * factor for key, value in a.terms.items()},
        a.parity,
        a.order,
    )


def _convolve(a: TERMS, b: TERMS, level: int | None = None) -> TERMS:
    """Key-additive product of raw term maps, optionally only at one m."""
    out: TERMS = defaultdict(complex)
    if level is None:
        for (ma, la), ca in a.items():
            for (mb, lb), cb in b.items():
                out[(ma + mb, la + lb)] += ca * cb
        return out

    by_level: dict[int, list[tuple[int, complex]]] = defaultdict(list)
    for (mb, lb), cb in b.items():
        by_level[mb].append((lb, cb))
    for (ma, la), ca in a.items():
        for lb, cb in by_level.get(level - ma, ()):
            out[(level, la + lb)] += ca * cb
    return out


def series_product(
    a: LatticeSeries, b: LatticeSeries, order: float | None = None
) -> LatticeSeries:
    """Product of two series on the same lattice.

    Args:
        a: Left factor.
        b: Right factor.
        order: Optional truncation applied on top of the order implied by
            the factors.

    Returns:
        The product, exact up to min(a.order + low(b), b.order + low(a)).

    Raises:
        ResonanceError: When two result keys collide numerically.

    """
    _check_compatible(a, b)
    implied = _min_order(
        None if a.order is None else a.order + b.low(),
        None if b.order is None else b.order + a.low(),
        order,
    )
    product = make_series(
        a.p, _convolve(a.terms, b.terms), (a.parity + b.parity) % 2, implied
    )
    check_resonance(product)
    return product


def _lead(a: LatticeSeries) -> tuple[KEYTYPE, complex]:
    ordered = a.ordered()
    if not ordered:
        raise ZeroLeadError("the zero series has no inverse")
    key, value = ordered[0]
    if len(ordered) > 1:
        other = a.exponent(ordered[1][0]).real
        if abs(other - a.exponent(key).real) < _COLLISION:
            raise ZeroLeadError(
                f"keys {key} and {ordered[1][0]} tie for the leading exponent"
            )
    return key, value


def series_inverse(a: LatticeSeries, budget: float) -> LatticeSeries:
    """Reciprocal 1/a by the Neumann sum over (1 - a/lead).

    Args:
        a: Series with a unique minimal-exponent term.
        budget: Relative order; a * inverse = 1 + O(x**budget).

    Raises:
        ZeroLeadError: On an empty series or a tied leading exponent.

    """
    (m0, l0), c0 = _lead(a)
    s0 = a.exponent((m0, l0)).real

    # a / lead - 1, all exponents strictly positive
    rest: TERMS = {
        (m - m0, l - l0): value / c0
        for (m, l), value in a.terms.items()
        if (m, l) != (m0, l0)
    }
    relative = budget if a.order is None else min(budget, a.order - s0)

    total: TERMS = defaultdict(complex)
    total[(0, 0)] = 1
    power: TERMS = {(0, 0): 1}
    if rest:
        gap = min((m + l * a.p).real for m, l in rest)
        for k in range(1, int(math.floor(relative / gap)) + 1):
            power = {
                key: value
                for key, value in _convolve(power, rest).items()
                if (key[0] + key[1] * a.p).real <= relative + _COLLISION
            }
            sign = -1 if k % 2 else 1
            for key, value in power.items():
                total[key] += sign * value

    shifted = {(m - m0, l - l0): value / c0 for (m, l), value in total.items()}
    return make_series(a.p, shifted, a.parity, relative - s0)


def series_derivative(a: LatticeSeries) -> LatticeSeries:
    """Termwise d/dx, key (m, l) to (m - 1, l) with factor m + l*p."""
    terms = {
        (m - 1, l): (m + l * a.p) * value for (m, l), value in a.terms.items()
    }
    order = None if a.order is None else a.order - 1
    return make_series(a.p, terms, 1 - a.parity, order)


def series_eval(a: LatticeSeries, x: complex) -> complex:
    """Sum of the series at x on the principal branch.

    Raises:
        DomainError: At x = 0.

    """
    if x == 0:
        raise DomainError("series_eval is undefined at x=0")
    log_x = cmath.log(x)
    return sum(
        (value * cmath.exp(a.exponent(key) * log_x) for key, value in a.ordered()),
        start=0j,
    )


# ===== the cleared equation


def _cleared_constants(params: SolutionParams) -> tuple[complex, complex]:
    return params.alpha + 2 * params.n, params.beta()


def cleared_residual(series: LatticeSeries, params: SolutionParams) -> LatticeSeries:
    """G[u] as a lattice series, built from the series arithmetic."""
    a_const, b_const = _cleared_constants(params)
    p = series.p
    x = monomial(p, (1, 0))
    du = series_derivative(series)
    d2u = series_derivative(du)
    square = series_product(series, series)

    parts: Iterable[LatticeSeries] = (
        series_product(x, series_product(series, d2u)),
        series_scale(series_product(x, series_product(du, du)), -1),
        series_product(series, du),
        series_scale(series_product(square, series), -a_const),
        series_scale(series, -b_const),
        series_scale(series_product(x, series_product(square, square)), -1),
        x,
    )
    total = make_series(p, {}, 1)
    for part in parts:
        total = series_add(total, part)
    return total


def cleared_residual_value(
    series: LatticeSeries, params: SolutionParams, x: complex
) -> complex:
    """G[u](x) for the truncated series, derivatives taken termwise."""
    a_const, b_const = _cleared_constants(params)
    u = series_eval(series, x)
    du = series_eval(series_derivative(series), x)
    d2u = series_eval(series_derivative(series_derivative(series)), x)
    return (
        x * u * d2u
        - x * du**2
        + u * du
        - a_const * u**3
        - b_const * u
        - x * u**4
        + x
    )


def _modulus(series: LatticeSeries) -> LatticeSeries:
    return make_series(
        series.p,
        {key: abs(value) for key, value in series.terms.items()},
        series.parity,
        series.order,
    )


def cleared_residual_scale(
    series: LatticeSeries, params: SolutionParams
) -> LatticeSeries:
    """Per key, the sum of moduli of every contribution that enters G[u].

    Coefficients of G are sums of products whose size grows with the
    exponent, so their rounding error is bounded relative to this series.
    """
    a_const, b_const = _cleared_constants(params)
    x = monomial(series.p, (1, 0))
    u = _modulus(series)
    du = _modulus(series_derivative(series))
    d2u = _modulus(series_derivative(series_derivative(series)))
    square = series_product(u, u)

    parts: Iterable[LatticeSeries] = (
        series_product(x, series_product(u, d2u)),
        series_product(x, series_product(du, du)),
        series_product(u, du),
        series_scale(series_product(square, u), abs(a_const)),
        series_scale(u, abs(b_const)),
        series_product(x, series_product(square, square)),
        x,
    )
    total = make_series(series.p, {}, 1)
    for part in parts:
        total = series_add(total, part)
    return total


def resolved_order(series: LatticeSeries) -> float:
    """Real exponent up to which G[u] of the series is fully determined."""
    if series.order is None:
        return math.inf
    return series.order + series.p.real - 1


def residual_ratio(series: LatticeSeries, params: SolutionParams) -> float:
    """Largest |G coefficient| over its contribution scale on the resolved keys."""
    residual = cleared_residual(series, params)
    scale = cleared_residual_scale(series, params)
    window = resolved_order(series)

    worst = 0.0
    for key, value in residual.terms.items():
        if residual.exponent(key).real > window + _COLLISION:
            continue
        weight = scale.terms.get(key, 0j).real
        worst = max(worst, abs(value) / weight if weight > 0 else math.inf)
    return worst


def _residual_level(
    terms: TERMS, p: complex, a_const: complex, b_const: complex, level: int
) -> TERMS:
    """Coefficients of G at keys with integer part level."""
    out: TERMS = defaultdict(complex)

    items = [(key, value, key[0] + key[1] * p) for key, value in terms.items()]
    for i, (key_i, c_i, s_i) in enumerate(items):
        for key_j, c_j, s_j in items[i + 1 :]:
            if key_i[0] + key_j[0] - 1 == level:
                out[(level, key_i[1] + key_j[1])] += c_i * c_j * (s_i - s_j) ** 2

    square = _convolve(terms, terms)
    for key, value in _convolve(square, terms, level).items():
        out[key] -= a_const * value
    for key, value in terms.items():
        if key[0] == level:
            out[key] -= b_const * value
    for (m, l), value in _convolve(square, square, level - 1).items():
        out[(m + 1, l)] -= value
    if level == 1:
        out[(1, 0)] += 1
    return out


# ===== solver


def _solve_lattice(
    lead: complex, p: complex, a_const: complex, b_const: complex, budget: float
) -> tuple[TERMS, float]:
    limit = p.real + budget
    spread = 1 - abs(p.real)
    levels = int(math.floor(budget / spread))
    order = limit
    if levels > MAX_LEVELS:
        levels = MAX_LEVELS
        order = min(limit, p.real + levels * spread)
        logger.warning(
            "p=%s is close to a window edge, series exact only up to x^%.3f",
            p,
            order,
        )

    terms: TERMS = {(0, 1): lead}
    for level in range(levels):
        residual = _residual_level(terms, p, a_const, b_const, level)
        for (m, l), value in sorted(residual.items()):
            target = (m + 1, l - 1)
            s = target[0] + target[1] * p
            if s.real > order + _COLLISION:
                continue
            factor = lead * (s - p) ** 2
            if abs(factor) < 1e-12 * abs(lead):
                raise ResonanceError(
                    f"solvability factor vanishes at key {target}, p={p}"
                )
            if abs(value) <= Thresholds.get("drop"):
                continue
            terms[target] = -value / factor
            logger.debug("key %s coefficient %s", target, terms[target])
    return terms, order


def _free_exponents(p_int: int, a_const: complex, b_const: complex) -> list[complex]:
    if p_int == 1:
        return [1 + b_const, 1 - b_const]
    return [-1 + a_const, -1 - a_const]


def _solve_integer(
    lead: complex, p_int: int, a_const: complex, b_const: complex, budget: float
) -> tuple[TERMS, float]:
    limit = p_int + budget
    for free in _free_exponents(p_int, a_const, b_const):
        nearest = round(free.real)
        on_lattice = abs(free - nearest) < _EDGE and nearest % 2 == 1
        if p_int + _EDGE < free.real < limit and not on_lattice:
            # free-parameter term off the odd-power lattice
            logger.warning(
                "series stops below the free exponent %s of the solution family",
                free,
            )
            limit = free.real - _EDGE

    terms: TERMS = {(p_int, 0): lead}
    p = complex(p_int)
    target = p_int + 2
    while target <= limit + _COLLISION:
        # residual order fed by the unknown at x**target
        level = target if p_int == 1 else target - 2
        value = _residual_level(terms, p, a_const, b_const, level).get((level, 0), 0)
        if p_int == 1:
            factor = lead * (target - 1) ** 2 - b_const
            scale = abs(lead) * (target - 1) ** 2 + abs(b_const)
        else:
            factor = (
                lead * (target + 1) ** 2 - 3 * a_const * lead**2 - 4 * lead**3
            )
            scale = abs(lead) * (target + 1) ** 2 + abs(lead) ** 2 * (
                3 * abs(a_const) + 4 * abs(lead)
            )
        if abs(factor) < 1e-12 * scale:
            raise ResonanceError(
                f"logarithmic term at x^{target}, solvability factor vanishes"
            )
        if abs(value) > Thresholds.get("drop"):
            terms[(target, 0)] = -value / factor
            logger.debug("x^%d coefficient %s", target, terms[(target, 0)])
        target += 2
    return terms, limit


def expand_u(params: SolutionParams, budget: float = DEFAULT_BUDGET) -> LatticeSeries:
    """Small-x series of u_n(x, alpha) up to x**(Re p + budget).

    Args:
        params: Solution parameters, alpha off the window edges.
        budget: Exponent range above Re p to resolve.

    Returns:
        Series whose leading coefficient is q(alpha, n) 2**(-p).

    Raises:
        BoundaryAlphaError: When alpha sits on a window edge.
        ResonanceError: On a vanishing solvability factor or a collision of
            lattice exponents.

    """
    if budget < 0:
        raise DomainError(f"budget must be nonnegative, got {budget}")

    regime = u_regime(params)
    p = complex(regime.exponent)
    lead = regime.coefficient * cmath.exp(-p * math.log(2))
    a_const, b_const = _cleared_constants(params)

    if regime.case_label in (1, 4):
        p_int = 1 if regime.case_label == 1 else -1
        terms, order = _solve_integer(lead, p_int, a_const, b_const, budget)
        series = make_series(complex(p_int), terms, 1, order)
    else:
        terms, order = _solve_lattice(lead, p, a_const, b_const, budget)
        series = make_series(p, terms, 1, order)

    check_resonance(series)
    logger.info(
        "expanded u_%d at alpha=%s: case %d, p=%s, %d terms up to x^%.3f",
        params.n,
        params.alpha,
        regime.case_label,
        series.p,
        len(series.terms),
        order,
    )
    return series


def leading_key(series: LatticeSeries) -> KEYTYPE:
    """Key carrying the leading term, (0, 1) or (+-1, 0) on folded lattices."""
    return series.ordered()[0][0]
