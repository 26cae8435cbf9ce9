"""Property and identity suite behind the verify subcommand.

Every check returns a CheckResult with its worst observed deviation.
P3FOX_VERIFY_FAST=1 shrinks the grids.
"""

import cmath
import logging
import math
import os
from collections.abc import Callable
from itertools import product

import numpy as np

from p3fox.api.asymptotics import (
    coefficient_q,
    coefficient_q_composition,
    critical_r,
    delta_edges,
    delta_leading_value,
    exponent_e,
    exponent_e_composition,
    leading_power_scan,
    power_p,
    u_edges,
    u_leading,
)
from p3fox.api.expansion import expand_u, residual_ratio, series_eval
from p3fox.api.hankel import (
    andreief_residual,
    delta,
    desnanot_jacobi_residual,
    laguerre_hankel_closed,
    laguerre_hankel_numeric,
    toda_residual,
    vandermonde_residual,
)
from p3fox.api.ode import chart_switch, trace
from p3fox.api.painleve import (
    backlund_b1,
    backlund_b2,
    jet_residual,
    u0,
    u_n_backlund,
    u_n_determinant,
    u_n_recurrence,
)
from p3fox.api.special import bessel_j, bessel_y
from p3fox.models.params import JetPoint, PIIIParams, SolutionParams
from p3fox.models.report import CheckResult, VerifyReport
from p3fox.models.trajectory import ChartState
from p3fox.utilities.common import relative_difference
from p3fox.utilities.errors import DegenerateError, PoleError, SingularError

logger = logging.getLogger(__name__)

FAST_ENV = "P3FOX_VERIFY_FAST"

CROSS_ALPHAS = (0.98, -0.5, 3.5, -223 / 225)
CROSS_POINTS = (0.5, 1.0, 2.0)
D_PAIR = (0.55, 0.71)
RESIDUAL_BAND = (0.1, 10.0)
WRONSKIAN_ORDERS = (0.3, 0.49, 1.3)
WRONSKIAN_POINTS = (0.1, 1.0, 5.0, 10.0)
TODA_POINTS = (0.8, 1.0, 1.5)
HALVING_POINTS = (1e-3, 5e-4, 2.5e-4)

_SCREENED = (PoleError, DegenerateError, SingularError)


def fast_mode() -> bool:
    """True when P3FOX_VERIFY_FAST=1."""
    return os.environ.get(FAST_ENV, "0") == "1"


def _result(name: str, worst: float, cases: int, tolerance: float) -> CheckResult:
    passed = cases > 0 and worst <= tolerance
    return CheckResult(
        name=name,
        passed=passed,
        cases=cases,
        worst=worst,
        detail=f"worst {worst:.3e} against {tolerance:.0e} over {cases} cases",
    )


def _solution(n: int, alpha: float, d: tuple[complex, complex] = D_PAIR) -> SolutionParams:
    return SolutionParams(n=n, alpha=alpha, d1=d[0], d2=d[1])


def _screened(params: SolutionParams, x: float) -> bool:
    n, alpha, d1, d2 = params.n, params.alpha, params.d1, params.d2
    values = (
        delta(n + 1, alpha, x, d1, d2),
        delta(n, alpha, x, d1, d2),
        delta(n + 1, alpha - 2, x, d1, d2),
        delta(n, alpha - 2, x, d1, d2),
    )
    return all(abs(value) > 1e-6 for value in values)


# ===== painleve


def check_cross_paths(fast: bool) -> CheckResult:
    worst, cases = 0.0, 0
    for n, alpha, x in product(range(3 if fast else 6), CROSS_ALPHAS, CROSS_POINTS):
        params = _solution(n, alpha)
        if not _screened(params, x):
            continue
        try:
            by_determinant = u_n_determinant(params, x).u
            by_backlund = u_n_backlund(params, x).u
            by_recurrence = u_n_recurrence(params, x).u
        except _SCREENED:
            continue
        worst = max(
            worst,
            relative_difference(by_determinant, by_backlund),
            relative_difference(by_determinant, by_recurrence),
        )
        cases += 1
    return _result("cross_paths", worst, cases, 1e-8)


def check_residuals(fast: bool) -> CheckResult:
    """Exact-jet residual of every path on the cross-path grid.

    Points where |u| leaves [0.1, 10] sit near a pole or zero of u_n and are
    screened with the determinant ones.
    """
    paths = (u_n_determinant, u_n_backlund, u_n_recurrence)
    worst, cases = 0.0, 0
    for n, alpha, x in product(range(3 if fast else 6), CROSS_ALPHAS, CROSS_POINTS):
        params = _solution(n, alpha)
        if not _screened(params, x):
            continue
        for path in paths:

            def jet_of_x(y: complex, path=path) -> JetPoint:
                return path(params, y)

            try:
                u = jet_of_x(x).u
                if not RESIDUAL_BAND[0] <= abs(u) <= RESIDUAL_BAND[1]:
                    continue
                residual = jet_residual(jet_of_x, x, params.piii())
            except _SCREENED:
                continue
            if residual > 1e-5:
                logger.debug(
                    "%s residual %.2e at n=%d alpha=%g x=%g",
                    path.__name__, residual, n, alpha, x,
                )
            worst = max(worst, residual)
            cases += 1
    return _result("piii_residual", worst, cases, 1e-5)


def check_backlund_laws(fast: bool) -> CheckResult:
    """B1 B2 = B2 B1 to 1e-9 and the shift law B2 u_n(alpha) = u_n(alpha-2) to 1e-8."""
    commute, shift, cases = 0.0, 0.0, 0
    for n in range(2 if fast else 4):
        params = _solution(n, 0.98)
        x = 1.3
        try:
            jet = u_n_backlund(params, x)
            level = params.piii()
            left, _ = backlund_b1(*backlund_b2(jet, level))
            right, _ = backlund_b2(*backlund_b1(jet, level))
            shifted, _ = backlund_b2(jet, level)
            expected = u_n_backlund(params.with_alpha(params.alpha - 2), x)
        except _SCREENED:
            continue
        commute = max(commute, relative_difference(left.u, right.u))
        shift = max(shift, relative_difference(shifted.u, expected.u))
        cases += 1
    return CheckResult(
        name="backlund_laws",
        passed=cases > 0 and commute <= 1e-9 and shift <= 1e-8,
        cases=cases,
        worst=max(commute, shift),
        detail=(
            f"commutation {commute:.3e} against 1e-09, shift {shift:.3e} against 1e-08"
            f" over {cases} cases"
        ),
    )


# ===== special and hankel


def check_bessel_wronskian(fast: bool) -> CheckResult:
    """J_{nu+1} Y_nu - J_nu Y_{nu+1} = 2/(pi x), absolute deviation."""
    worst, cases = 0.0, 0
    for nu, x in product(WRONSKIAN_ORDERS, WRONSKIAN_POINTS):
        wronskian = bessel_j(nu + 1, x) * bessel_y(nu, x) - bessel_j(nu, x) * bessel_y(
            nu + 1, x
        )
        worst = max(worst, abs(wronskian - 2 / (math.pi * x)))
        cases += 1
    return _result("bessel_wronskian", worst, cases, 1e-10)


def check_desnanot_jacobi(fast: bool, rng: np.random.Generator) -> CheckResult:
    worst, count = 0.0, 20 if fast else 100
    for _ in range(count):
        size = int(rng.integers(3, 7))
        matrix = rng.normal(size=(size, size)) + 1j * rng.normal(size=(size, size))
        i, j = (int(k) for k in rng.choice(size, size=2, replace=False))
        worst = max(worst, desnanot_jacobi_residual(matrix, i, j))
    return _result("desnanot_jacobi", worst, count, 1e-11)


def check_vandermonde(fast: bool, rng: np.random.Generator) -> CheckResult:
    worst, count = 0.0, 10 if fast else 50
    for _ in range(count):
        size = int(rng.integers(2, 7))
        points = rng.uniform(-1.5, 1.5, size) + 1j * rng.uniform(-1.5, 1.5, size)
        worst = max(worst, vandermonde_residual(list(points)))
    return _result("vandermonde", worst, count, 1e-11)


def check_andreief(fast: bool) -> CheckResult:
    worst, cases = 0.0, 0
    for n, gamma_ in product((1, 2) if fast else (1, 2, 3), (0.3, 1.7)):
        worst = max(worst, andreief_residual(n, gamma_))
        cases += 1
    return _result("andreief", worst, cases, 1e-8)


def check_laguerre_closed_form(fast: bool) -> CheckResult:
    worst, cases = 0.0, 0
    for n, gamma_ in product(range(1, 4 if fast else 7), (0.3, 1.7, 2.5)):
        worst = max(
            worst,
            relative_difference(
                laguerre_hankel_numeric(gamma_, n), laguerre_hankel_closed(gamma_, n)
            ),
        )
        cases += 1
    return _result("laguerre_closed_form", worst, cases, 1e-9)


def check_toda(fast: bool) -> CheckResult:
    worst, cases = 0.0, 0
    for n, x in product((1, 2) if fast else (1, 2, 3), TODA_POINTS):
        worst = max(worst, toda_residual(n, 0.98, x, *D_PAIR))
        cases += 1
    return _result("toda", worst, cases, 1e-5)


# ===== asymptotics


def _alpha_grid(n: int, points: int) -> list[float]:
    grid = np.linspace(-2 * n - 4, 2 * n + 4, points)
    return [
        float(alpha) for alpha in grid if abs(alpha - 2 * round(alpha / 2)) >= 0.05
    ]


def check_critical_index(fast: bool) -> CheckResult:
    mismatches, cases = 0, 0
    for n in range(5 if fast else 9):
        for alpha in _alpha_grid(n, 100 if fast else 400):
            brute = min(range(n + 1), key=lambda r: power_p(r, alpha, n).real)
            mismatches += critical_r(alpha, n) != brute
            cases += 1
    return _result("critical_index", float(mismatches), cases, 0.0)


def check_exponent_composition(fast: bool) -> CheckResult:
    worst, cases = 0.0, 0
    for n in range(4 if fast else 9):
        for alpha in _alpha_grid(n, 100 if fast else 400):
            worst = max(
                worst, abs(exponent_e(alpha, n) - exponent_e_composition(alpha, n))
            )
            cases += 1
    return _result("exponent_composition", worst, cases, 1e-12)


def check_coefficient_composition(fast: bool) -> CheckResult:
    worst, cases = 0.0, 0
    for n in range(4 if fast else 9):
        for alpha in _alpha_grid(n, 100 if fast else 400):
            params = _solution(n, alpha)
            worst = max(
                worst,
                relative_difference(
                    coefficient_q(params), coefficient_q_composition(params)
                ),
            )
            cases += 1
    return _result("coefficient_composition", worst, cases, 1e-10)


def _ratio_errors(
    evaluate: Callable[[float], complex], leading: Callable[[float], complex]
) -> list[float]:
    return [abs(evaluate(x) / leading(x) - 1) for x in HALVING_POINTS]


def _improves(errors: list[float], floor: float) -> bool:
    """Each halving of x shrinks the error, or it already sits below floor."""
    return all(later <= max(earlier, floor) for earlier, later in zip(errors, errors[1:]))


def check_delta_leading(fast: bool) -> CheckResult:
    worst, cases = 0.0, 0
    for n, alpha in ((3, 7.0), (3, 1.0), (3, -7.0)):
        params = _solution(n, alpha)
        errors = _ratio_errors(
            lambda x: delta(n, alpha, x, *D_PAIR),
            lambda x: delta_leading_value(params, x),
        )
        if not _improves(errors, 1e-9):
            worst = max(worst, 1.0)
        worst = max(worst, errors[0])
        cases += 1
    return _result("delta_leading", worst, cases, 1e-2)


U_LEADING_CASES = (
    (1, 5.3, D_PAIR),
    (1, 2.9, D_PAIR),
    (1, 0.98, D_PAIR),
    (1, -1.1, D_PAIR),
    (1, -3.3, D_PAIR),
    (1, 0.98, (1.0, 0.0)),
)


def check_u_leading(fast: bool) -> CheckResult:
    worst, cases = 0.0, 0
    for n, alpha, d in U_LEADING_CASES:
        params = _solution(n, alpha, d)
        errors = _ratio_errors(
            lambda x: u_n_determinant(params, x).u,
            lambda x: u_leading(params, x),
        )
        if not _improves(errors, 1e-6):
            logger.debug("u_leading errors %s do not shrink at alpha=%g", errors, alpha)
            worst = max(worst, 1.0)
        worst = max(worst, errors[0])
        cases += 1
    return _result("u_leading", worst, cases, 1e-2)


def check_power_scan(fast: bool) -> CheckResult:
    """Exponents of Delta_5 and u_5 are linear between window edges."""
    worst, cases = 0.0, 0
    records = leading_power_scan(5, -12.0, 12.0, 0.25)
    edges = {"delta_exponent": delta_edges(5), "u_exponent": u_edges(5)}
    for triple in zip(records, records[1:], records[2:]):
        low, high = triple[0]["alpha"], triple[2]["alpha"]
        assert low is not None and high is not None
        for key, subject_edges in edges.items():
            values = [record[key] for record in triple]
            if any(value is None for value in values):
                continue
            if any(low <= edge <= high for edge in subject_edges):
                continue
            a, b, c = (float(value) for value in values)  # type: ignore[arg-type]
            worst = max(worst, abs(a - 2 * b + c))
            cases += 1
    return _result("power_scan", worst, cases, 1e-9)


# ===== expansion and ode


def check_expansion(fast: bool) -> CheckResult:
    """Series against the determinant path, and the relative residual of G."""
    params = _solution(2, 0.98)
    series = expand_u(params, 8.0 if fast else 12.0)
    x = 0.02
    gap = relative_difference(series_eval(series, x), u_n_determinant(params, x).u)
    ratio = residual_ratio(series, params)
    return CheckResult(
        name="expansion_fidelity",
        passed=gap <= 1e-6 and ratio <= 1e-10,
        cases=1,
        worst=gap,
        detail=f"gap {gap:.3e} against 1e-06, residual ratio {ratio:.3e} against 1e-10",
    )


def check_pole_transit(fast: bool) -> CheckResult:
    jet = u0(0.5, 1.0, 1.0, 0.0)
    start = ChartState(
        x=0.5, y=jet.u, dy=jet.du, params=PIIIParams(alpha=1.0, beta=1.0)
    )
    trajectory = trace(start, [6.0], 1e-11)

    worst, cases = 0.0, 0
    for state in trajectory.samples:
        x = state.x.real
        if min(abs(x - math.pi), abs(x - 2 * math.pi)) < 0.2:
            continue
        if state.chart == "V":
            state = chart_switch(state)
        expected = -cmath.cos(x) / cmath.sin(x)
        worst = max(worst, abs(state.y - expected) / (1 + abs(expected)))
        cases += 1
    return _result("pole_transit", worst, cases, 1e-7)


def run_suite(seed: int = 0, fast: bool | None = None) -> VerifyReport:
    """Run every check and collect the outcomes.

    Args:
        seed: Seed of the random matrices and points.
        fast: Shrink the grids, defaults to P3FOX_VERIFY_FAST.

    """
    fast = fast_mode() if fast is None else fast
    rng = np.random.default_rng(seed)

    checks: list[tuple[str, Callable[[], CheckResult]]] = [
        ("cross_paths", lambda: check_cross_paths(fast)),
        ("piii_residual", lambda: check_residuals(fast)),
        ("backlund_laws", lambda: check_backlund_laws(fast)),
        ("bessel_wronskian", lambda: check_bessel_wronskian(fast)),
        ("desnanot_jacobi", lambda: check_desnanot_jacobi(fast, rng)),
        ("vandermonde", lambda: check_vandermonde(fast, rng)),
        ("andreief", lambda: check_andreief(fast)),
        ("laguerre_closed_form", lambda: check_laguerre_closed_form(fast)),
        ("toda", lambda: check_toda(fast)),
        ("critical_index", lambda: check_critical_index(fast)),
        ("exponent_composition", lambda: check_exponent_composition(fast)),
        ("coefficient_composition", lambda: check_coefficient_composition(fast)),
        ("delta_leading", lambda: check_delta_leading(fast)),
        ("u_leading", lambda: check_u_leading(fast)),
        ("power_scan", lambda: check_power_scan(fast)),
        ("expansion_fidelity", lambda: check_expansion(fast)),
        ("pole_transit", lambda: check_pole_transit(fast)),
    ]

    results: list[CheckResult] = []
    for name, check in checks:
        try:
            result = check()
        except Exception as exc:
            # a crashing check counts as a failure
            result = CheckResult(name=name, passed=False, detail=repr(exc))
        logger.info(
            "%s: %s (%s)", result.name, "pass" if result.passed else "FAIL", result.detail
        )
        results.append(result)

    return VerifyReport(seed=seed, fast=fast, checks=results)
