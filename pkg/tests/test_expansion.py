import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from p3fox.api.asymptotics import coefficient_q
from p3fox.api.expansion import (
    check_resonance,
    cleared_residual,
    cleared_residual_scale,
    cleared_residual_value,
    expand_u,
    leading_key,
    make_series,
    monomial,
    residual_ratio,
    resolved_order,
    series_add,
    series_derivative,
    series_eval,
    series_inverse,
    series_product,
    series_scale,
    truncate,
)
from p3fox.api.painleve import u_n_determinant
from p3fox.models.params import SolutionParams
from p3fox.models.series import LatticeSeries
from p3fox.utilities.core import five_point_derivative
from p3fox.utilities.errors import (
    BoundaryAlphaError,
    DomainError,
    ParityError,
    ResonanceError,
    ZeroLeadError,
)

P = 0.3


def test_product_of_monomials():
    product = series_product(monomial(P, (0, 1), 2), monomial(P, (1, 0), 3))
    assert product.terms == {(1, 1): 6}
    assert product.parity == 0
    assert product.order is None


def test_product_tracks_order():
    a = truncate(make_series(P, {(0, 1): 1, (1, 0): 1}, 1), 4.0)
    b = monomial(P, (0, 1), 2)
    product = series_product(a, b)
    assert product.order == pytest.approx(4.0 + P)


def test_inverse_of_monomial():
    inverse = series_inverse(monomial(P, (0, 1), 2), budget=6.0)
    assert inverse.terms == {(0, -1): 0.5}


def test_inverse_geometric_series():
    a = make_series(P, {(0, 1): 1, (1, 0): 1}, 1)
    inverse = series_inverse(a, budget=12.0)
    # x**-p (1 - y + y**2 - ...) with y = x**(1-p)
    assert inverse.terms[(0, -1)] == 1
    assert inverse.terms[(1, -2)] == -1
    assert inverse.terms[(2, -3)] == 1

    x = 0.03
    assert series_eval(series_product(a, inverse), x) == pytest.approx(1, abs=1e-10)
    assert series_eval(a, x) * series_eval(inverse, x) == pytest.approx(1, abs=1e-10)


def test_inverse_errors():
    with pytest.raises(ZeroLeadError):
        series_inverse(make_series(P, {}, 1), budget=4.0)
    tied = make_series(1.0, {(0, 1): 1, (1, 0): 1}, 1)
    with pytest.raises(ZeroLeadError):
        series_inverse(tied, budget=4.0)


def test_derivative():
    a0 = 1.7
    derivative = series_derivative(monomial(P, (0, 1), a0))
    assert derivative.terms == {(-1, 1): pytest.approx(a0 * P)}
    assert derivative.parity == 0


def test_add_and_scale():
    total = series_add(monomial(P, (0, 1), 1), monomial(P, (1, 0), 2))
    assert total.terms == {(0, 1): 1, (1, 0): 2}
    assert series_scale(total, -2).terms == {(0, 1): -2, (1, 0): -4}
    # cancelling terms drop out
    assert series_add(total, series_scale(total, -1)).terms == {}


def test_parity_is_enforced():
    with pytest.raises(ParityError):
        series_add(monomial(P, (0, 1)), monomial(P, (1, 1)))
    with pytest.raises(ParityError):
        LatticeSeries(p=P, terms={(0, 0): 1}, parity=1)


def test_bases_must_match():
    with pytest.raises(DomainError):
        series_add(monomial(0.3, (0, 1)), monomial(0.4, (0, 1)))


def test_truncate():
    series = make_series(P, {(0, 1): 1, (1, 0): 1, (3, 0): 1}, 1)
    assert set(truncate(series, 2.0).terms) == {(0, 1), (1, 0)}
    assert truncate(series, 2.0).order == 2.0


def test_resonance_detection():
    colliding = make_series(0.5, {(0, 1): 1, (2, -3): 1}, 1)
    with pytest.raises(ResonanceError):
        check_resonance(colliding)


def test_eval_at_origin():
    with pytest.raises(DomainError):
        series_eval(monomial(P, (0, 1)), 0)


def test_integer_case_one():
    series = expand_u(SolutionParams(n=0, alpha=6), budget=2)
    assert series.p == 1
    assert set(series.terms) == {(1, 0), (3, 0)}
    assert series.terms[(1, 0)] == pytest.approx(-1 / 4)
    assert series.terms[(3, 0)] == pytest.approx(-1 / 32)
    assert leading_key(series) == (1, 0)


def test_integer_case_one_logarithmic_term():
    with pytest.raises(ResonanceError):
        expand_u(SolutionParams(n=0, alpha=6), budget=4)


def test_integer_case_four_lead():
    series = expand_u(SolutionParams(n=2, alpha=-6), budget=1)
    assert series.terms == {(-1, 0): pytest.approx(2)}
    assert leading_key(series) == (-1, 0)


def test_cleared_residual_is_small():
    params = SolutionParams(n=0, alpha=6)
    series = expand_u(params, budget=2)
    assert abs(cleared_residual_value(series, params, 0.01)) < 1e-8

    residual = cleared_residual(series, params)
    # everything up to x**3 cancels
    assert all(
        abs(value) < 1e-12
        for key, value in residual.terms.items()
        if residual.exponent(key).real < 3.5
    )


def test_lattice_case_lead():
    params = SolutionParams(n=2, alpha=0.98, d1=0.55, d2=0.71)
    series = expand_u(params, budget=4.0)
    assert series.p == pytest.approx(-0.02)
    assert leading_key(series) == (0, 1)
    assert series.terms[(0, 1)] == pytest.approx(coefficient_q(params) * 2 ** 0.02)


def test_lattice_case_matches_determinant():
    params = SolutionParams(n=2, alpha=0.98, d1=0.55, d2=0.71)
    series = expand_u(params, budget=12.0)
    x = 0.02
    assert series_eval(series, x) == pytest.approx(u_n_determinant(params, x).u, rel=1e-6)


def test_expand_rejects_bad_input():
    with pytest.raises(DomainError):
        expand_u(SolutionParams(n=0, alpha=0.5), budget=-1)
    with pytest.raises(BoundaryAlphaError):
        expand_u(SolutionParams(n=0, alpha=2, d1=0.55, d2=0.71))


FIG_PARAMS = {"alpha": 0.98, "d1": 0.55, "d2": 0.71}


def test_pointwise_cube():
    seed = expand_u(SolutionParams(n=0, **FIG_PARAMS), budget=8.0)
    # exact finite sum, so the cube keeps every key
    finite = make_series(seed.p, truncate(seed, 8.0).terms, seed.parity)
    cube = series_product(series_product(finite, finite), finite)
    x = 0.05
    assert series_eval(cube, x) == pytest.approx(series_eval(finite, x) ** 3, rel=1e-10)


def test_derivative_matches_finite_difference():
    series = expand_u(SolutionParams(n=1, **FIG_PARAMS), budget=8.0)
    x = 0.05
    numeric = five_point_derivative(lambda y: series_eval(series, y), x, 1e-4)
    assert series_eval(series_derivative(series), x) == pytest.approx(numeric, rel=1e-8)


@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("budget", [4.0, 8.0, 12.0])
def test_lattice_residual_coefficients(n, budget):
    params = SolutionParams(n=n, **FIG_PARAMS)
    series = expand_u(params, budget)
    assert residual_ratio(series, params) < 1e-10


def test_residual_scale_bounds_the_residual():
    params = SolutionParams(n=2, **FIG_PARAMS)
    series = expand_u(params, 4.0)
    residual = cleared_residual(series, params)
    scale = cleared_residual_scale(series, params)
    window = resolved_order(series)
    resolved = [key for key in residual.terms if residual.exponent(key).real <= window]
    assert resolved
    for key in resolved:
        assert abs(residual.terms[key]) < 1e-10
        assert abs(residual.terms[key]) <= scale.terms[key].real
    # keys past the window carry the truncation tail
    assert any(residual.exponent(key).real > window for key in residual.terms)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_residual_decays_with_budget(n):
    params = SolutionParams(n=n, **FIG_PARAMS)
    x = 0.02
    values = [
        abs(cleared_residual_value(expand_u(params, budget), params, x))
        for budget in (4.0, 8.0, 12.0)
    ]
    assert values[0] > 0
    for earlier, later in zip(values, values[1:]):
        assert later <= max(earlier, 1e-12)


@settings(max_examples=12, deadline=None)
@given(
    n=st.integers(min_value=1, max_value=3),
    x=st.floats(min_value=0.01, max_value=0.05),
)
def test_agreement_window(n, x):
    params = SolutionParams(n=n, **FIG_PARAMS)
    series = expand_u(params, 12.0)
    exact = u_n_determinant(params, x).u
    assert abs(series_eval(series, x) - exact) < 1e-5 * abs(exact)


def test_residual_ratio_flags_a_wrong_coefficient():
    params = SolutionParams(n=1, **FIG_PARAMS)
    series = expand_u(params, 4.0)
    key, value = series.ordered()[1]
    spoiled = make_series(
        series.p, {**series.terms, key: 1.01 * value}, series.parity, series.order
    )
    assert residual_ratio(spoiled, params) > 1e-6
