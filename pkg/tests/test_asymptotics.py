import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from p3fox.api.asymptotics import (
    coefficient_c,
    coefficient_c_general,
    coefficient_q,
    coefficient_q_composition,
    critical_r,
    delta_edges,
    delta_leading,
    delta_leading_value,
    exponent_e,
    exponent_e_composition,
    leading_power_scan,
    power_p,
    u_edges,
    u_leading,
    u_regime,
)
from p3fox.api.hankel import delta
from p3fox.api.painleve import u_n_determinant
from p3fox.api.special import gamma
from p3fox.models.params import SolutionParams
from p3fox.utilities.errors import (
    BoundaryAlphaError,
    DegenerateCoefficientError,
    DomainError,
    RangeError,
)

D1, D2 = 0.55, 0.71

off_edge_alpha = st.floats(min_value=-14.0, max_value=14.0).filter(
    lambda a: abs(a - 2 * round(a / 2)) > 1e-3
)


def test_power_p():
    n, alpha = 4, 1.7
    assert power_p(0, alpha, n) == pytest.approx(-n * alpha / 2)
    assert power_p(n, alpha, n) == pytest.approx(n * alpha / 2)
    assert power_p(1, 4, 3) == -6
    with pytest.raises(RangeError):
        power_p(5, alpha, n)


def test_edges():
    assert delta_edges(0) == []
    assert delta_edges(3) == [4, 0, -4]
    assert u_edges(0) == [0, 2]
    assert u_edges(2) == [-4, -2, 0, 2, 4, 6]


@pytest.mark.parametrize("alpha, n, expected", [(10, 3, 0), (1, 3, 1), (-10, 3, 3), (5, 0, 0)])
def test_critical_r(alpha, n, expected):
    assert critical_r(alpha, n) == expected


@given(n=st.integers(min_value=0, max_value=8), alpha=off_edge_alpha)
def test_critical_r_is_the_argmin(n, alpha):
    brute = min(range(n + 1), key=lambda r: power_p(r, alpha, n).real)
    assert critical_r(alpha, n) == brute


def test_critical_r_rejects_edges():
    with pytest.raises(BoundaryAlphaError):
        critical_r(4.0, 3)
    with pytest.raises(BoundaryAlphaError):
        critical_r(complex(-4, 2.5), 3)


def test_delta_regime_cases():
    first = delta_leading(SolutionParams(n=3, alpha=10, d1=D1, d2=D2))
    middle = delta_leading(SolutionParams(n=3, alpha=1, d1=D1, d2=D2))
    last = delta_leading(SolutionParams(n=3, alpha=-10, d1=D1, d2=D2))
    assert (first.case_label, first.j, first.r_c) == (1, None, 0)
    assert (middle.case_label, middle.j, middle.r_c) == (2, 1, 1)
    assert (last.case_label, last.j, last.r_c) == (3, None, 3)
    assert middle.exponent == power_p(1, 1, 3)


def test_delta_regime_empty_determinant():
    regime = delta_leading(SolutionParams(n=0, alpha=0.37, d1=D1, d2=D2))
    assert regime.exponent == 0
    assert regime.coefficient == pytest.approx(1)


def test_delta_regime_n1():
    alpha = 1.3
    params = SolutionParams(n=1, alpha=alpha, d1=D1, d2=D2)
    regime = delta_leading(params)
    assert regime.exponent == pytest.approx(-alpha / 2)
    assert regime.coefficient == pytest.approx(-(D2 / math.pi) * gamma(alpha / 2), rel=1e-13)


def test_delta_regime_degenerate_overrides():
    # d2 = 0 forces the last index
    assert delta_leading(SolutionParams(n=3, alpha=1, d1=1, d2=0)).r_c == 3
    # d1 sin + d2 cos = 0 forces the first index
    d1, d2 = 1.0, -math.tan(math.pi * 0.7 / 2)
    assert delta_leading(SolutionParams(n=3, alpha=0.7, d1=d1, d2=d2)).r_c == 0


def test_degenerate_coefficients():
    params = SolutionParams.model_construct(n=2, alpha=0.7, d1=0, d2=0)
    with pytest.raises(DegenerateCoefficientError):
        delta_leading(params)


def test_coefficient_c_matches_general_form():
    params = SolutionParams(n=3, alpha=1.0, d1=D1, d2=D2)
    assert coefficient_c(params) == coefficient_c_general(1.0, 3, 1, D1, D2)
    with pytest.raises(RangeError):
        coefficient_c_general(1.0, 3, 4, D1, D2)


@pytest.mark.parametrize("n, alpha", [(3, 7.0), (3, 1.0), (3, -7.0), (1, 1.3)])
def test_delta_leading_ratio(n, alpha):
    params = SolutionParams(n=n, alpha=alpha, d1=D1, d2=D2)
    errors = [
        abs(delta(n, alpha, x, D1, D2) / delta_leading_value(params, x) - 1)
        for x in (1e-3, 5e-4, 2.5e-4)
    ]
    assert errors[0] < 1e-2
    assert errors[1] <= errors[0] + 1e-9
    assert errors[2] <= errors[1] + 1e-9


@pytest.mark.parametrize("alpha, n, expected", [(6, 0, 1), (1, 0, 0), (-6, 2, -1), (0.98, 2, -0.02)])
def test_exponent_e(alpha, n, expected):
    assert exponent_e(alpha, n) == pytest.approx(expected)


def test_exponent_e_rejects_edges():
    with pytest.raises(BoundaryAlphaError):
        exponent_e(2, 0)
    with pytest.raises(BoundaryAlphaError):
        exponent_e(-4, 2)


@given(n=st.integers(min_value=0, max_value=6), alpha=off_edge_alpha)
def test_exponent_composition(n, alpha):
    assert abs(exponent_e(alpha, n) - exponent_e_composition(alpha, n)) < 1e-12


@pytest.mark.parametrize("n, alpha", [(0, 0.98), (1, 3.3), (2, -0.5), (3, 7.7), (2, -5.3), (1, -1.1)])
def test_coefficient_composition(n, alpha):
    params = SolutionParams(n=n, alpha=alpha, d1=D1, d2=D2)
    assert coefficient_q(params) == pytest.approx(coefficient_q_composition(params), rel=1e-10)


def test_coefficient_q_examples():
    assert coefficient_q(SolutionParams(n=0, alpha=6)) == pytest.approx(-0.5)
    assert coefficient_q(SolutionParams(n=2, alpha=-6)) == pytest.approx(1)

    alpha = 0.98
    angle = math.pi * alpha / 2
    expected = (D1 / D2 * math.sin(angle) + math.cos(angle)) * gamma(1 - alpha / 2) / gamma(alpha / 2)
    assert coefficient_q(SolutionParams(n=0, alpha=alpha, d1=D1, d2=D2)) == pytest.approx(
        expected, rel=1e-13
    )


def test_u_regime_record():
    regime = u_regime(SolutionParams(n=0, alpha=6))
    assert regime.case_label == 1
    assert regime.exponent == 1
    assert regime.coefficient == pytest.approx(-0.5)
    assert regime.model_dump(by_alias=True, mode="json")["case"] == 1


def test_u_regime_d2_zero_is_case_four():
    regime = u_regime(SolutionParams(n=1, alpha=0.98, d1=1, d2=0))
    assert regime.case_label == 4
    assert regime.exponent == -1
    assert regime.coefficient == pytest.approx(-0.49 - 1)


@pytest.mark.parametrize("x", [0.3, 1.7, 2 + 1j])
def test_u_leading_closed_forms(x):
    assert u_leading(SolutionParams(n=0, alpha=6), x) == pytest.approx(-x / 4)
    assert u_leading(SolutionParams(n=2, alpha=-6), x) == pytest.approx(2 / x)


def test_u_leading_domain():
    with pytest.raises(DomainError):
        u_leading(SolutionParams(n=0, alpha=6), 0)


@pytest.mark.parametrize(
    "n, alpha, d",
    [(1, 5.3, (D1, D2)), (1, 0.98, (D1, D2)), (1, -1.1, (D1, D2)), (1, 0.98, (1.0, 0.0))],
)
def test_u_leading_ratio(n, alpha, d):
    params = SolutionParams(n=n, alpha=alpha, d1=d[0], d2=d[1])
    ratio = u_n_determinant(params, 1e-3).u / u_leading(params, 1e-3)
    assert abs(ratio - 1) < 1e-2


def test_power_scan_marks_edges():
    records = leading_power_scan(5, -12.0, 12.0, 0.1)
    assert len(records) == 241
    by_alpha = {round(record["alpha"], 6): record for record in records}
    assert by_alpha[4.0]["u_exponent"] is None
    assert by_alpha[4.0]["delta_exponent"] is None
    assert by_alpha[3.0]["delta_exponent"] is not None
    assert by_alpha[-11.0]["u_exponent"] == pytest.approx(-1)
    assert by_alpha[11.0]["delta_exponent"] == pytest.approx(-5 * 11 / 2)


def test_power_scan_step():
    with pytest.raises(DomainError):
        leading_power_scan(2, 0.0, 1.0, 0.0)
