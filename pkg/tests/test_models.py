import numpy as np
import pytest
from pydantic import ValidationError

from p3fox.models.config import AlphaScan, RunConfig
from p3fox.models.params import JetPoint, PIIIParams, SolutionParams
from p3fox.models.regime import Regime, complex_to_json
from p3fox.models.report import CheckResult, VerifyReport
from p3fox.models.series import LatticeSeries
from p3fox.models.trajectory import ChartState, GridResult, GridSpec


def test_piii_params_helpers():
    params = PIIIParams(alpha=0.5, beta=1.5)
    assert params.inverted() == PIIIParams(alpha=-1.5, beta=-0.5)
    assert params.shifted(2, -2) == PIIIParams(alpha=2.5, beta=-0.5)
    with pytest.raises(ValidationError):
        PIIIParams(alpha=float("inf"), beta=0)


def test_solution_params():
    params = SolutionParams(n=2, alpha=0.98, d1=0.55, d2=0.71)
    assert params.beta() == pytest.approx(-0.98 + 6)
    assert params.piii().alpha == pytest.approx(0.98 + 4)
    assert params.piii().beta == pytest.approx(params.beta())
    assert params.with_n(3).n == 3
    assert params.with_alpha(1.5).alpha == 1.5
    assert params.with_n(3).d2 == params.d2


def test_solution_params_defaults_and_validation():
    params = SolutionParams(n=0, alpha=1)
    assert (params.d1, params.d2) == (1, 0)
    with pytest.raises(ValidationError):
        SolutionParams(n=-1, alpha=1)
    with pytest.raises(ValidationError):
        SolutionParams(n=1, alpha=1, d1=0, d2=0)
    with pytest.raises(ValidationError):
        SolutionParams(n=1, alpha=float("nan"))


def test_jet_point_rejects_origin():
    with pytest.raises(ValidationError):
        JetPoint(x=0, u=1, du=0)


def test_complex_to_json():
    assert complex_to_json(1.5 + 0j) == 1.5
    assert complex_to_json(1 - 2j) == [1.0, -2.0]


def test_regime_alias_round_trip():
    regime = Regime(
        subject="u", case_label=2, j=0, r_c=0, exponent=-0.02, coefficient=0.7 + 0.1j
    )
    dumped = regime.model_dump(by_alias=True, mode="json")
    assert dumped["case"] == 2
    assert dumped["coefficient"] == [0.7, 0.1]
    assert Regime.model_validate(dumped) == regime


def test_regime_case_bounds():
    with pytest.raises(ValidationError):
        Regime(subject="delta", case=5, r_c=0, exponent=0, coefficient=1)


def test_lattice_series_helpers():
    series = LatticeSeries(p=0.25, terms={(0, 1): 2, (1, 0): 1, (-1, 2): 3}, parity=1)
    assert series.m_min == -1
    assert series.exponent((1, 0)) == 1
    assert series.low() == pytest.approx(-0.5)
    assert [key for key, _ in series.ordered()] == [(-1, 2), (0, 1), (1, 0)]
    assert LatticeSeries(p=0.25).low() == float("inf")


def test_chart_state():
    params = PIIIParams(alpha=1, beta=1)
    assert ChartState(x=1, y=0.5, dy=0, chart="V", params=params).u() == 2
    assert np.isnan(ChartState(x=1, y=0, dy=0, chart="V", params=params).u())
    with pytest.raises(ValidationError):
        ChartState(x=1, y=float("inf"), dy=0, params=params)


def test_grid_spec():
    spec = GridSpec(x_min=-1, x_max=1, y_min=0, y_max=2, nx=5, ny=3)
    assert list(spec.real_nodes()) == pytest.approx([-1, -0.5, 0, 0.5, 1])
    assert list(spec.imag_nodes()) == pytest.approx([0, 1, 2])
    with pytest.raises(ValidationError):
        GridSpec(x_min=1, x_max=-1, y_min=0, y_max=1, nx=2, ny=2)
    with pytest.raises(ValidationError):
        GridSpec(x_min=0, x_max=1, y_min=0, y_max=1, nx=0, ny=2)


def test_grid_result_validation():
    spec = GridSpec(x_min=0.5, x_max=1, y_min=0, y_max=0, nx=2, ny=1)
    values = np.array([[1 + 0j], [np.nan]], dtype=np.complex128)
    result = GridResult(spec=spec, values=values, status=np.array([["ok"], ["failed"]]))
    assert result.counts() == {"ok": 1, "pole": 0, "failed": 1}

    with pytest.raises(ValidationError):
        GridResult(spec=spec, values=values, status=np.array([["ok"], ["ok"]]))
    with pytest.raises(ValidationError):
        GridResult(spec=spec, values=values[:1], status=np.array([["ok"]]))


def test_verify_report_counts():
    report = VerifyReport(
        seed=3,
        fast=True,
        checks=[CheckResult(name="a", passed=True), CheckResult(name="b", passed=False)],
    )
    assert (report.passes, report.failures) == (1, 1)
    assert report.model_dump()["failures"] == 1


def test_run_config():
    config = RunConfig(subcommand="eval", x=1.5)
    assert config.tol == 1e-9
    assert config.budget == 12.0
    assert config.format == "csv"
    with pytest.raises(ValidationError):
        RunConfig(subcommand="eval", x=complex(float("inf"), 0))
    with pytest.raises(ValidationError):
        RunConfig(subcommand="eval", tol=0)
    with pytest.raises(ValidationError):
        AlphaScan(start=0, stop=1, step=0)
