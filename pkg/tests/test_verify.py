import numpy as np
import pytest

from p3fox.api import verify
from p3fox.models.report import CheckResult


@pytest.mark.parametrize(
    "check",
    [
        verify.check_critical_index,
        verify.check_exponent_composition,
        verify.check_power_scan,
        verify.check_bessel_wronskian,
        verify.check_laguerre_closed_form,
    ],
)
def test_cheap_checks_pass(check):
    result = check(True)
    assert result.passed, result.detail
    assert result.cases > 0


def test_desnanot_jacobi_check():
    result = verify.check_desnanot_jacobi(True, np.random.default_rng(7))
    assert result.passed, result.detail
    assert result.cases == 20


def test_fast_mode_reads_environment(monkeypatch):
    monkeypatch.setenv(verify.FAST_ENV, "1")
    assert verify.fast_mode()
    monkeypatch.setenv(verify.FAST_ENV, "0")
    assert not verify.fast_mode()
    monkeypatch.delenv(verify.FAST_ENV)
    assert not verify.fast_mode()


def _stub(name: str):
    return lambda *args: CheckResult(name=name, passed=True, cases=1)


def test_run_suite_collects_every_check(monkeypatch):
    for attribute in dir(verify):
        if attribute.startswith("check_"):
            monkeypatch.setattr(verify, attribute, _stub(attribute))

    def crash(fast):
        raise RuntimeError("boom")

    monkeypatch.setattr(verify, "check_toda", crash)

    report = verify.run_suite(seed=5, fast=True)
    assert report.seed == 5
    assert report.fast
    assert len(report.checks) == 17
    assert report.failures == 1
    failed = [check for check in report.checks if not check.passed]
    assert failed[0].name == "toda"
    assert "boom" in failed[0].detail


def test_run_suite_fast_default(monkeypatch):
    for attribute in dir(verify):
        if attribute.startswith("check_"):
            monkeypatch.setattr(verify, attribute, _stub(attribute))
    monkeypatch.setenv(verify.FAST_ENV, "1")
    assert verify.run_suite().fast


def test_wronskian_grid():
    result = verify.check_bessel_wronskian(True)
    assert result.cases == len(verify.WRONSKIAN_ORDERS) * len(verify.WRONSKIAN_POINTS) == 12
    assert result.passed, result.detail


@pytest.mark.parametrize(
    "check",
    [
        verify.check_residuals,
        verify.check_backlund_laws,
        verify.check_u_leading,
        verify.check_delta_leading,
        verify.check_toda,
    ],
)
def test_solution_checks_pass(check):
    result = check(True)
    assert result.passed, result.detail
    assert result.cases > 0


def test_residual_check_covers_every_path(monkeypatch):
    calls: list[str] = []
    original = verify.jet_residual

    def counting(jet_of_x, x, p):
        calls.append(jet_of_x.__defaults__[0].__name__)
        return original(jet_of_x, x, p)

    monkeypatch.setattr(verify, "jet_residual", counting)
    result = verify.check_residuals(True)
    assert result.cases == len(calls)
    assert set(calls) == {"u_n_determinant", "u_n_backlund", "u_n_recurrence"}


def test_backlund_laws_tolerances():
    result = verify.check_backlund_laws(True)
    assert "against 1e-09" in result.detail
    assert "against 1e-08" in result.detail


@pytest.mark.parametrize(
    "errors, floor, expected",
    [
        ([1e-3, 5e-4, 2.5e-4], 1e-9, True),
        ([1e-3, 2e-3, 1e-4], 1e-9, False),
        ([1e-8, 2e-8, 1e-8], 1e-6, True),
        ([1e-3, 1e-3, 1e-3], 1e-6, True),
    ],
)
def test_halving_improvement(errors, floor, expected):
    assert verify._improves(errors, floor) is expected
