"""Utility families: values, gradients, limits, concavity gates."""

import numpy as np
import pytest

from wlanrr import DomainError, UtilityFunction, is_log_domain_concave
from wlanrr.utilities import utility_from_dict

U_LOG = UtilityFunction.log()
U1 = UtilityFunction.power_risk_aversion(alpha=0.1, beta=1.0)
U2 = UtilityFunction.power_risk_aversion(alpha=2.0, beta=1.0)

GRID = np.linspace(0.3, 5.0, 23)

ALL_FAMILIES = [
    U_LOG,
    UtilityFunction.iso_elastic(0.5),
    UtilityFunction.iso_elastic(1.0),
    UtilityFunction.iso_elastic(2.0),
    UtilityFunction.hara(alpha=2.0, beta=0.5, gamma=1.5),
    UtilityFunction.hara(alpha=1.0, beta=0.5, gamma=2.0),
    UtilityFunction.lin_exp(alpha=0.8, beta=2.0),
    U1,
    U2,
    UtilityFunction.power_risk_aversion(alpha=1.0, beta=1.0),
    UtilityFunction.power_risk_aversion(alpha=2.0, beta=0.0),
]


@pytest.mark.parametrize("U", [U_LOG, U1, U2, UtilityFunction.iso_elastic(2.0)])
def test_value_zero_at_one(U):
    assert U.value(1.0) == pytest.approx(0.0, abs=1e-15)


def test_power_risk_aversion_closed_forms():
    x = GRID
    np.testing.assert_allclose(U1.value(x), 1.0 - np.exp(-(x ** 0.9 - 1.0) / 0.9), rtol=1e-12)
    np.testing.assert_allclose(U2.value(x), 1.0 - np.exp(1.0 / x - 1.0), rtol=1e-12)


@pytest.mark.parametrize("U", ALL_FAMILIES)
def test_grad_matches_central_differences(U):
    for x in GRID[::3]:
        h = 1e-6 * x
        fd = (U.value(x + h) - U.value(x - h)) / (2 * h)
        assert U.grad(x) == pytest.approx(fd, rel=1e-6)


@pytest.mark.parametrize("U", ALL_FAMILIES)
def test_strictly_increasing(U):
    vals = U.value(GRID)
    assert np.all(np.diff(vals) > 0)
    assert np.all(U.grad(GRID) > 0)


@pytest.mark.parametrize("U", ALL_FAMILIES)
def test_second_derivative_concave_and_matches_fd(U):
    d2 = U.second_derivative(GRID)
    assert np.all(d2 <= 1e-12)
    for x in (0.5, 1.7, 4.0):
        assert U.second_derivative(x) == pytest.approx(
            U.second_derivative_fd(x), rel=1e-3, abs=1e-9)


def test_limit_dispatches():
    x = GRID
    np.testing.assert_allclose(UtilityFunction.iso_elastic(1.0).value(x),
                               np.log(x), rtol=1e-12)
    np.testing.assert_allclose(UtilityFunction.power_risk_aversion(2.0, 0.0).value(x),
                               UtilityFunction.iso_elastic(2.0).value(x), rtol=1e-12)
    # PRA alpha=1: inner power mean degenerates to log, so U = 1 - 1/x
    np.testing.assert_allclose(UtilityFunction.power_risk_aversion(1.0, 1.0).value(x),
                               1.0 - 1.0 / x, rtol=1e-12)


def test_domain_checks():
    with pytest.raises(DomainError):
        U_LOG.value(0.0)
    with pytest.raises(DomainError):
        U_LOG.value(-1.0)
    assert UtilityFunction.lin_exp(1.0, 1.0).value(0.0) == pytest.approx(-1.0)
    with pytest.raises(DomainError):
        UtilityFunction.lin_exp(1.0, 1.0).value(-0.5)
    hara = UtilityFunction.hara(alpha=2.0, beta=-1.0, gamma=1.0)  # needs x > 1
    assert hara.in_domain(2.0)
    with pytest.raises(DomainError):
        hara.value(0.5)


@pytest.mark.parametrize("bad", [
    lambda: UtilityFunction.iso_elastic(-0.5),
    lambda: UtilityFunction.lin_exp(-1.0, 1.0),
    lambda: UtilityFunction.lin_exp(1.0, -1.0),
    lambda: UtilityFunction.power_risk_aversion(-0.1, 1.0),
    lambda: UtilityFunction.hara(alpha=0.0, beta=1.0, gamma=1.0),
    lambda: UtilityFunction.hara(alpha=1.0, beta=1.0, gamma=0.0),
    lambda: UtilityFunction.hara(alpha=1.0, beta=1.0, gamma=-1.0),
    lambda: UtilityFunction.log(weight=0.0),
    lambda: UtilityFunction("no-such-family"),
])
def test_parameter_validation(bad):
    with pytest.raises(DomainError):
        bad()


def test_weight_scales_everything():
    U = UtilityFunction.log(weight=2.5)
    assert U.value(3.0) == pytest.approx(2.5 * np.log(3.0))
    assert U.grad(3.0) == pytest.approx(2.5 / 3.0)
    assert U.second_derivative(3.0) == pytest.approx(-2.5 / 9.0)


@pytest.mark.parametrize("alpha,expected", [
    (1.0, True), (2.0, True), (5.0, True), (0.5, False),
])
def test_is_log_domain_concave_iso_elastic(alpha, expected):
    assert is_log_domain_concave(UtilityFunction.iso_elastic(alpha)) is expected


def test_is_log_domain_concave_log_family():
    assert is_log_domain_concave(U_LOG) is True


def test_is_log_domain_concave_rejects_bad_grid():
    hara = UtilityFunction.hara(alpha=2.0, beta=-1.0, gamma=1.0)  # domain x > 1
    with pytest.raises(DomainError):
        is_log_domain_concave(hara)
    assert is_log_domain_concave(hara, grid=np.log(np.linspace(1.5, 9.0, 101))) is True


def test_utility_from_dict():
    U = utility_from_dict({"family": "log", "weight": 2.0})
    assert U.family == "log" and U.weight == 2.0
    U = utility_from_dict({"family": "power-risk-aversion", "alpha": 0.1, "beta": 1})
    assert U.value(1.0) == pytest.approx(0.0)
    with pytest.raises(DomainError):
        utility_from_dict({"alpha": 1.0})
    with pytest.raises(DomainError):
        utility_from_dict({"family": "exotic"})
    with pytest.raises(DomainError):
        utility_from_dict({"family": "log", "alpha": 1.0})  # log takes no alpha
