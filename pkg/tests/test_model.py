"""Slotted MAC model: transforms, slot probabilities, throughput formula."""

import numpy as np
import pytest

from wlanrr import (
    DomainError,
    WlanConfig,
    collision_probability,
    idle_probability,
    success_probability,
    tau_to_x,
    throughput,
    x_denominator,
    x_to_tau,
)
from wlanrr.model import validate_attempt_vector, validate_burst_vector


def test_tau_to_x_examples():
    np.testing.assert_allclose(tau_to_x([0.0]), [0.0])
    np.testing.assert_allclose(tau_to_x([0.5]), [1.0])
    np.testing.assert_allclose(tau_to_x([0.25, 0.25]), [1 / 3, 1 / 3])


def test_x_to_tau_examples():
    np.testing.assert_allclose(x_to_tau([0.0]), [0.0])
    np.testing.assert_allclose(x_to_tau([1.0]), [0.5])
    np.testing.assert_allclose(x_to_tau([1 / 3, 1 / 3]), [0.25, 0.25])


def test_transform_round_trip():
    tau = np.linspace(0.0, 0.999, 1999)
    back = x_to_tau(tau_to_x(tau))
    np.testing.assert_allclose(back, tau, rtol=1e-12, atol=1e-15)


@pytest.mark.parametrize("bad", [[1.0], [-0.1], [np.nan], [0.2, 1.5]])
def test_tau_to_x_domain(bad):
    with pytest.raises(DomainError):
        tau_to_x(bad)


def test_idle_probability_examples():
    assert idle_probability([0.0, 0.0]) == 1.0
    assert idle_probability([1 / 3, 1 / 3]) == pytest.approx(9 / 16, rel=1e-12)
    assert idle_probability([1.0, 1.0, 1.0]) == pytest.approx(1 / 8, rel=1e-12)


def test_success_probability_examples():
    assert success_probability(1, [0.0, 0.0]) == 0.0
    assert success_probability(1, [1 / 3, 1 / 3]) == pytest.approx(3 / 16, rel=1e-12)
    assert success_probability(2, [1.0, 0.0]) == 0.0


@pytest.mark.parametrize("i", [0, 3, -1])
def test_success_probability_index_range(i):
    with pytest.raises(DomainError):
        success_probability(i, [0.5, 0.5])


@pytest.mark.parametrize("seed", range(8))
def test_slot_probability_identity(seed):
    # idle + per-station success + collision partitions every MAC slot
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 6))
    x = rng.uniform(0.0, 3.0, n)
    p_idle = idle_probability(x)
    p_succ = sum(success_probability(i, x) for i in range(1, n + 1))
    p_coll = collision_probability(x)
    assert p_coll >= -1e-15
    assert p_idle + p_succ + p_coll == pytest.approx(1.0, abs=1e-12)


def test_x_denominator_examples():
    cfg = WlanConfig(n=2, a=0.3)
    assert x_denominator([0.0, 0.0], [1, 1], cfg) == pytest.approx(0.3, rel=1e-12)
    cfg = WlanConfig(n=2, a=1 / 9)
    assert x_denominator([1 / 3, 1 / 3], [1, 1], cfg) == pytest.approx(8 / 9, rel=1e-12)
    cfg = WlanConfig(n=2, a=1.0, N_lo=[1, 1], N_hi=[2, 2])
    assert x_denominator([1.0, 1.0], [2, 2], cfg) == pytest.approx(6.0, rel=1e-12)


@pytest.mark.parametrize("seed", range(5))
def test_x_denominator_positive(seed):
    rng = np.random.default_rng(100 + seed)
    n = int(rng.integers(1, 5))
    cfg = WlanConfig(n=n, a=rng.uniform(0.05, 1.0), N_hi=np.full(n, 4))
    x = rng.uniform(0.0, 3.0, n)
    N = rng.integers(1, 5, n)
    assert x_denominator(x, N, cfg) > 0


def test_throughput_examples():
    cfg = WlanConfig(n=2, a=1 / 9)
    np.testing.assert_allclose(throughput([0.0, 0.0], [1, 1], cfg), [0.0, 0.0])
    np.testing.assert_allclose(throughput([1 / 3, 1 / 3], [1, 1], cfg),
                               [3 / 8, 3 / 8], rtol=1e-12)
    cfg1 = WlanConfig(n=1, a=1 / 9)
    np.testing.assert_allclose(throughput([1.0], [1], cfg1), [0.9], rtol=1e-12)


@pytest.mark.parametrize("seed", range(5))
def test_throughput_linear_in_payload(seed):
    rng = np.random.default_rng(200 + seed)
    n = int(rng.integers(2, 5))
    a = rng.uniform(0.05, 1.0)
    L = rng.uniform(0.5, 2.0, n)
    x = rng.uniform(0.05, 3.0, n)
    s1 = throughput(x, np.ones(n, int), WlanConfig(n=n, a=a, L=L))
    c = 3.7
    L2 = L.copy()
    L2[0] *= c
    s2 = throughput(x, np.ones(n, int), WlanConfig(n=n, a=a, L=L2))
    assert s2[0] == pytest.approx(c * s1[0], rel=1e-12)
    np.testing.assert_allclose(s2[1:], s1[1:], rtol=1e-12)


@pytest.mark.parametrize("seed", range(8))
def test_ray_scale_monotone_in_bursts(seed):
    # lambda/X along the ray x = lambda*y/(L*N) never drops when a burst grows
    rng = np.random.default_rng(300 + seed)
    n = int(rng.integers(2, 5))
    y = rng.dirichlet(np.ones(n))
    L = rng.uniform(0.5, 2.0, n)
    lam = rng.uniform(0.1, 5.0)
    a = rng.uniform(0.05, 1.0)
    cfg = WlanConfig(n=n, a=a, L=L, N_hi=np.full(n, 8))
    N = rng.integers(1, 4, n)

    def ratio(Nv):
        xbar = y / (L * Nv)
        return lam / x_denominator(lam * xbar, Nv, cfg)

    base = ratio(N)
    for k in range(n):
        N2 = N.copy()
        N2[k] += 1
        assert ratio(N2) >= base - 1e-12


@pytest.mark.parametrize("kwargs", [
    dict(n=0, a=0.5),
    dict(n=2, a=0.0),
    dict(n=2, a=-1.0),
    dict(n=2, a=np.inf),
    dict(n=2, a=0.5, L=[1.0, 0.0]),
    dict(n=2, a=0.5, L=[1.0]),
    dict(n=2, a=0.5, N_lo=[0, 1]),
    dict(n=2, a=0.5, N_lo=[2, 2], N_hi=[1, 2]),
])
def test_config_validation(kwargs):
    with pytest.raises(DomainError):
        WlanConfig(**kwargs)


def test_burst_vector_validation():
    cfg = WlanConfig(n=2, a=0.5, N_lo=[1, 1], N_hi=[3, 3])
    np.testing.assert_allclose(validate_burst_vector([2, 3], cfg), [2.0, 3.0])
    for bad in ([0, 2], [1, 4], [2]):
        with pytest.raises(DomainError):
            validate_burst_vector(bad, cfg)


@pytest.mark.parametrize("bad", [[-0.1, 0.2], [np.nan, 0.0], [np.inf, 1.0]])
def test_attempt_vector_validation(bad):
    with pytest.raises(DomainError):
        validate_attempt_vector(bad)


def test_attempt_vector_length_check():
    with pytest.raises(DomainError):
        validate_attempt_vector([0.1, 0.2, 0.3], n=2)
