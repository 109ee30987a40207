import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hardyz import ComplexPoint, DomainError, PoleError, chi, log_gamma, theta
from hardyz.special_fns import chi_inv_sqrt, loggamma, theta_array, theta_prime

import oracle_values as ov


def test_log_gamma_identities():
    assert abs(log_gamma(1)) < 1e-15
    assert abs(log_gamma(0.5) - 0.5 * math.log(math.pi)) < 1e-14


def test_log_gamma_oracle_point():
    v = log_gamma(0.25 + 50j)
    assert abs(v - ov.LOGGAMMA_QUARTER_50I) < 1e-12 * abs(ov.LOGGAMMA_QUARTER_50I)


@pytest.mark.parametrize("s", [0, -1, -7])
def test_log_gamma_poles(s):
    with pytest.raises(PoleError):
        log_gamma(s)


def test_nonfinite_rejected():
    with pytest.raises(DomainError):
        log_gamma(complex(float("nan"), 1))
    with pytest.raises(DomainError):
        ComplexPoint(0.5, float("inf"))


def test_log_gamma_branch_is_continuous():
    # the imaginary part keeps growing instead of wrapping at pi
    t = np.linspace(1, 200, 4000)
    im = loggamma(0.5 + 1j * t).imag
    assert np.max(np.abs(np.diff(im))) < 0.5
    assert im[-1] > 100 * math.pi


@settings(max_examples=200, deadline=None)
@given(st.floats(0.05, 50), st.floats(-300, 300))
def test_log_gamma_recurrence(sigma, t):
    s = complex(sigma, t)
    lhs = log_gamma(s + 1)
    rhs = log_gamma(s) + cmath.log(s)
    # same branch: both sides continue from the real axis
    assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(lhs))


@settings(max_examples=100, deadline=None)
@given(st.floats(0.05, 20), st.floats(0.0, 500))
def test_schwarz_reflection(sigma, t):
    s = complex(sigma, t)
    assert abs(log_gamma(s.conjugate()) - log_gamma(s).conjugate()) < 1e-13 * max(1, abs(log_gamma(s)))


def test_chi_examples():
    assert abs(chi(0.5) - 1) < 1e-14
    assert abs(abs(chi(0.5 + 100j)) - 1) < 1e-10
    m = abs(chi(0.25 + 200j))
    assert abs(m - ov.ABS_CHI_QUARTER_200I) < 1e-10 * m
    assert abs(m / (200 / (2 * math.pi)) ** 0.25 - 1) < 5e-3


@pytest.mark.parametrize("s", [2.0 + 1j, -0.5 + 3j, 0.0 + 5j])
def test_chi_domain(s):
    with pytest.raises(DomainError):
        chi(s)


def test_chi_unit_modulus_random():
    rng = np.random.default_rng(1)
    for t in rng.uniform(10, 1e6, 1000):
        assert abs(abs(chi(complex(0.5, t))) - 1) < 1e-10


def test_chi_reflection_random():
    rng = np.random.default_rng(2)
    for sigma, t in zip(rng.uniform(0.1, 0.9, 300), rng.uniform(10, 1e4, 300)):
        s = complex(sigma, t)
        assert abs(chi(s) * chi(1 - s) - 1) < 1e-9


def test_theta_oracle_and_bound():
    v = theta(100)
    assert abs(v.theta - ov.THETA_100) < 1e-12
    assert 0 < v.err_bound <= 1e-10
    assert abs(v.theta - ov.THETA_100) <= v.err_bound


@pytest.mark.parametrize("t", [50.0, 500.0, 5000.0])
def test_theta_matches_chi_phase(t):
    e = cmath.exp(1j * theta(t).theta)
    assert abs(e - complex(chi_inv_sqrt(complex(0.5, t)))) < 1e-9
    assert abs(e * e * chi(complex(0.5, t)) - 1) < 1e-9


def test_theta_derivative():
    t, h = 1000.0, 1e-3
    fd = (theta(t + h).theta - theta(t - h).theta) / (2 * h)
    assert abs(fd - 0.5 * math.log(t / (2 * math.pi))) < 1e-6
    assert abs(float(theta_prime(t)) - fd) < 1e-6


def test_theta_small_heights_and_domain():
    # below the asymptotic floor the Gamma route takes over
    assert abs(theta(5.0).theta - (-3.4596203753634615)) < 1e-12  # mpmath.siegeltheta(5)
    with pytest.raises(DomainError):
        theta(-1.0)


def test_theta_branch_continuity():
    t = np.arange(10.0, 1e4, 0.01)
    th = theta_array(t)
    slope = 0.5 * np.log(t[1:] / (2 * math.pi))
    assert np.all(np.abs(np.diff(th)) <= 0.01 * np.maximum(slope, 0.1) * 1.5)
