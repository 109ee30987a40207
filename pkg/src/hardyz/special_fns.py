"""Complex log-Gamma, the functional-equation factor chi(s), and theta(t).

Everything here is built on one Stirling-series log-Gamma with an upward
argument shift.  The imaginary part of that log-Gamma is the continuous
branch (analytic continuation from the positive reals), so the phase

    theta(t) = Im log Gamma(1/4 + i t/2) - (t/2) log(pi)

never wraps, and chi(1/2 + i t)^(-1/2) is exactly exp(i theta(t)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import DomainError, PoleError

__all__ = [
    "ComplexPoint",
    "ThetaValue",
    "bernoulli_even",
    "log_gamma",
    "loggamma",
    "chi",
    "log_chi",
    "chi_inv_sqrt",
    "theta",
    "theta_array",
    "theta_prime",
]

LOG_2PI = math.log(2.0 * math.pi)
LOG_PI = math.log(math.pi)

# |w| floor for the Stirling series after shifting
_SHIFT_RADIUS = 10.0
_SERIES_FLOOR = 1e-14
_THETA_ASYMPTOTIC_MIN = 10.0

_LD = np.longdouble
_PI_LD = _LD(4) * np.arctan(_LD(1))


@dataclass(frozen=True)
class ComplexPoint:
    """A point s = sigma + i t."""

    sigma: float
    t: float

    def __post_init__(self):
        if not (math.isfinite(self.sigma) and math.isfinite(self.t)):
            raise DomainError(f"non-finite point sigma={self.sigma!r}, t={self.t!r}")

    @property
    def s(self) -> complex:
        return complex(self.sigma, self.t)

    @classmethod
    def of(cls, s) -> "ComplexPoint":
        """Coerce a ComplexPoint, complex, or real number."""
        if isinstance(s, cls):
            return s
        z = complex(s)
        return cls(z.real, z.imag)


@dataclass(frozen=True)
class ThetaValue:
    t: float
    theta: float
    err_bound: float


@lru_cache(maxsize=None)
def _bernoulli_fractions(n_max: int) -> tuple:
    # Akiyama-Tanigawa; returns B_0..B_n_max with B_1 = +1/2 (unused here)
    a = [Fraction(0)] * (n_max + 1)
    out = []
    for m in range(n_max + 1):
        a[m] = Fraction(1, m + 1)
        for j in range(m, 0, -1):
            a[j - 1] = j * (a[j - 1] - a[j])
        out.append(a[0])
    return tuple(out)


def bernoulli_even(k_max: int) -> np.ndarray:
    """Return [B_2, B_4, ..., B_{2 k_max}] as floats."""
    b = _bernoulli_fractions(2 * k_max)
    return np.array([float(b[2 * k]) for k in range(1, k_max + 1)])


@lru_cache(maxsize=None)
def _stirling_coefficients(k_max: int = 20) -> np.ndarray:
    b = _bernoulli_fractions(2 * k_max)
    return np.array([float(b[2 * k] / (2 * k * (2 * k - 1))) for k in range(1, k_max + 1)])


@lru_cache(maxsize=None)
def _theta_coefficients(k_max: int = 20) -> np.ndarray:
    b = _bernoulli_fractions(2 * k_max)
    return np.array(
        [
            float((1 - Fraction(2) ** (1 - 2 * k)) * abs(b[2 * k]) / (4 * k * (2 * k - 1)))
            for k in range(1, k_max + 1)
        ]
    )


def _check_gamma_args(z: np.ndarray) -> None:
    if not np.all(np.isfinite(z)):
        raise DomainError("log_gamma: non-finite argument")
    on_axis = (z.imag == 0) & (z.real <= 0)
    if np.any(on_axis & (z.real == np.round(z.real))):
        raise PoleError("log_gamma: argument is a pole of Gamma (non-positive integer)")


def loggamma(z) -> np.ndarray:
    """Vectorised log Gamma(z) on the continuous branch.

    Analytic on the plane cut along (-inf, 0]; agrees with the real
    log Gamma on the positive axis.  Accuracy is about 1e-14 absolute in
    the result, so the relative accuracy of exp(loggamma) degrades like
    eps * |z log z| for very large |z|.
    """
    z = np.asarray(z, dtype=complex)
    _check_gamma_args(z)
    x, y = z.real, z.imag
    shift = np.maximum(0.0, np.ceil(-x))
    need = np.sqrt(np.maximum(0.0, _SHIFT_RADIUS**2 - y * y)) - x
    shift = np.maximum(shift, np.ceil(need)).astype(int)

    acc = np.zeros_like(z)
    for k in range(int(shift.max(initial=0))):
        mask = k < shift
        acc = acc - np.where(mask, np.log(np.where(mask, z + k, 1.0)), 0.0)
    w = z + shift

    logw = np.log(w)
    acc = acc + (w - 0.5) * logw - w + 0.5 * LOG_2PI

    coef = _stirling_coefficients()
    inv_w2 = 1.0 / (w * w)
    power = 1.0 / w
    active = np.ones(z.shape, dtype=bool)
    prev = np.full(z.shape, np.inf)
    for c in coef:
        term = c * power
        mag = np.abs(term)
        active &= mag <= prev
        acc = acc + np.where(active, term, 0.0)
        active &= mag >= _SERIES_FLOOR
        if not active.any():
            break
        prev = mag
        power = power * inv_w2
    return acc


def log_gamma(s) -> complex:
    """log Gamma(s) for a single point (ComplexPoint or number)."""
    z = ComplexPoint.of(s).s
    return complex(loggamma(np.array([z]))[0])


def log_chi(s) -> np.ndarray:
    """log chi(s) = (s - 1/2) log pi + log Gamma((1-s)/2) - log Gamma(s/2)."""
    s = np.asarray(s, dtype=complex)
    return (s - 0.5) * LOG_PI + loggamma((1.0 - s) / 2.0) - loggamma(s / 2.0)


def chi_inv_sqrt(s) -> np.ndarray:
    """chi(s)^(-1/2) on the branch exp(-log_chi(s)/2), single valued for sigma > 0."""
    return np.exp(-0.5 * log_chi(s))


def chi(s) -> complex:
    """chi(s) = pi^(s-1/2) Gamma((1-s)/2) / Gamma(s/2) for 0 < sigma < 2."""
    p = ComplexPoint.of(s)
    if not 0.0 < p.sigma < 2.0:
        raise DomainError(f"chi: need 0 < sigma < 2, got sigma={p.sigma}")
    return complex(np.exp(log_chi(np.array([p.s]))[0]))


def _theta_asymptotic(t: np.ndarray):
    """Asymptotic theta for t >= 10; returns (theta as longdouble, truncation error)."""
    tl = t.astype(_LD)
    lead = tl / 2 * (np.log(tl / (2 * _PI_LD)) - 1) - _PI_LD / 8
    corr = np.zeros(t.shape)
    err = np.zeros(t.shape)
    inv_t2 = 1.0 / (t * t)
    power = 1.0 / t
    active = np.ones(t.shape, dtype=bool)
    prev = np.full(t.shape, np.inf)
    for c in _theta_coefficients():
        term = c * power
        grow = term > prev
        # first omitted term bounds the tail for this alternating-free series
        err = np.where(active & grow, prev, err)
        active &= ~grow
        corr = corr + np.where(active, term, 0.0)
        stop = active & (term < _SERIES_FLOOR)
        err = np.where(stop, term, err)
        active &= ~stop
        if not active.any():
            break
        prev = term
        power = power * inv_t2
    return lead + corr.astype(_LD), err


def _theta_small(t: float) -> float:
    lg = log_gamma(complex(0.25, t / 2.0))
    return lg.imag - t / 2.0 * LOG_PI


def _theta_ld(t) -> tuple[np.ndarray, np.ndarray]:
    """theta(t) in extended precision and its absolute error estimate (t >= 0)."""
    t = np.asarray(t, dtype=float)
    if np.any(t < 0) or not np.all(np.isfinite(t)):
        raise DomainError("theta: need finite t >= 0")
    out = np.zeros(t.shape, dtype=_LD)
    err = np.zeros(t.shape)
    big = t >= _THETA_ASYMPTOTIC_MIN
    if big.any():
        out[big], err[big] = _theta_asymptotic(t[big])
    flat_t, flat_out, flat_err = t.reshape(-1), out.reshape(-1), err.reshape(-1)
    for i in np.flatnonzero(~big):
        v = _theta_small(float(flat_t[i]))
        flat_out[i] = v
        flat_err[i] = 1e-14 * max(1.0, abs(v))
    return out, err


def theta_array(t) -> np.ndarray:
    """Vectorised theta(t) as float64."""
    th, _ = _theta_ld(t)
    return th.astype(float)


def theta(t: float) -> ThetaValue:
    """Riemann-Siegel theta with chi(1/2 + i t)^(-1/2) = exp(i theta(t))."""
    if not math.isfinite(t):
        raise DomainError("theta: non-finite t")
    if t < 0:
        raise DomainError(f"theta: need t >= 0, got {t}")
    th, trunc = _theta_ld(np.array([t]))
    value = float(th[0])
    # rounding of the float64 result dominates for large t
    err = 3.0 * float(trunc[0]) + 4.0 * np.finfo(float).eps * max(1.0, abs(value))
    return ThetaValue(t=float(t), theta=value, err_bound=err)


def theta_prime(t) -> np.ndarray:
    """d theta / dt from the asymptotic series (t > 0)."""
    t = np.asarray(t, dtype=float)
    out = 0.5 * np.log(t / (2.0 * math.pi))
    coef = _theta_coefficients(8)
    for k, c in enumerate(coef, start=1):
        out = out - (2 * k - 1) * c * t ** (-2.0 * k)
    return out
