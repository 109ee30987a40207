"""Evaluators for zeta(s) in the right half-plane.

Three independent routes are provided:

* ``zeta_em``: Euler-Maclaurin summation with an explicit remainder bound.
  This is the reference evaluator every other route is checked against.
* ``zeta_first_approx``: the finite Dirichlet sum plus the x^(1-s)/(s-1)
  correction, valid for |t| < 2 pi x / C.
* ``zeta_euler_product``: a truncated product over primes (sigma > 1).

``em_series`` is the vectorised core.  It accepts an optional real phase
``shift`` and returns exp(i*shift) * zeta(s); with shift = theta(t) on the
critical line that product is Z(t) plus a tiny imaginary residual, and the
phase is combined before any trigonometry so large heights keep accuracy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

from .errors import DomainError, PoleError, PreconditionError
from .special_fns import ComplexPoint, _bernoulli_fractions, log_chi

__all__ = [
    "ZetaValue",
    "ApproxConfig",
    "EMPlan",
    "em_plan",
    "em_series",
    "zeta_em",
    "zeta_em_array",
    "zeta_first_approx",
    "zeta_euler_product",
    "primes_up_to",
    "ConvexityReport",
    "convexity_check",
]

METHODS = ("euler_maclaurin", "dirichlet_poly", "euler_product")

_EPS = np.finfo(float).eps
_LD = np.longdouble
_EPS_LD = float(np.finfo(_LD).eps)
_TWO_PI_LD = _LD(8) * np.arctan(_LD(1))
_M_MAX = 60
# rows * columns per vectorised block
_BLOCK = 1 << 21


@dataclass(frozen=True)
class ZetaValue:
    s: ComplexPoint
    value: complex
    method: str
    err_bound: float
    terms_used: int

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}")


def default_x_rule(t: float, C: float) -> float:
    """Cutoff x = C*T/pi with the window anchor T taken as |t|."""
    return C * abs(t) / math.pi


@dataclass(frozen=True)
class ApproxConfig:
    """Settings for the first-approximation Dirichlet polynomial.

    ``K`` is the constant in the error budget K * x^(-sigma).
    """

    C: float = 4.0
    x_rule: Callable[[float, float], float] = field(default=default_x_rule)
    em_error_target: float = 1e-10
    K: float = 2.0

    def __post_init__(self):
        if not self.C > 1:
            raise ValueError(f"ApproxConfig.C must exceed 1, got {self.C}")
        if not self.em_error_target > 0:
            raise ValueError("ApproxConfig.em_error_target must be positive")
        if not self.K > 0:
            raise ValueError("ApproxConfig.K must be positive")


# --------------------------------------------------------------------------
# Euler-Maclaurin


@lru_cache(maxsize=None)
def _em_coefficients() -> np.ndarray:
    """B_{2k}/(2k)! for k = 1 .. _M_MAX + 1."""
    b = _bernoulli_fractions(2 * _M_MAX + 2)
    return np.array([float(b[2 * k] / math.factorial(2 * k)) for k in range(1, _M_MAX + 2)])


@dataclass(frozen=True)
class EMPlan:
    N: int
    m: int
    extended: bool  # phases accumulated in long double


def _power_sum(N: int, a: float) -> float:
    """Upper bound for sum_{n<N} n^-a."""
    if N <= 1:
        return 0.0
    if abs(a - 1.0) < 1e-12:
        return 1.0 + math.log(N)
    return 1.0 + (N ** (1.0 - a) - 1.0) / (1.0 - a)


def _rounding_estimate(N, t, sigma, shift, eps):
    # phase error per term grows with |t log n|; terms add like a random walk
    phase = eps * (np.abs(t) * math.log(max(N, 2)) + np.abs(shift) + 1.0) + _EPS * 2 * math.pi
    s2 = _power_sum(N, 2.0 * float(np.min(sigma)))
    s1 = _power_sum(N, float(np.min(sigma)))
    return 4.0 * phase * math.sqrt(s2) + 2.0 * _EPS * math.log2(max(N, 2)) * s1


def _log_remainder(N: int, sigma_lo: float, sigma_hi: float, t: float) -> np.ndarray:
    """log of the remainder bound for m = 1 .. _M_MAX (worst case over the bucket)."""
    c = np.abs(_em_coefficients())
    j = np.arange(2 * _M_MAX + 2)
    logs = 0.5 * np.log((sigma_hi + j) ** 2 + t * t)
    cum = np.cumsum(logs)
    m = np.arange(1, _M_MAX + 1)
    return (
        np.log(c[m])
        + cum[2 * m + 1]
        - (2 * m + 1 + sigma_lo) * math.log(N)
        - np.log(sigma_lo + 2 * m + 1)
    )


@lru_cache(maxsize=4096)
def _plan_cached(t_bucket: float, sigma_lo: float, sigma_hi: float, target: float) -> EMPlan:
    log_goal = math.log(target / 2.0)
    N = max(8, math.ceil(t_bucket / (2 * math.pi)) + 2)
    while True:
        lr = _log_remainder(N, sigma_lo, sigma_hi, t_bucket)
        ok = np.nonzero(lr <= log_goal)[0]
        if ok.size:
            m = int(ok[0]) + 1
            break
        N = math.ceil(N * 1.1)
    shift_guess = t_bucket * max(1.0, math.log(max(t_bucket, 2.0)))
    rnd = _rounding_estimate(N, t_bucket, np.array([sigma_lo]), shift_guess, _EPS)
    return EMPlan(N=N, m=m, extended=bool(rnd > target / 4.0))


def em_plan(t: float, sigma: float, target: float) -> EMPlan:
    """Choose the cutoff N, the number of Bernoulli corrections m and the precision.

    Plans depend on (t, sigma) only through coarse buckets, so a value is
    a pure function of its point regardless of how calls are batched.
    """
    at = abs(float(t))
    t_bucket = 2.0 ** (math.ceil(16 * math.log2(at)) / 16) if at > 1 else 1.0
    sigma_lo = max(0.0, math.floor(sigma * 20) / 20)
    return _plan_cached(t_bucket, sigma_lo, sigma_lo + 0.05, float(target))


@lru_cache(maxsize=64)
def _log_table(N: int, extended: bool) -> np.ndarray:
    n = np.arange(1, N, dtype=_LD if extended else float)
    return np.log(n)


def _reduce(phase: np.ndarray) -> np.ndarray:
    if phase.dtype == _LD:
        phase = phase - _TWO_PI_LD * np.round(phase / _TWO_PI_LD)
    return phase.astype(float)


def _em_block(sigma, t, shift, plan: EMPlan):
    N, m = plan.N, plan.m
    dt = _LD if plan.extended else float
    logn = _log_table(N, plan.extended)
    logn_f = logn.astype(float)
    tt = t.astype(dt)
    sh = shift.astype(dt)

    rows = max(1, _BLOCK // max(N - 1, 1))
    main = np.empty(t.shape, dtype=complex)
    for lo in range(0, t.size, rows):
        sl = slice(lo, lo + rows)
        ph = _reduce(sh[sl, None] - tt[sl, None] * logn[None, :])
        sg = sigma[sl]
        if np.all(sg == sg[0]):
            w = np.exp(-sg[0] * logn_f)
            main[sl] = np.cos(ph) @ w + 1j * (np.sin(ph) @ w)
        else:
            W = np.exp(-sg[:, None] * logn_f[None, :])
            main[sl] = (np.cos(ph) * W).sum(axis=1) + 1j * (np.sin(ph) * W).sum(axis=1)

    logN = math.log(N)
    bph = _reduce(sh - tt * dt(logN))
    base = np.exp(-sigma * logN) * (np.cos(bph) + 1j * np.sin(bph))
    s = sigma + 1j * t
    coef = _em_coefficients()
    corr = N / (s - 1.0) + 0.5
    q = s / N
    for k in range(1, m + 1):
        corr = corr + coef[k - 1] * q
        q = q * (s + 2 * k - 1) * (s + 2 * k) / (N * N)
    rem = np.abs(base) * abs(coef[m]) * np.abs(q) * np.abs(s + 2 * m + 1) / (sigma + 2 * m + 1)
    value = main + base * corr
    eps = _EPS_LD if plan.extended else _EPS
    rnd = _rounding_estimate(N, t, sigma, shift, eps)
    return value, rem + rnd


def em_series(sigma, t, error_target: float, shift=None):
    """Vectorised exp(i*shift) * zeta(sigma + i t) by Euler-Maclaurin.

    Returns ``(values, err_bounds, terms_used)``.  ``shift`` may be a
    float64 or long-double array; it is combined with the Dirichlet phases
    before reduction.
    """
    sigma = np.atleast_1d(np.asarray(sigma, dtype=float))
    t = np.atleast_1d(np.asarray(t, dtype=float))
    sigma, t = np.broadcast_arrays(sigma, t)
    sigma, t = sigma.ravel().copy(), t.ravel().copy()
    if shift is None:
        shift = np.zeros(t.shape)
    shift = np.broadcast_to(np.atleast_1d(shift), t.shape).ravel()
    if not (np.all(np.isfinite(sigma)) and np.all(np.isfinite(t))):
        raise DomainError("zeta_em: non-finite point")
    if np.any(sigma <= 0):
        raise DomainError("zeta_em: need sigma > 0 (no continuation to the left half-plane)")
    if np.any((sigma == 1.0) & (t == 0.0)):
        raise PoleError("zeta_em: pole at s = 1")
    if not error_target > 0:
        raise ValueError("error_target must be positive")

    plans = [em_plan(ti, si, error_target) for ti, si in zip(t, sigma)]
    values = np.empty(t.shape, dtype=complex)
    errs = np.empty(t.shape)
    terms = np.empty(t.shape, dtype=int)
    groups: dict[EMPlan, list[int]] = {}
    for i, p in enumerate(plans):
        groups.setdefault(p, []).append(i)
    for plan in sorted(groups, key=lambda p: (p.N, p.m, p.extended)):
        idx = np.array(groups[plan])
        v, e = _em_block(sigma[idx], t[idx], shift[idx], plan)
        values[idx], errs[idx], terms[idx] = v, e, plan.N
    return values, errs, terms


def zeta_em_array(s, error_target: float = 1e-10):
    """Vectorised zeta over an array of complex points; returns (values, errs)."""
    s = np.asarray(s, dtype=complex)
    v, e, _ = em_series(s.real.ravel(), s.imag.ravel(), error_target)
    return v.reshape(s.shape), e.reshape(s.shape)


def zeta_em(s, error_target: float = 1e-10) -> ZetaValue:
    """Reference zeta(s) for sigma > 0, s != 1."""
    p = ComplexPoint.of(s)
    v, e, n = em_series(p.sigma, p.t, error_target)
    return ZetaValue(p, complex(v[0]), "euler_maclaurin", float(e[0]), int(n[0]))


# --------------------------------------------------------------------------
# First approximation


def zeta_first_approx(s, cfg: ApproxConfig = ApproxConfig(), x: float | None = None) -> ZetaValue:
    """sum_{n<=x} n^-s + x^(1-s)/(s-1), with budget cfg.K * x^-sigma.

    ``x`` overrides ``cfg.x_rule`` (needed on the real axis, where the
    default rule gives x = 0).
    """
    p = ComplexPoint.of(s)
    if p.sigma <= 0:
        raise DomainError("zeta_first_approx: need sigma > 0")
    if p.sigma == 1.0 and p.t == 0.0:
        raise PoleError("zeta_first_approx: pole at s = 1")
    if x is None:
        x = cfg.x_rule(abs(p.t), cfg.C)
    x = float(x)
    t_max = 2 * math.pi * x / cfg.C
    if not (x >= 1 and abs(p.t) < t_max):
        raise PreconditionError(
            f"zeta_first_approx: |t| = {abs(p.t)} must be < 2*pi*x/C = {t_max} (x = {x})",
            max_t=t_max,
        )
    n_max = int(math.floor(x))
    logn = np.log(np.arange(1, n_max + 1, dtype=float))
    w = np.exp(-p.sigma * logn)
    ph = -p.t * logn
    total = complex(math.fsum(w * np.cos(ph)), math.fsum(w * np.sin(ph)))
    sv = p.s
    total += x ** (1.0 - sv) / (sv - 1.0)
    return ZetaValue(p, total, "dirichlet_poly", cfg.K * x ** (-p.sigma), n_max)


# --------------------------------------------------------------------------
# Euler product


@lru_cache(maxsize=16)
def primes_up_to(n: int) -> np.ndarray:
    """Primes <= n by a simple sieve (cached, returned read-only)."""
    if n < 2:
        out = np.array([], dtype=np.int64)
    else:
        sieve = np.ones(n + 1, dtype=bool)
        sieve[:2] = False
        for p in range(2, math.isqrt(n) + 1):
            if sieve[p]:
                sieve[p * p :: p] = False
        out = np.nonzero(sieve)[0]
    out.setflags(write=False)
    return out


def zeta_euler_product(s, prime_cutoff: int = 10**5) -> ZetaValue:
    p = ComplexPoint.of(s)
    if p.sigma <= 1:
        raise DomainError(f"zeta_euler_product: need sigma > 1, got {p.sigma}")
    if prime_cutoff < 2:
        raise ValueError("prime_cutoff must be at least 2")
    primes = primes_up_to(int(prime_cutoff)).astype(float)
    logp = np.log(primes)
    u = np.exp(-p.sigma * logp) * np.exp(-1j * p.t * logp)
    value = complex(np.exp(-np.sum(np.log1p(-u))))
    tail = prime_cutoff ** (1.0 - p.sigma) / (p.sigma - 1.0)
    return ZetaValue(p, value, "euler_product", abs(value) * tail + 1e-15, int(primes.size))


# --------------------------------------------------------------------------
# Convexity envelope


@dataclass(frozen=True)
class ConvexityReport:
    t_grid: np.ndarray
    sigma_grid: np.ndarray
    ratios: np.ndarray  # shape (len(sigma_grid), len(t_grid))
    max_ratio: float
    argmax: ComplexPoint


def convexity_check(
    t_grid: Sequence[float], sigma_grid: Sequence[float], error_target: float = 1e-8
) -> ConvexityReport:
    """Ratios |zeta(sigma+it)| / (t^((1-sigma)/2) (log t)^5) over a grid.

    Purely diagnostic.  sigma = 0 is reached through the functional
    equation zeta(it) = chi(it) zeta(1 - it).
    """
    t = np.asarray(list(t_grid), dtype=float)
    sg = np.asarray(list(sigma_grid), dtype=float)
    if t.size == 0 or sg.size == 0:
        raise ValueError("convexity_check: grids must be nonempty")
    if np.any(t < 10):
        raise ValueError("convexity_check: all heights must be >= 10")
    if np.any((sg < 0) | (sg > 1)):
        raise ValueError("convexity_check: sigma values must lie in [0, 1]")
    S, Tm = np.meshgrid(sg, t, indexing="ij")
    s = S + 1j * Tm
    left = S <= 0
    s_eval = np.where(left, 1.0 - s, s)
    vals, _ = zeta_em_array(s_eval, error_target)
    if left.any():
        vals = np.where(left, np.exp(log_chi(np.where(left, s, 0.5 + 1j))) * vals, vals)
    env = Tm ** ((1.0 - S) / 2.0) * np.log(Tm) ** 5
    ratios = np.abs(vals) / env
    i, j = np.unravel_index(int(np.argmax(ratios)), ratios.shape)
    return ConvexityReport(t, sg, ratios, float(ratios[i, j]), ComplexPoint(float(sg[i]), float(t[j])))
