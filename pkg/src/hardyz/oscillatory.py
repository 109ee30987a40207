"""First- and second-derivative tests for exponential integrals.

The two bounds

    |int_a^b exp(i F)|      <= 4 / m        (F' monotone, |F'| >= m)
    |int_a^b G exp(i F)|    <= 8 M / sqrt(r) (|F''| >= r, |G| <= M, G/F' monotone)

are turned into certificates: the integral is computed numerically with
an oscillation-aware Gauss-Legendre rule and compared with the bound.
The phase family used throughout is F_n(t) = (t/2) log(t / (2 pi e n^2)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

import numpy as np

from .errors import EvaluationError, PreconditionError

__all__ = [
    "Phase",
    "PhaseFamily",
    "QuadResult",
    "adaptive_gauss",
    "oscillatory_quad",
    "BoundCertificate",
    "first_derivative_certificate",
    "second_derivative_certificate",
    "SplitSumBound",
    "split_sum_bound",
    "log_inequality_check",
    "split_point_margin",
    "random_certificates",
]

_GL_ORDER = 10
_SPOT_POINTS = 64
_REL_SLOP = 1e-12


@lru_cache(maxsize=None)
def _gauss(n: int):
    x, w = np.polynomial.legendre.leggauss(n)
    return x, w


# --------------------------------------------------------------------------
# phases


@dataclass(frozen=True)
class Phase:
    """A real phase with (optionally analytic) first and second derivatives."""

    f: Callable
    df: Callable | None = None
    d2f: Callable | None = None

    @property
    def exact(self) -> bool:
        return self.df is not None and self.d2f is not None

    def d1(self, x):
        x = np.asarray(x, dtype=float)
        if self.df is not None:
            return np.asarray(self.df(x), dtype=float) * np.ones_like(x)
        h = 1e-5 * np.maximum(1.0, np.abs(x))
        return (self.f(x + h) - self.f(x - h)) / (2 * h)

    def d2(self, x):
        x = np.asarray(x, dtype=float)
        if self.d2f is not None:
            return np.asarray(self.d2f(x), dtype=float) * np.ones_like(x)
        if self.df is not None:
            h = 1e-5 * np.maximum(1.0, np.abs(x))
            return (self.d1(x + h) - self.d1(x - h)) / (2 * h)
        h = 1e-3 * np.maximum(1.0, np.abs(x))
        return (self.f(x + h) - 2 * self.f(x) + self.f(x - h)) / (h * h)

    def slop(self) -> float:
        """Relative tolerance for spot checks (finite differences are only ~1e-7 accurate)."""
        return _REL_SLOP if self.exact else 1e-6


def _as_phase(F) -> Phase:
    return F if isinstance(F, Phase) else Phase(F)


class PhaseFamily(Phase):
    """F(n, t) = (t/2) log(t / (2 pi e n^2)), F' = (1/2) log(t / (2 pi n^2)), F'' = 1/(2t)."""

    def __init__(self, n: int):
        if n < 1:
            raise ValueError("PhaseFamily index must be a positive integer")
        c = 2 * math.pi * n * n
        object.__setattr__(self, "n", int(n))
        super().__init__(
            f=lambda t: 0.5 * t * (np.log(t / c) - 1.0),
            df=lambda t: 0.5 * np.log(t / c),
            d2f=lambda t: 0.5 / t,
        )

    @property
    def stationary_point(self) -> float:
        return 2 * math.pi * self.n**2

    def __repr__(self):
        return f"PhaseFamily(n={self.n})"


# --------------------------------------------------------------------------
# quadrature


@dataclass
class QuadResult:
    value: complex
    error: float
    converged: bool
    panels: int
    evaluations: int
    edges: np.ndarray | None = field(default=None, repr=False)
    panel_values: np.ndarray | None = field(default=None, repr=False)

    @property
    def warning(self) -> bool:
        return not self.converged


def _panel_rules(f, lo, hi):
    """Coarse (one panel) and fine (two halves) Gauss values for each panel."""
    x, w = _gauss(_GL_ORDER)
    mid = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    q = 0.5 * half
    nodes = np.concatenate(
        [mid[:, None] + half[:, None] * x, (lo + q)[:, None] + q[:, None] * x,
         (mid + q)[:, None] + q[:, None] * x],
        axis=1,
    )
    vals = np.asarray(f(nodes.ravel())).reshape(nodes.shape)
    if not np.all(np.isfinite(vals)):
        raise EvaluationError("integrand returned non-finite values")
    k = _GL_ORDER
    coarse = half * (vals[:, :k] @ w)
    fine = q * (vals[:, k : 2 * k] @ w) + q * (vals[:, 2 * k :] @ w)
    return coarse, fine


def _ordered_sum(values) -> complex:
    values = np.asarray(values)
    return complex(math.fsum(values.real), math.fsum(values.imag))


def adaptive_gauss(f, edges, tol: float, max_panels: int = 1_000_000,
                   noise_density: float = 0.0) -> QuadResult:
    """Adaptive composite Gauss-Legendre on the given initial partition.

    Each panel is accepted once the one-panel and two-half-panel rules agree
    to within its share of ``tol`` (proportional to width), or to within
    ``noise_density * width``, the rounding floor of the integrand.  ``f``
    must be vectorised; it may be complex valued.
    """
    edges = np.asarray(edges, dtype=float)
    if edges.ndim != 1 or edges.size < 2 or np.any(np.diff(edges) <= 0):
        raise ValueError("edges must be strictly increasing with at least two points")
    total = edges[-1] - edges[0]
    lo, hi = edges[:-1].copy(), edges[1:].copy()
    done_lo, done_hi, done_val, done_err = [], [], [], []
    evals = 0
    converged = True
    while lo.size:
        coarse, fine = _panel_rules(f, lo, hi)
        evals += lo.size * 3 * _GL_ORDER
        err = np.abs(fine - coarse)
        share = tol * (hi - lo) / total
        floor = np.maximum(4 * np.finfo(float).eps * np.abs(fine), noise_density * (hi - lo))
        ok = (err <= share) | (err <= floor) | ((hi - lo) < 1e-12 * total)
        done_lo.append(lo[ok]); done_hi.append(hi[ok]); done_val.append(fine[ok]); done_err.append(err[ok])
        lo, hi = lo[~ok], hi[~ok]
        if lo.size and sum(a.size for a in done_lo) + 2 * lo.size > max_panels:
            converged = False
            coarse, fine = _panel_rules(f, lo, hi)
            done_lo.append(lo); done_hi.append(hi); done_val.append(fine); done_err.append(np.abs(fine - coarse))
            break
        mid = 0.5 * (lo + hi)
        lo, hi = np.concatenate([lo, mid]), np.concatenate([mid, hi])
    all_lo = np.concatenate(done_lo)
    order = np.argsort(all_lo, kind="stable")
    vals = np.concatenate(done_val)[order]
    errs = np.concatenate(done_err)[order]
    new_edges = np.append(all_lo[order], np.concatenate(done_hi)[order][-1])
    error = math.fsum(errs)
    if error > tol:
        converged = False
    return QuadResult(_ordered_sum(vals), error, converged, int(vals.size), evals, new_edges, vals)


def oscillation_edges(phase: Phase, a: float, b: float, grid: int = 2049) -> np.ndarray:
    """Partition [a, b] so each panel is narrower than 2 pi / (|F'| + 1) locally."""
    x = np.linspace(a, b, grid)
    rho = (np.abs(phase.d1(x)) + 1.0) / (2 * math.pi)
    cum = np.concatenate([[0.0], np.cumsum(0.5 * (rho[1:] + rho[:-1]) * np.diff(x))])
    k = int(math.ceil(1.25 * cum[-1])) + 1
    edges = np.interp(np.linspace(0.0, cum[-1], k + 1), cum, x)
    edges[0], edges[-1] = a, b
    return np.unique(edges)


def oscillatory_quad(F, G, a: float, b: float, tol: float = 1e-10) -> QuadResult:
    """int_a^b G(x) exp(i F(x)) dx.

    ``G`` may be a callable, a constant, or None (meaning 1).  The result's
    ``warning`` flag is set when the error estimate exceeds ``tol``.
    """
    if not a < b:
        raise ValueError("need a < b")
    if not tol > 0:
        raise ValueError("tol must be positive")
    phase = _as_phase(F)
    if G is None:
        amp = lambda x: 1.0
    elif callable(G):
        amp = G
    else:
        amp = lambda x, g=complex(G): g

    def integrand(x):
        return amp(x) * np.exp(1j * np.asarray(phase.f(x), dtype=float))

    edges = oscillation_edges(phase, a, b)
    # exp(i F) carries an absolute phase error of about eps * |F|
    probe = np.linspace(a, b, 257)
    f_max = float(np.max(np.abs(phase.f(probe))))
    g_max = float(np.max(np.abs(np.asarray(amp(probe)) * np.ones_like(probe))))
    noise = 16 * np.finfo(float).eps * (f_max + 1.0) * g_max
    return adaptive_gauss(integrand, edges, tol, noise_density=noise)


# --------------------------------------------------------------------------
# certificates


@dataclass(frozen=True)
class BoundCertificate:
    numeric_integral: complex
    numeric_abs: float
    analytic_bound: float
    lemma: str  # "first_derivative" | "second_derivative"
    parameters: dict
    slack: float
    quad_error: float = 0.0


def _monotone(v: np.ndarray) -> bool:
    d = np.diff(v)
    tiny = _REL_SLOP * max(1.0, float(np.max(np.abs(v))))
    return bool(np.all(d >= -tiny) or np.all(d <= tiny))


def first_derivative_certificate(F, a: float, b: float, m: float, tol: float = 1e-9) -> BoundCertificate:
    if not (a < b and m > 0):
        raise PreconditionError("need a < b and m > 0")
    phase = _as_phase(F)
    x = np.linspace(a, b, _SPOT_POINTS)
    d1 = phase.d1(x)
    if not (np.all(d1 > 0) or np.all(d1 < 0)):
        raise PreconditionError("F' changes sign on [a, b]")
    if np.min(np.abs(d1)) < m * (1 - phase.slop()):
        raise PreconditionError(f"|F'| drops below m = {m} (min {np.min(np.abs(d1))})")
    d2 = phase.d2(x)
    tiny = 1e-9 * max(1.0, float(np.max(np.abs(d2))))
    if not (np.all(d2 >= -tiny) or np.all(d2 <= tiny)) or not _monotone(d1):
        raise PreconditionError("F' is not monotonic on [a, b]")
    q = oscillatory_quad(phase, None, a, b, tol)
    bound = 4.0 / m
    return BoundCertificate(q.value, abs(q.value), bound, "first_derivative",
                            {"m": m}, bound - abs(q.value), q.error)


def second_derivative_certificate(F, G, a: float, b: float, r: float, M: float,
                                  tol: float = 1e-9) -> BoundCertificate:
    if not (a < b and r > 0 and M > 0):
        raise PreconditionError("need a < b, r > 0, M > 0")
    phase = _as_phase(F)
    amp = (lambda x: np.ones_like(x)) if G is None else G
    x = np.linspace(a, b, _SPOT_POINTS)
    d2 = phase.d2(x)
    if not (np.all(d2 > 0) or np.all(d2 < 0)):
        raise PreconditionError("F'' changes sign on [a, b]")
    if np.min(np.abs(d2)) < r * (1 - phase.slop()):
        raise PreconditionError(f"|F''| drops below r = {r} (min {np.min(np.abs(d2))})")
    g = np.asarray(amp(x), dtype=float) * np.ones_like(x)
    if np.max(np.abs(g)) > M * (1 + _REL_SLOP):
        raise PreconditionError(f"|G| exceeds M = {M} (max {np.max(np.abs(g))})")
    d1 = phase.d1(x)
    away = np.abs(d1) > 1e-9 * max(1.0, float(np.max(np.abs(d1))))
    for side in (away & (d1 > 0), away & (d1 < 0)):
        if side.sum() >= 2 and not _monotone(g[side] / d1[side]):
            raise PreconditionError("G/F' is not monotonic away from the stationary point")
    q = oscillatory_quad(phase, amp, a, b, tol)
    bound = 8.0 * M / math.sqrt(r)
    return BoundCertificate(q.value, abs(q.value), bound, "second_derivative",
                            {"r": r, "M": M}, bound - abs(q.value), q.error)


# --------------------------------------------------------------------------
# the split-sum estimate


@dataclass(frozen=True)
class SplitSumBound:
    T: float
    C: float
    n_split: int
    n_max: int
    sum1_bound: float
    sum2_bound: float
    total: float
    c1: float
    c2: float


def split_sum_bound(T: float, C: float = 4.0) -> SplitSumBound:
    """Termwise derivative-test bound for sum_{n <= CT/pi} n^-1/2 int_T^2T exp(i F_n).

    For n <= 3 sqrt(T/pi) each integral is bounded by the second-derivative
    test with r = 1/(4T) and unit amplitude; beyond it by the first-derivative
    test with m = 4/9.  Closed-form envelopes c1 T^(3/4) and c2 sqrt(C T)
    follow from sum_{n<=N} n^-1/2 <= 2 sqrt(N).
    """
    if T < 100:
        raise ValueError("split_sum_bound: need T >= 100")
    if not C > 1:
        raise ValueError("split_sum_bound: need C > 1")
    n_split = int(math.floor(3 * math.sqrt(T / math.pi)))
    n_max = int(math.floor(C * T / math.pi))
    per_term_2nd = 8.0 * 1.0 / math.sqrt(1.0 / (4 * T))
    per_term_1st = 4.0 / (4.0 / 9.0)
    n1 = np.arange(1, n_split + 1, dtype=float)
    sum1 = per_term_2nd * math.fsum(n1**-0.5)
    if n_max > n_split:
        n2 = np.arange(n_split + 1, n_max + 1, dtype=float)
        sum2 = per_term_1st * math.fsum(n2**-0.5)
    else:
        sum2 = 0.0
    c1 = 32.0 * math.sqrt(3.0) * math.pi**-0.25
    c2 = 18.0 / math.sqrt(math.pi)
    if sum1 > c1 * T**0.75 * (1 + 1e-12) or sum2 > c2 * math.sqrt(C * T) * (1 + 1e-12):
        raise ArithmeticError("closed-form envelope violated")
    return SplitSumBound(T, C, n_split, n_max, sum1, sum2, sum1 + sum2, c1, c2)


def log_inequality_check(n: int, m: int) -> bool:
    """log(n/m) >= (n - m)/n for integers n > m >= 1."""
    if not (isinstance(n, (int, np.integer)) and isinstance(m, (int, np.integer))):
        raise TypeError("n and m must be integers")
    if not n > m >= 1:
        raise ValueError(f"need n > m >= 1, got n={n}, m={m}")
    return math.log1p((n - m) / m) >= (n - m) / n


def split_point_margin(T: float, t: float, n: int) -> float:
    """log(2 pi n^2 / t) - 8/9; nonnegative whenever T <= t <= 2T and n > 3 sqrt(T/pi)."""
    return math.log(2 * math.pi * n * n / t) - 8.0 / 9.0


# --------------------------------------------------------------------------
# randomised soundness suite


def _trial(rng, lemma, adversarial):
    n = int(rng.integers(1, 101))
    a = float(10 ** rng.uniform(2, 5))
    b = min(a + float(10 ** rng.uniform(0, 3)), 1e5)
    fam = PhaseFamily(n)
    if lemma == "first_derivative":
        if a <= fam.stationary_point <= b:
            return None
        m = float(min(abs(fam.d1(a)), abs(fam.d1(b))))
        if adversarial:
            m *= 1.5
        params = {"m": m, "M": float("nan")}
        cert = lambda: first_derivative_certificate(fam, a, b, m)
    else:
        if rng.random() < 0.5:
            G, label = None, "1"
            M = 1.0
        else:
            G, label = (lambda t: (t / (2 * math.pi)) ** 0.25), "(t/2pi)^(1/4)"
            M = (b / (2 * math.pi)) ** 0.25
        r = 1.0 / (2 * b)
        if adversarial:
            r *= 1.5
        params = {"r": r, "M": M, "G": label}
        cert = lambda: second_derivative_certificate(fam, G, a, b, r, M)
    return n, a, b, params, cert


def random_certificates(trials: int, seed: int = 0, adversarial: bool = False,
                        max_attempts: int | None = None) -> list[dict]:
    """Randomised certificates over the phase family on subintervals of [1e2, 1e5].

    Lemmas alternate between trials.  Draws that fail a precondition are
    redrawn, except in adversarial mode where they are reported with status
    ``precondition_violation``.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = np.random.default_rng(seed)
    rows = []
    attempts = 0
    limit = max_attempts or 100 * trials
    while len(rows) < trials:
        attempts += 1
        if attempts > limit:
            raise RuntimeError("could not draw enough admissible trials")
        lemma = "first_derivative" if len(rows) % 2 == 0 else "second_derivative"
        drawn = _trial(rng, lemma, adversarial)
        if drawn is None:
            continue
        n, a, b, params, cert = drawn
        row = {"lemma": lemma, "n": n, "a": a, "b": b, **params}
        try:
            c = cert()
        except PreconditionError as exc:
            if not adversarial:
                continue
            row.update(status="precondition_violation", numeric_abs=float("nan"),
                       analytic_bound=float("nan"), slack=float("nan"), message=str(exc))
        else:
            row.update(status="ok", numeric_abs=c.numeric_abs, analytic_bound=c.analytic_bound,
                       slack=c.slack, message="")
        rows.append(row)
    return rows
