"""Hardy's Z(t) by three routes.

``definition``      Re(exp(i theta(t)) zeta(1/2 + i t)) with zeta by Euler-Maclaurin.
``riemann_siegel``  the main cosine sum over n <= sqrt(t / 2 pi), no correction terms.
``dirichlet_poly``  the first-approximation Dirichlet polynomial anchored at a window [T, 2T).

The ``*_array`` functions are the vectorised workhorses used by the
harness; the scalar functions wrap them into ``ZEvaluation`` records.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, PreconditionError
from .special_fns import _PI_LD, _theta_ld
from .zeta_eval import ApproxConfig, em_series

__all__ = [
    "ZEvaluation",
    "z_definition",
    "z_definition_array",
    "z_riemann_siegel",
    "z_riemann_siegel_array",
    "rs_term_count",
    "z_dirichlet",
    "z_dirichlet_array",
    "evaluate_z",
    "WINDOW_EPS",
]

METHODS = ("definition", "riemann_siegel", "dirichlet_poly")
WINDOW_EPS = 1e-12

_LD = np.longdouble
_TWO_PI_LD = 2 * _PI_LD


@dataclass(frozen=True)
class ZEvaluation:
    t: float
    z: float
    method: str
    err_bound: float
    imag_residual: float = 0.0

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}")


def _heights(t) -> np.ndarray:
    t = np.atleast_1d(np.asarray(t, dtype=float))
    if not np.all(np.isfinite(t)):
        raise DomainError("non-finite height")
    return t


def z_definition_array(t, error_target: float = 1e-10):
    """Return (z, imag_residual, err_bound) arrays for t >= 1."""
    t = _heights(t)
    if np.any(t < 1):
        raise DomainError("z_definition: need t >= 1")
    th, th_err = _theta_ld(t)
    v, e, _ = em_series(0.5, t, error_target, shift=th)
    err = e + np.abs(v) * th_err
    return v.real.copy(), np.abs(v.imag), err


def z_definition(t: float, error_target: float = 1e-10) -> ZEvaluation:
    z, im, err = z_definition_array(t, error_target)
    return ZEvaluation(float(t), float(z[0]), "definition", float(err[0]), float(im[0]))


def rs_term_count(t) -> np.ndarray:
    """Number of terms n with n <= sqrt(t / 2 pi), i.e. 2 pi n^2 <= t (inclusive)."""
    t = np.atleast_1d(np.asarray(t, dtype=float))
    m = np.floor(np.sqrt(t / (2 * math.pi))).astype(np.int64)
    # correct the float sqrt in both directions
    m = np.where(2 * math.pi * (m + 1.0) ** 2 <= t, m + 1, m)
    m = np.where((m > 0) & (2 * math.pi * m.astype(float) ** 2 > t), m - 1, m)
    return m


def _reduced_cos_sum(t, shift, counts, weights_power=0.5):
    """sum_{n <= counts} n^-1/2 cos(shift - t log n) and the matching sine sum."""
    n_max = int(counts.max(initial=0))
    out_c = np.zeros(t.shape)
    out_s = np.zeros(t.shape)
    if n_max == 0:
        return out_c, out_s
    n = np.arange(1, n_max + 1)
    logn = np.log(n.astype(_LD))
    w = n.astype(float) ** -weights_power
    rows = max(1, (1 << 20) // n_max)
    tl = t.astype(_LD)
    for lo in range(0, t.size, rows):
        sl = slice(lo, lo + rows)
        ph = shift[sl, None] - tl[sl, None] * logn[None, :]
        ph = (ph - _TWO_PI_LD * np.round(ph / _TWO_PI_LD)).astype(float)
        W = np.where(n[None, :] <= counts[sl, None], w[None, :], 0.0)
        out_c[sl] = (np.cos(ph) * W).sum(axis=1)
        out_s[sl] = (np.sin(ph) * W).sum(axis=1)
    return out_c, out_s


def z_riemann_siegel_array(t, kappa: float = 1.0):
    """Return (z, err_bound) with err_bound = kappa * t^(-1/4)."""
    t = _heights(t)
    if np.any(t < 2 * math.pi):
        raise DomainError("z_riemann_siegel: need t >= 2*pi")
    tl = t.astype(_LD)
    lead = tl / 2 * np.log(tl / _TWO_PI_LD) - tl / 2 - _PI_LD / 8
    c, _ = _reduced_cos_sum(t, lead, rs_term_count(t))
    return 2.0 * c, kappa * t**-0.25


def z_riemann_siegel(t: float, kappa: float = 1.0) -> ZEvaluation:
    z, err = z_riemann_siegel_array(t, kappa)
    return ZEvaluation(float(t), float(z[0]), "riemann_siegel", float(err[0]))


def _check_window(t, T_anchor):
    if not T_anchor >= 10:
        raise PreconditionError(f"z_dirichlet: T_anchor must be >= 10, got {T_anchor}")
    hi = 2 * T_anchor * (1 - WINDOW_EPS)
    bad = (t < T_anchor) | (t > hi)
    if np.any(bad):
        raise PreconditionError(
            f"z_dirichlet: t must lie in [T, 2T) = [{T_anchor}, {2 * T_anchor})",
            max_t=hi,
        )


def z_dirichlet_array(t, T_anchor: float, cfg: ApproxConfig = ApproxConfig(), a: float = 2.0, b: float = 2.0):
    """Return (z, imag_residual, err_bound) for t in [T_anchor, 2 T_anchor)."""
    t = _heights(t)
    _check_window(t, T_anchor)
    x = cfg.x_rule(T_anchor, cfg.C)
    counts = np.full(t.shape, int(math.floor(x)), dtype=np.int64)
    th, _ = _theta_ld(t)
    c, s = _reduced_cos_sum(t, th, counts)
    err = a * math.sqrt(T_anchor) / t + b / math.sqrt(T_anchor)
    return c, np.abs(s), err


def z_dirichlet(t: float, cfg: ApproxConfig = ApproxConfig(), T_anchor: float | None = None,
                a: float = 2.0, b: float = 2.0) -> ZEvaluation:
    if T_anchor is None:
        T_anchor = t
    z, im, err = z_dirichlet_array(t, T_anchor, cfg, a, b)
    return ZEvaluation(float(t), float(z[0]), "dirichlet_poly", float(err[0]), float(im[0]))


def evaluate_z(t, method: str = "definition", *, error_target: float = 1e-10,
               kappa: float = 1.0, T_anchor: float | None = None,
               cfg: ApproxConfig = ApproxConfig()):
    """Dispatch to one route; returns (z, err_bound) arrays."""
    if method == "definition":
        z, _, err = z_definition_array(t, error_target)
    elif method == "riemann_siegel":
        z, err = z_riemann_siegel_array(t, kappa)
    elif method == "dirichlet_poly":
        if T_anchor is None:
            raise ValueError("dirichlet_poly needs T_anchor")
        z, _, err = z_dirichlet_array(t, T_anchor, cfg)
    else:
        raise ValueError(f"unknown Z method {method!r}")
    return z, err
