"""Windowed integrals of Z(t), zero scanning, and contour checks.

On a window [T, 2T] the scan computes

    I(T) = int Z dt        and        J(T) = int |Z| dt.

If Z kept one sign on the window the two would agree in modulus; the
reported ratio |I|/J far below one is the finite-T face of the argument
that Z must change sign.  Zeros are bracketed on a grid, bisected, and
used as panel edges so |Z| is integrated without kinks.
"""

from __future__ import annotations

import math
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import AccuracyError, PreconditionError
from .oscillatory import QuadResult, adaptive_gauss
from .special_fns import _theta_ld, chi_inv_sqrt, theta_prime
from .z_function import WINDOW_EPS, z_dirichlet_array, z_riemann_siegel_array
from .zeta_eval import ApproxConfig, em_series, zeta_em_array

__all__ = [
    "ZeroBracket",
    "HardyScanReport",
    "ScalingFit",
    "ZeroCount",
    "scan_zeros",
    "count_zeros",
    "hardy_scan",
    "lower_bound_contour",
    "verify_cauchy_rectangle",
    "fit_scaling",
    "riemann_von_mangoldt",
]

# panels per parallel work unit; fixed so results do not depend on worker count
_CHUNK = 64


@dataclass(frozen=True)
class ZeroBracket:
    t_lo: float
    t_hi: float
    z_lo: float
    z_hi: float
    refined_t: float
    tol: float
    iterations: int = 0


@dataclass(frozen=True)
class HardyScanReport:
    T: float
    I: complex
    J: float
    quad_err: float
    ratio: float
    bound_T34: float
    lower_ratio: float
    sign_changes: int
    method: str = "definition"
    converged: bool = True
    zeros: tuple = field(default=(), repr=False, compare=False)


@dataclass(frozen=True)
class ScalingFit:
    T_values: tuple
    metric: str
    slope: float
    intercept: float
    max_residual: float
    envelope_c: float | None = None
    envelope_ok: bool | None = None


@dataclass(frozen=True)
class ZeroCount:
    T: float
    count: int
    main_term: float
    deviation: float


def riemann_von_mangoldt(T: float) -> float:
    x = T / (2 * math.pi)
    return x * math.log(x) - x + 7.0 / 8.0


# --------------------------------------------------------------------------
# Z evaluation shared by the scanner and the integrals


class _Evaluator:
    """Z (or exp(i theta) zeta, keeping its imaginary residual) by one route."""

    def __init__(self, method: str, error_target: float, T_anchor: float | None = None,
                 cfg: ApproxConfig = ApproxConfig(), kappa: float = 1.0):
        if method not in ("definition", "riemann_siegel", "dirichlet_poly"):
            raise ValueError(f"unknown Z method {method!r}")
        if method == "dirichlet_poly" and T_anchor is None:
            raise ValueError("dirichlet_poly needs a window anchor")
        self.method = method
        self.error_target = error_target
        self.T_anchor = T_anchor
        self.cfg = cfg
        self.kappa = kappa

    def complex_values(self, t):
        """Return (values, err_bounds); values are complex, Z = real part."""
        t = np.asarray(t, dtype=float)
        if self.method == "definition":
            th, th_err = _theta_ld(t)
            v, e, _ = em_series(0.5, t, self.error_target, shift=th)
            return v, e + np.abs(v) * th_err
        if self.method == "riemann_siegel":
            z, e = z_riemann_siegel_array(t, self.kappa)
            return z.astype(complex), e
        c, _, e = z_dirichlet_array(t, self.T_anchor, self.cfg)
        # the sine part carries the sign-free residual; keep it signed
        th, _ = _theta_ld(t)
        return c + 1j * _dirichlet_imag(t, th, self.T_anchor, self.cfg), e

    def __call__(self, t):
        """Return (Z, sign noise); only the definition route can certify signs."""
        v, e = self.complex_values(t)
        if self.method != "definition":
            e = np.zeros_like(e)
        return v.real.copy(), e


def _dirichlet_imag(t, th, T_anchor, cfg):
    from .z_function import _reduced_cos_sum

    counts = np.full(t.shape, int(math.floor(cfg.x_rule(T_anchor, cfg.C))), dtype=np.int64)
    _, s = _reduced_cos_sum(t, th, counts)
    return s


# --------------------------------------------------------------------------
# zeros


def _scan_step(t_end: float) -> float:
    # a quarter of the mean zero spacing 2 pi / log(t / 2 pi)
    return min(0.5, math.pi / (4.0 * float(theta_prime(t_end))))


def _certain_grid(evaluator, t_start, t_end):
    h = _scan_step(max(t_end, 10.0))
    n = max(1, int(math.ceil((t_end - t_start) / h)))
    grid = np.linspace(t_start, t_end, n + 1)
    z, err = evaluator(grid)
    # nudge grid points whose sign is not resolved by the error budget
    for k in range(1, 8):
        weak = np.abs(z) <= 5 * err
        if not weak.any():
            break
        step = h / (7.0 * k)
        inner = weak.copy()
        inner[[0, -1]] = False
        grid = grid.copy()
        grid[inner] += step
        if weak[0]:
            grid[0] = t_start
        if weak[-1]:
            grid[-1] = t_end
        z, err = evaluator(grid)
    return grid, z, err


def _bisect(evaluator, lo, hi, zlo, tol):
    lo, hi = lo.copy(), hi.copy()
    slo = np.sign(zlo)
    iters = np.zeros(lo.shape, dtype=int)
    active = (hi - lo) > tol
    while active.any():
        idx = np.nonzero(active)[0]
        mid = 0.5 * (lo[idx] + hi[idx])
        zm, _ = evaluator(mid)
        same = np.sign(zm) == slo[idx]
        exact = zm == 0
        lo[idx] = np.where(same & ~exact, mid, lo[idx])
        hi[idx] = np.where(~same & ~exact, mid, hi[idx])
        lo[idx[exact]] = mid[exact]
        hi[idx[exact]] = mid[exact]
        iters[idx] += 1
        active = (hi - lo) > tol
    return 0.5 * (lo + hi), iters


def _resolve_dips(evaluator, grid, z, err, passes=2, sub=16):
    """Resample around same-sign local minima of |Z|, where a close pair may hide."""
    for _ in range(passes):
        a, m, b = z[:-2], z[1:-1], z[2:]
        dip = (np.sign(a) == np.sign(m)) & (np.sign(m) == np.sign(b))
        dip &= (np.abs(m) <= np.abs(a)) & (np.abs(m) <= np.abs(b))
        idx = np.nonzero(dip)[0] + 1
        if idx.size == 0:
            break
        frac = np.linspace(0.0, 1.0, sub + 1)[1:-1]
        new = np.concatenate([grid[i - 1] + (grid[i + 1] - grid[i - 1]) * frac for i in idx])
        new = new[~np.isin(new, grid)]
        zn, en = evaluator(new)
        keep = np.abs(zn) > 5 * en
        grid = np.concatenate([grid, new[keep]])
        z = np.concatenate([z, zn[keep]])
        err = np.concatenate([err, en[keep]])
        order = np.argsort(grid, kind="stable")
        grid, z, err = grid[order], z[order], err[order]
    return grid, z, err


def _scan(evaluator, t_start, t_end, tol):
    grid, z, err = _certain_grid(evaluator, t_start, t_end)
    grid, z, _ = _resolve_dips(evaluator, grid, z, err)
    flip = np.nonzero(np.sign(z[:-1]) * np.sign(z[1:]) < 0)[0]
    if flip.size == 0:
        return []
    refined, iters = _bisect(evaluator, grid[flip], grid[flip + 1], z[flip], tol)
    return [
        ZeroBracket(float(grid[i]), float(grid[i + 1]), float(z[i]), float(z[i + 1]),
                    float(r), float(tol), int(k))
        for i, r, k in zip(flip, refined, iters)
    ]


def scan_zeros(t_start: float, t_end: float, tol: float = 1e-9, method: str = "definition",
               error_target: float = 1e-10) -> list[ZeroBracket]:
    """Bracket and bisect every sign change of Z on [t_start, t_end].

    Zeros of even order, and pairs closer than the grid step, are not seen.
    """
    if not (t_end > t_start >= 10):
        raise ValueError(f"scan_zeros: need t_end > t_start >= 10, got [{t_start}, {t_end}]")
    if not tol > 0:
        raise ValueError("scan_zeros: tol must be positive")
    anchor = t_start if method == "dirichlet_poly" else None
    if anchor is not None:
        t_end = min(t_end, 2 * anchor * (1 - WINDOW_EPS))
    return _scan(_Evaluator(method, error_target, anchor), t_start, t_end, tol)


def count_zeros(T: float, tol: float = 1e-6) -> ZeroCount:
    """Sign changes of Z on [10, T] (there are none below 10) against N(T)'s main term."""
    if T < 20:
        raise ValueError("count_zeros: need T >= 20")
    n = len(scan_zeros(10.0, T, tol))
    main = riemann_von_mangoldt(T)
    return ZeroCount(float(T), n, main, abs(n - main))


# --------------------------------------------------------------------------
# windowed integrals


def _chunked_quad(f, edges, tol, workers, noise_density=0.0) -> QuadResult:
    """adaptive_gauss over fixed chunks of panels, reduced in order."""
    total = edges[-1] - edges[0]
    bounds = list(range(0, edges.size - 1, _CHUNK)) + [edges.size - 1]
    pieces = [edges[a : b + 1] for a, b in zip(bounds[:-1], bounds[1:])]

    def run(e):
        return adaptive_gauss(f, e, tol * (e[-1] - e[0]) / total, noise_density=noise_density)

    if workers > 1 and len(pieces) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run, pieces))
    else:
        results = [run(e) for e in pieces]
    vals = np.concatenate([r.panel_values for r in results])
    edges_out = np.concatenate([r.edges[:-1] for r in results] + [[edges[-1]]])
    err = math.fsum(r.error for r in results)
    return QuadResult(
        complex(math.fsum(vals.real), math.fsum(vals.imag)),
        err,
        all(r.converged for r in results) and err <= tol,
        int(vals.size),
        sum(r.evaluations for r in results),
        edges_out,
        vals,
    )


def _default_quad_tol(T: float) -> float:
    return 1e-8 * T


def hardy_scan(T: float, quad_tol: float | None = None, method: str = "definition",
               workers: int = 1, zero_tol: float = 1e-6) -> HardyScanReport:
    """I(T), J(T) and the sign-change count on [T, 2T].

    The default ``quad_tol`` is 1e-8 * T.  Raises AccuracyError (with the
    report attached as ``partial``) if the quadrature misses its budget.
    """
    if T < 50:
        raise ValueError(f"hardy_scan: need T >= 50, got {T}")
    if quad_tol is None:
        quad_tol = _default_quad_tol(T)
    if not quad_tol > 0:
        raise ValueError("hardy_scan: quad_tol must be positive")
    lo, hi = float(T), 2.0 * T
    if method == "dirichlet_poly":
        hi = 2.0 * T * (1 - WINDOW_EPS)
    target = min(1e-8, max(1e-12, quad_tol / (8.0 * T)))
    ev = _Evaluator(method, target, T if method == "dirichlet_poly" else None)

    brackets = _scan(ev, lo, hi, zero_tol)
    zeros = np.array([b.refined_t for b in brackets])
    edges = np.unique(np.concatenate([[lo], zeros[(zeros > lo) & (zeros < hi)], [hi]]))

    budget = {"eval": 0.0}
    lock = threading.Lock()

    def integrand(t):
        v, e = ev.complex_values(t)
        worst = float(np.max(e))
        with lock:
            budget["eval"] = max(budget["eval"], worst)
        return v

    q = _chunked_quad(integrand, edges, quad_tol, workers, noise_density=8 * target)
    # between consecutive sign changes Z keeps its sign, so |int| = int |Z| per sub-panel
    J = math.fsum(np.abs(q.panel_values.real))
    I = q.value
    # misplacing a zero by zero_tol costs about |Z'| zero_tol^2 in J
    quad_err = q.error + (hi - lo) * budget["eval"] + len(brackets) * 10 * zero_tol**2 * math.log(hi)
    report = HardyScanReport(
        T=float(T), I=I, J=J, quad_err=quad_err, ratio=abs(I) / J,
        bound_T34=abs(I) / T**0.75, lower_ratio=J / T, sign_changes=len(brackets),
        method=method, converged=q.converged, zeros=tuple(brackets),
    )
    if not q.converged:
        raise AccuracyError(f"hardy_scan: quadrature error {q.error:.3g} above {quad_tol:.3g}", report)
    return report


# --------------------------------------------------------------------------
# contours


def _segment_integral(g, z0: complex, z1: complex, panels: int, tol: float, workers: int = 1):
    """int_{z0}^{z1} g(s) ds along a straight segment (g vectorised in s)."""
    d = z1 - z0
    length = abs(d)
    edges = np.linspace(0.0, length, panels + 1)
    q = _chunked_quad(lambda u: g(z0 + d * (u / length)), edges, tol, workers)
    return q.value * (d / length), q.error, q.converged


def _line_panels(T_hi: float, length: float) -> int:
    # about four panels per oscillation of n^-it at the effective cutoff
    return max(8, int(math.ceil(length * (math.log(T_hi) + 1.0) / math.pi)))


def lower_bound_contour(T: float, tol: float = 1e-8, workers: int = 1) -> dict:
    """The three sides from 1/2+iT via 2+iT, 2+2iT to 1/2+2iT, against the direct segment."""
    if T < 50:
        raise ValueError(f"lower_bound_contour: need T >= 50, got {T}")
    target = max(1e-13, tol / (10 * T))

    def zeta(s):
        return zeta_em_array(s, target)[0]

    corners = [0.5 + 1j * T, 2 + 1j * T, 2 + 2j * T, 0.5 + 2j * T]
    n_vert = _line_panels(2 * T, T)
    sides, errs, ok = [], [], True
    for (a, b), n in zip(zip(corners[:-1], corners[1:]), (8, n_vert, 8)):
        v, e, c = _segment_integral(zeta, a, b, n, tol, workers)
        sides.append(v); errs.append(e); ok &= c
    direct, e_direct, c = _segment_integral(zeta, corners[0], corners[3], n_vert, tol, workers)
    ok &= c
    budget = math.fsum(errs) + e_direct + target * (3 + 2 * T) * 2
    residual = abs(sum(sides) - direct)
    quarter = T**0.25
    out = {
        "T": float(T),
        "side1": sides[0],
        "side2": sides[1],
        "side3": sides[2],
        "direct": direct,
        "closure_residual": residual,
        "quad_budget": budget,
        "side2_deviation": abs(sides[1] - 1j * T),
        "horizontal_over_T14": (abs(sides[0]) / quarter, abs(sides[2]) / quarter),
        "converged": bool(ok),
    }
    out["checks"] = {
        "side2_within_5_of_iT": out["side2_deviation"] <= 5.0,
        "closure_within_budget": residual <= budget,
        "horizontal_within_10_T14": max(out["horizontal_over_T14"]) <= 10.0,
    }
    if not ok:
        raise AccuracyError("lower_bound_contour: quadrature did not converge", out)
    return out


def verify_cauchy_rectangle(T: float, delta: float, tol: float = 1e-7, workers: int = 1) -> dict:
    """Integrate chi(s)^(-1/2) zeta(s) around 1/2+iT, 1+delta+iT, 1+delta+2iT, 1/2+2iT."""
    if T < 50:
        raise ValueError(f"verify_cauchy_rectangle: need T >= 50, got {T}")
    if not 0 < delta < 0.5:
        raise PreconditionError(f"verify_cauchy_rectangle: need 0 < delta < 1/2, got {delta}")
    target = max(1e-13, tol / (10 * T))

    def g(s):
        s = np.asarray(s, dtype=complex)
        return chi_inv_sqrt(s) * zeta_em_array(s, target)[0]

    sr = 1.0 + delta
    corners = [0.5 + 1j * T, sr + 1j * T, sr + 2j * T, 0.5 + 2j * T]
    n_vert = _line_panels(2 * T, T)
    bottom, e1, c1 = _segment_integral(g, corners[0], corners[1], 8, tol, workers)
    right, e2, c2 = _segment_integral(g, corners[1], corners[2], n_vert, tol, workers)
    top, e3, c3 = _segment_integral(g, corners[2], corners[3], 8, tol, workers)
    left, e4, c4 = _segment_integral(g, corners[0], corners[3], n_vert, tol, workers)
    residual = abs(bottom + right + top - left)
    budget = e1 + e2 + e3 + e4 + target * (2 * T + 2 * (sr - 0.5)) * 4
    scale = T ** (0.25 + delta / 2)
    out = {
        "T": float(T),
        "delta": float(delta),
        "bottom": bottom,
        "right": right,
        "top": top,
        "left": left,
        "closure_residual": residual,
        "quad_budget": budget,
        "horizontal_over_scale": (abs(bottom) / scale, abs(top) / scale),
        "converged": bool(c1 and c2 and c3 and c4),
    }
    out["checks"] = {"closure_within_budget": residual <= budget}
    if not out["converged"]:
        raise AccuracyError("verify_cauchy_rectangle: quadrature did not converge", out)
    return out


# --------------------------------------------------------------------------
# scaling


def fit_scaling(reports, metric: str = "J", envelope_c: float = 10.0) -> ScalingFit:
    """Least-squares slope of log(metric) against log T.

    For ``abs_I`` the slope is reported but carries no claim; the envelope
    |I| <= envelope_c * T^(3/4) is checked at every point instead.
    """
    reports = list(reports)
    if len(reports) < 3:
        raise ValueError("fit_scaling: need at least 3 reports")
    T = np.array([r.T for r in reports], dtype=float)
    if np.any(np.diff(T) <= 0):
        raise ValueError("fit_scaling: T values must be strictly increasing")
    if metric == "J":
        y = np.array([r.J for r in reports])
    elif metric == "abs_I":
        y = np.array([abs(r.I) for r in reports])
    else:
        raise ValueError(f"unknown metric {metric!r}")
    lx, ly = np.log(T), np.log(y)
    slope, intercept = np.polyfit(lx, ly, 1)
    resid = ly - (slope * lx + intercept)
    env_ok = None
    if metric == "abs_I":
        env_ok = bool(np.all(y <= envelope_c * T**0.75))
    return ScalingFit(tuple(T.tolist()), metric, float(slope), float(intercept),
                      float(np.max(np.abs(resid))), envelope_c if metric == "abs_I" else None, env_ok)
