import math

import numpy as np
import pytest

from hardyz import (
    AccuracyError,
    PreconditionError,
    count_zeros,
    fit_scaling,
    hardy_scan,
    lower_bound_contour,
    scan_zeros,
    verify_cauchy_rectangle,
)
from hardyz.hardy_harness import HardyScanReport, riemann_von_mangoldt
from hardyz.oscillatory import adaptive_gauss
from hardyz.z_function import z_definition_array

import oracle_values as ov


@pytest.fixture(scope="module")
def report100():
    return hardy_scan(100.0)


def test_scan_zeros_below_50():
    br = scan_zeros(10, 50, tol=1e-9)
    assert len(br) == 10
    for b, ref in zip(br, ov.ZEROS_BELOW_50):
        assert b.t_lo < b.refined_t < b.t_hi
        assert b.t_lo <= ref <= b.t_hi
        assert abs(b.refined_t - ref) <= 1e-9
        assert b.z_lo * b.z_hi < 0


def test_scan_zeros_empty_window():
    assert scan_zeros(10, 14) == []


def test_scan_zeros_preconditions():
    with pytest.raises(ValueError):
        scan_zeros(5, 20)
    with pytest.raises(ValueError):
        scan_zeros(20, 10)
    with pytest.raises(ValueError):
        scan_zeros(10, 20, tol=0)


def test_brackets_clear_the_noise():
    br = scan_zeros(100, 300, tol=1e-8)
    ends = np.array([[b.t_lo, b.t_hi] for b in br]).ravel()
    z, _, err = z_definition_array(ends)
    assert np.all(np.abs(z) > 5 * err)
    assert all(b.z_lo * b.z_hi < 0 for b in br)
    starts = [b.refined_t for b in br]
    assert starts == sorted(starts)


def test_count_zeros():
    c50, c100 = count_zeros(50), count_zeros(100)
    assert c50.count == 10 and c100.count == ov.N_ZEROS_BELOW_100
    assert c100.deviation < math.log(100)
    assert count_zeros(200).count >= c100.count
    assert riemann_von_mangoldt(100) == pytest.approx(29.0023, abs=1e-4)


def test_dirichlet_route_scan_agrees():
    exact = [b.refined_t for b in scan_zeros(1000, 1100, tol=1e-6)]
    approx = [b.refined_t for b in scan_zeros(1000, 1100, tol=1e-6, method="dirichlet_poly")]
    assert len(approx) == len(exact)
    assert max(abs(a - b) for a, b in zip(approx, exact)) < 0.1


def test_hardy_scan_100(report100):
    r = report100
    assert r.ratio < 0.5 and r.sign_changes >= 10
    assert r.lower_ratio >= 0.9 and r.bound_T34 <= 10
    assert abs(r.I) <= r.J + 2 * r.quad_err
    assert abs(r.I.imag) <= 10 * r.quad_err
    assert r.ratio < 1 - 3 * r.quad_err / r.J


def test_triangle_identity_between_zeros(report100):
    # on a zero-free stretch, int |Z| = |int Z|
    z = [b.refined_t for b in report100.zeros]
    a, b = z[3], z[4]
    f = lambda t: z_definition_array(t)[0] + 0j
    signed = adaptive_gauss(f, np.array([a, b]), 1e-10)
    unsigned = adaptive_gauss(lambda t: np.abs(f(t)), np.array([a, b]), 1e-10)
    assert abs(abs(signed.value) - unsigned.value.real) <= signed.error + unsigned.error + 1e-12


def test_hardy_scan_worker_independent():
    a = hardy_scan(150.0, workers=1)
    b = hardy_scan(150.0, workers=4)
    assert (a.I, a.J, a.quad_err, a.sign_changes) == (b.I, b.J, b.quad_err, b.sign_changes)


def test_hardy_scan_preconditions():
    with pytest.raises(ValueError):
        hardy_scan(20.0)
    with pytest.raises(ValueError):
        hardy_scan(100.0, quad_tol=-1)


def test_hardy_scan_accuracy_error_carries_partial():
    with pytest.raises(AccuracyError) as info:
        hardy_scan(100.0, quad_tol=1e-30)
    assert isinstance(info.value.partial, HardyScanReport)


def test_hardy_scan_1000():
    r = hardy_scan(1000.0)
    assert r.lower_ratio >= 0.9 and r.ratio < 0.5
    assert abs(r.I) <= r.J + 2 * r.quad_err


def test_lower_bound_contour_100():
    rec = lower_bound_contour(100.0)
    assert abs(rec["side2"] - 100j) <= 5
    assert rec["closure_residual"] <= rec["quad_budget"]
    assert all(rec["checks"].values())


def test_cauchy_rectangle():
    rec = verify_cauchy_rectangle(100.0, 0.25)
    assert rec["closure_residual"] <= 1e-6
    assert rec["closure_residual"] <= rec["quad_budget"]
    with pytest.raises(PreconditionError):
        verify_cauchy_rectangle(100.0, 0.6)


def _fake(T, J, I):
    return HardyScanReport(T=T, I=complex(I), J=J, quad_err=0.0, ratio=abs(I) / J,
                           bound_T34=abs(I) / T**0.75, lower_ratio=J / T, sign_changes=1)


def test_fit_scaling():
    reps = [_fake(T, 1.7 * T, 3.0 * T**0.5) for T in (200.0, 1e3, 5e3)]
    fj = fit_scaling(reps, "J")
    assert fj.slope == pytest.approx(1.0) and fj.max_residual < 1e-12
    fi = fit_scaling(reps, "abs_I")
    assert fi.envelope_ok
    assert not fit_scaling([_fake(T, T, 20 * T**0.75) for T in (200.0, 1e3, 5e3)], "abs_I").envelope_ok
    with pytest.raises(ValueError):
        fit_scaling(reps[:2], "J")
    with pytest.raises(ValueError):
        fit_scaling(reps[::-1], "J")
