"""Numerical toolkit for Hardy's Z-function and the sign-change argument on the critical line."""

from .errors import AccuracyError, DomainError, EvaluationError, PoleError, PreconditionError
from .hardy_harness import (
    HardyScanReport,
    ScalingFit,
    ZeroBracket,
    count_zeros,
    fit_scaling,
    hardy_scan,
    lower_bound_contour,
    scan_zeros,
    verify_cauchy_rectangle,
)
from .oscillatory import (
    BoundCertificate,
    Phase,
    PhaseFamily,
    first_derivative_certificate,
    log_inequality_check,
    oscillatory_quad,
    random_certificates,
    second_derivative_certificate,
    split_sum_bound,
)
from .special_fns import ComplexPoint, ThetaValue, chi, log_gamma, theta
from .z_function import ZEvaluation, z_definition, z_dirichlet, z_riemann_siegel
from .zeta_eval import ApproxConfig, ZetaValue, convexity_check, zeta_em, zeta_euler_product, zeta_first_approx

__version__ = "0.1.0"
