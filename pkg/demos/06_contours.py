"""
Contour integrals behind the lower bound
========================================

int zeta over the critical segment [1/2 + iT, 1/2 + 2iT] equals the sum of
three sides of a rectangle reaching to sigma = 2.  On that far side zeta is
1 + (small), so the integral is iT + O(1).  A second rectangle checks that
chi^(-1/2) zeta is analytic to the right of the line.
"""

# %%
from hardyz import lower_bound_contour, verify_cauchy_rectangle

rec = lower_bound_contour(100.0)
for k in ("side1", "side2", "side3", "direct"):
    print(f"{k:>7}: {rec[k]:.8f}")
print(f"|side2 - 100i| = {rec['side2_deviation']:.4f};  closure residual {rec['closure_residual']:.1e}"
      f" (budget {rec['quad_budget']:.1e})")

# %%
rect = verify_cauchy_rectangle(100.0, 0.25)
print(f"rectangle with delta = 1/4: residual {rect['closure_residual']:.1e} <= {rect['quad_budget']:.1e}")
