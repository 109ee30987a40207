"""
Three ways to evaluate zeta
===========================

Euler-Maclaurin summation is the reference.  The first-approximation
Dirichlet polynomial sum_{n<=x} n^-s + x^(1-s)/(s-1) is what the upper bound
argument works with, and the Euler product is a sanity check for sigma > 1.
"""

# %%
import math

import numpy as np

from hardyz import ApproxConfig, PreconditionError, convexity_check, zeta_em, zeta_euler_product, zeta_first_approx

for s in (2.0, 0.5, 0.5 + 14.134725j):
    v = zeta_em(s)
    print(f"zeta({s}) = {v.value:.12f}   err <= {v.err_bound:.1e}   terms {v.terms_used}")

# %%
# The first approximation needs |t| < 2 pi x / C.  With the default rule
# x = C t / pi its error stays inside K x^-sigma (K = 2).
s = 0.5 + 1000j
fa, ref = zeta_first_approx(s), zeta_em(s)
print(f"x = {fa.terms_used}, |difference| = {abs(fa.value - ref.value):.3e}, budget {fa.err_bound:.3e}")
try:
    zeta_first_approx(s, x=600)
except PreconditionError as exc:
    print("cutoff too small:", exc, "| max admissible t:", round(exc.max_t, 2))

# %%
# For sigma > 1 all three agree.
s = 2.5 + 40j
print("EM     ", zeta_em(s).value)
print("product", zeta_euler_product(s).value)
print("approx ", zeta_first_approx(s).value)

# %%
# The convexity envelope t^((1-sigma)/2) (log t)^5 is very generous.
rep = convexity_check(np.geomspace(100, 1e5, 25), [0.5, 0.75, 1.0])
print("max |zeta| / envelope per sigma:", rep.ratios.max(axis=1))
