"""
The chi factor and the theta phase
==================================

The functional equation ties zeta(s) to zeta(1 - s) through
chi(s) = pi^(s-1/2) Gamma((1-s)/2) / Gamma(s/2).  On the critical line
chi has modulus one, and its inverse square root is exp(i theta(t)).
"""

# %%
# log Gamma comes from a shifted Stirling series.  Its imaginary part is the
# continuous argument, which is what makes theta a smooth function.
import cmath
import math

import numpy as np

from hardyz import chi, log_gamma, theta
from hardyz.special_fns import theta_array

print("log Gamma(1/2)  =", log_gamma(0.5), " (log sqrt(pi) =", 0.5 * math.log(math.pi), ")")
print("log Gamma(1/4 + 50i) =", log_gamma(0.25 + 50j))

# %%
# |chi(1/2 + it)| = 1, and off the line the modulus follows (t / 2 pi)^(1/2 - sigma).
for t in (100.0, 1e4, 1e6):
    print(f"t = {t:>9.0f}   |chi(1/2+it)| - 1 = {abs(chi(complex(0.5, t))) - 1:+.2e}")
s = 0.25 + 200j
print("|chi(1/4 + 200i)| =", abs(chi(s)), " Stirling:", (200 / (2 * math.pi)) ** 0.25)

# %%
# theta(t) is the phase of chi^(-1/2).  Doubling it recovers chi itself.
v = theta(500.0)
print(f"theta(500) = {v.theta:.15f} +- {v.err_bound:.1e}")
print("exp(2 i theta) chi(1/2 + 500i) =", cmath.exp(2j * v.theta) * chi(0.5 + 500j))

# %%
# Its slope is (1/2) log(t / 2 pi): the local density of zeros.
t = np.array([1e2, 1e3, 1e4])
h = 1e-3
slope = (theta_array(t + h) - theta_array(t - h)) / (2 * h)
print("theta'(t)        ", slope)
print("(1/2)log(t/2pi)  ", 0.5 * np.log(t / (2 * math.pi)))
