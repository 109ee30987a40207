"""
Why Z must change sign
======================

If Z kept one sign on [T, 2T] we would have |int Z| = int |Z|.  The integral
of |Z| grows linearly in T while int Z stays of order T^(3/4), so the ratio
|I| / J collapses and Z is forced to change sign.  Here is the mechanism at
three heights.
"""

# %%
from hardyz import count_zeros, fit_scaling, hardy_scan, scan_zeros

for b in scan_zeros(10, 30, tol=1e-10):
    print(f"zero in [{b.t_lo:.2f}, {b.t_hi:.2f}]  ->  {b.refined_t:.10f}")
c = count_zeros(100)
print(f"sign changes below 100: {c.count} (main term {c.main_term:.2f})")

# %%
reports = [hardy_scan(T) for T in (100.0, 200.0, 400.0, 800.0)]
print("     T          I           J    |I|/J    J/T  |I|/T^0.75  sign changes")
for r in reports:
    print(f"{r.T:6.0f} {r.I.real:10.3f} {r.J:11.3f} {r.ratio:8.4f} {r.lower_ratio:6.3f} "
          f"{r.bound_T34:11.3f} {r.sign_changes:13d}")

# %%
fit = fit_scaling(reports, "J")
print(f"J grows like T^{fit.slope:.3f}")
print("|I| <= 10 T^(3/4) everywhere:", fit_scaling(reports, "abs_I").envelope_ok)
