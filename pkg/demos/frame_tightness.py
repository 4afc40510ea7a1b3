"""Discrete needlet frames tighten with denser grids and gentler dilations.

The ideal frame constants are the extremes of the dilation sum
g(lambda) = sum_j f(a^(2j) lambda)^2, a periodic function of log lambda.
Discrete point sets with equal-area weights approximate them; oversampling
the Fibonacci grids drives the measured bound ratio down toward the ideal
one, and shrinking the dilation a drives the ideal ratio itself toward 1.
"""

import numpy as np

from needlets import NeedletProfile, calderon_bounds, calderon_g, estimate_frame_bounds

profile = NeedletProfile(1)

print("ideal dilation-sum bounds per dilation a:")
for a in (1.1, 1.2, 1.5, 2.0):
    lo, hi = calderon_bounds(profile, a)
    print(f"  a={a:<4} A_a={lo:.6f}  B_a={hi:.6f}  B_a/A_a={hi / lo:.8f}")

print("\nperiodicity of the dilation sum (a=2): g(lambda) vs g(4 lambda):")
lam = np.array([1.0, 1.9, 3.4])
print("  ", calderon_g(profile, 2.0, lam))
print("  ", calderon_g(profile, 2.0, 4.0 * lam))

print("\nmeasured frame bounds on degrees 1..16 (a=2, scales j=-6..0):")
for ov in (1.0, 2.0, 4.0):
    est = estimate_frame_bounds(profile, 2.0, (-6, 0), 16, oversample=ov)
    print(f"  oversample={ov:<3} A={est.a_hat:.6f}  B={est.b_hat:.6f}  "
          f"B/A={est.ratio:.6f}")
lo, hi = calderon_bounds(profile, 2.0)
print(f"  ideal ratio for comparison: {hi / lo:.6f}")
