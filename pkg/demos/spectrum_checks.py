"""Which power spectra the decay machinery accepts, and why.

A spectrum c_l = u(l) enters the correlation bounds through two conditions:
a two-sided envelope k0 l^-alpha <= u(l) <= k1 l^-alpha, and k-th differences
falling like l^-(alpha+k).  Both are checked numerically here for the pure
power law, for a log-modulated rational family, and for a deliberately
mis-declared decay exponent.
"""

from needlets import (
    power_spectrum,
    rational_log_spectrum,
    verify_derivative_decay,
    verify_envelope,
)


def show(name, spectrum, k_max=3):
    env = verify_envelope(spectrum, 2000)
    dd = verify_derivative_decay(spectrum, k_max, (10, 2000))
    print(f"{name}:")
    print(f"  envelope  k0={env.k0_hat:.4f}  k1={env.k1_hat:.4f}  "
          f"spread={env.ratio:.4g}  -> {'OK' if env.passed else 'FLAGGED'}")
    cs = "  ".join(f"C_{k}={c:.3f}" for k, c in enumerate(dd.c_estimates))
    print(f"  differences  {cs}  -> {'OK' if dd.passed else 'FLAGGED'}")


show("pure power law, alpha = 3", power_spectrum(3.0))

show("log-modulated rational family, alpha = 3",
     rational_log_spectrum(3.0, 3.0, [1.0], [1.0], f_name="two_plus_sin"))

show("heavier rational family, alpha = 4",
     rational_log_spectrum(4.0, 3.0, [1.0, 2.0], [1.0, 0.0, 3.0],
                           f_name="two_plus_sin"))

print("\na declared alpha that contradicts the true decay is caught twice:")
try:
    rational_log_spectrum(3.0, 2.0, [1.0], [1.0])
except ValueError as exc:
    print(f"  at construction: {exc}")
loose = rational_log_spectrum(3.0, 2.0, [1.0], [1.0], validate=False)
env = verify_envelope(loose, 2000)
print(f"  by the envelope check: spread {env.ratio:.0f} over the cap "
      f"-> passed={env.passed}")
