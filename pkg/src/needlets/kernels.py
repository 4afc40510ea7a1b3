"""Needlet kernels: spectral profile, truncation, evaluation, localization.

The kernel at scale t is the zonal series

    K_t(cos gamma) = sum_{l>=1} f(t^2 l(l+1)) (2l+1) P_l(cos gamma)

for the profile f(s) = s^r f0(s).  The default f0(s) = e^(-s) gives the
Mexican family: non-oscillating for small r, with sharp localization around
gamma = 0 at small t.  Surface-area normalization constants are dropped
throughout; only normalization-invariant quantities (correlations, frame
bound ratios) are ever compared across conventions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .defaults import DEFAULTS, degree_cap
from .errors import DegreeCapExceeded
from .legendre import legendre_series

__all__ = [
    "NeedletProfile",
    "KernelSpec",
    "LocalizationReport",
    "profile_eval",
    "choose_lmax",
    "make_kernel",
    "kernel_eval",
    "localization_check",
    "calderon_g",
    "calderon_bounds",
]

# name -> log f0; profiles must decay fast enough to kill any power of s
_LOG_F0 = {
    "exponential": lambda s: -s,
    "gaussian": lambda s: -s * s,
}


@dataclass(frozen=True)
class NeedletProfile:
    """Spectral window f(s) = s^r f0(s); r >= 1 forces f(0) = 0."""

    r: int
    f0: str = "exponential"

    def __post_init__(self):
        if int(self.r) != self.r or self.r < 1:
            raise ValueError("profile exponent r must be a positive integer")
        object.__setattr__(self, "r", int(self.r))
        if self.f0 not in _LOG_F0:
            raise ValueError(f"unknown f0 family {self.f0!r}; choose from {sorted(_LOG_F0)}")


@dataclass(frozen=True)
class KernelSpec:
    """A truncated kernel: coefficients f(t^2 l(l+1)) (2l+1) for l = 1..lmax."""

    profile: NeedletProfile
    t: float
    lmax: int
    coeffs: np.ndarray


@dataclass(frozen=True)
class LocalizationReport:
    """Per-scale sups of t^2 |K_t(cos theta)| (theta/t)^N over theta in [t, pi]."""

    t_list: tuple[float, ...]
    n_exponent: int
    sups: tuple[float, ...]
    ratio: float
    passed: bool


def profile_eval(profile: NeedletProfile, s):
    """f(s) = s^r f0(s), computed as exp(r log s + log f0(s)) to dodge overflow."""
    sv = np.asarray(s, dtype=float)
    scalar = sv.ndim == 0
    sv = np.atleast_1d(sv)
    if np.any(sv < 0):
        raise ValueError("profile argument must be >= 0")
    out = np.zeros_like(sv)
    pos = sv > 0
    if np.any(pos):
        sp = sv[pos]
        logf = profile.r * np.log(sp) + _LOG_F0[profile.f0](sp)
        out[pos] = np.exp(logf)
    return float(out[0]) if scalar else out


def _series_terms(profile: NeedletProfile, t: float, ls: np.ndarray, squared: bool) -> np.ndarray:
    s = (t * t) * ls * (ls + 1.0)
    f = profile_eval(profile, s)
    w = f * f if squared else np.abs(f)
    return w * (2.0 * ls + 1.0)


def choose_lmax(profile: NeedletProfile, t: float, eps_tail: float | None = None,
                squared: bool = False) -> int:
    """Smallest truncation degree whose dropped tail is below eps_tail (relative).

    The scan uses the analytic term envelope |f(t^2 l(l+1))|^p (2l+1), p = 1
    or 2 for `squared`; terms past the spectral peak decay faster than any
    geometric sequence, so extending the scan until the last term is far
    below eps_tail times the running total makes the remainder negligible.
    """
    if t <= 0:
        raise ValueError("scale t must be > 0")
    eps = DEFAULTS["eps_tail"] if eps_tail is None else float(eps_tail)
    if not 0.0 < eps < 1.0:
        raise ValueError("eps_tail must lie in (0, 1)")
    cap = degree_cap()

    l_peak = max(8, int(math.sqrt(max(profile.r, 1)) / t) + 1)
    hi = max(64, 6 * l_peak)
    hard_stop = 64 * max(cap, hi)
    while True:
        ls = np.arange(1, hi + 1, dtype=float)
        g = _series_terms(profile, t, ls, squared)
        total = float(np.sum(g))
        if total == 0.0:
            return 8  # everything underflowed; any truncation is exact
        if g[-1] < 1e-6 * eps * total and (g[-1] == 0.0 or g[-1] < g[-2]):
            break
        hi *= 2
        if hi > hard_stop:
            raise DegreeCapExceeded(
                f"series for t={t} does not settle below degree {hard_stop}")

    retained = np.cumsum(g)
    dropped = total - retained
    ok = np.nonzero(dropped <= eps * retained)[0]
    lmax = max(int(ok[0]) + 1, 8)
    if lmax > cap:
        raise DegreeCapExceeded(
            f"t={t} needs lmax={lmax}, above the configured cap {cap}")
    return lmax


def make_kernel(profile: NeedletProfile, t: float, eps_tail: float | None = None,
                lmax: int | None = None) -> KernelSpec:
    """Build the truncated kernel coefficient vector for scale t."""
    if lmax is None:
        lmax = choose_lmax(profile, t, eps_tail)
    else:
        lmax = int(lmax)
        if lmax < 1:
            raise ValueError("lmax must be >= 1")
        if lmax > degree_cap():
            raise DegreeCapExceeded(f"lmax={lmax} above the configured cap")
    ls = np.arange(1, lmax + 1, dtype=float)
    f = profile_eval(profile, (t * t) * ls * (ls + 1.0))
    return KernelSpec(profile=profile, t=float(t), lmax=lmax,
                      coeffs=f * (2.0 * ls + 1.0))


def kernel_eval(spec: KernelSpec, cos_gamma):
    """K_t at inner product cos_gamma (scalar or array).

    The kernel depends on a point pair only through x . y, so this is the
    whole evaluation API; summation order is fixed ascending with
    compensation, making batched and pointwise calls bit-identical.
    """
    return legendre_series(spec.coeffs, cos_gamma, offset=1)


def localization_check(profile: NeedletProfile, t_list, n_exponent: int,
                       eps_tail: float | None = None,
                       grid_points: int = 1536) -> LocalizationReport:
    """Probe spatial decay: sup over theta in [t, pi] of t^2 |K_t| (theta/t)^N.

    A localized kernel family keeps these sups comparable across scales; the
    report passes when their max/min ratio stays within the stability ratio.
    """
    if n_exponent < 1:
        raise ValueError("decay exponent N must be >= 1")
    t_list = tuple(float(t) for t in t_list)
    sups = []
    for t in t_list:
        spec = make_kernel(profile, t, eps_tail)
        thetas = np.unique(np.concatenate([
            np.linspace(t, math.pi, grid_points),
            np.geomspace(t, math.pi, grid_points // 3),
        ]))
        vals = kernel_eval(spec, np.cos(thetas))
        weighted = (t * t) * np.abs(vals) * (thetas / t) ** n_exponent
        sups.append(float(np.max(weighted)))
    lo, hi = min(sups), max(sups)
    ratio = hi / lo if lo > 0 else math.inf
    passed = all(map(math.isfinite, sups)) and ratio <= DEFAULTS["stability_ratio"]
    return LocalizationReport(t_list=t_list, n_exponent=int(n_exponent),
                              sups=tuple(sups), ratio=ratio, passed=passed)


def calderon_g(profile: NeedletProfile, a: float, lam):
    """g(lam) = sum over integer j of f(a^(2j) lam)^2.

    The sum is invariant under lam -> a^2 lam; j runs outward from the
    spectral peak until terms fall below the configured floor relative to
    the largest term seen.
    """
    a = float(a)
    if a <= 1.0 + 1e-9:
        raise ValueError("dilation a must exceed 1")
    lv = np.asarray(lam, dtype=float)
    scalar = lv.ndim == 0
    lv = np.atleast_1d(lv)
    if np.any(lv <= 0):
        raise ValueError("lambda must be positive")

    floor = DEFAULTS["calderon_term_floor"]
    j_center = int(round(math.log(max(profile.r, 1.0)) / (2.0 * math.log(a))))
    total = np.zeros_like(lv)
    peak = 0.0
    for direction in (1, -1):
        j = j_center if direction == 1 else j_center - 1
        while True:
            f = profile_eval(profile, (a ** (2 * j)) * lv)
            term = f * f
            tmax = float(np.max(term))
            peak = max(peak, tmax)
            if tmax < floor * max(peak, 1e-300):
                break
            total += term
            j += direction
    out = total
    return float(out[0]) if scalar else out


def calderon_bounds(profile: NeedletProfile, a: float,
                    grid_points: int | None = None) -> tuple[float, float]:
    """(A_a, B_a) = extremes of the dilation sum g over one period [1, a^2]."""
    n = DEFAULTS["calderon_grid_points"] if grid_points is None else int(grid_points)
    lam = np.geomspace(1.0, float(a) ** 2, n, endpoint=False)
    g = calderon_g(profile, a, lam)
    return float(np.min(g)), float(np.max(g))
