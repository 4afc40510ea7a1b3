"""Legendre polynomials, zonal series, and real spherical harmonics.

Everything here is built on upward three-term recurrences, which are stable
for arguments in [-1, 1].  Spherical harmonics use a normalized associated
Legendre recurrence that carries the orthonormalization inside the recursion,
so no factorial is ever formed and degrees well past 150 stay finite.

Conventions: P_l is the ordinary Legendre polynomial (P_l(1) = 1); the zonal
harmonic of degree l is Z_l(x) = (2l+1) P_l(x), with the surface-area
constant dropped; real harmonics Y_{l,m} are orthonormal on the sphere with
cos(m phi) for m > 0 and sin(|m| phi) for m < 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .defaults import degree_cap
from .errors import DegreeCapExceeded

__all__ = [
    "LegendreTable",
    "SphHarmPoint",
    "legendre_batch",
    "legendre_series",
    "zonal_eval",
    "zonal_series",
    "recursion_residual",
    "generating_function_check",
    "real_sph_harm",
    "sph_harm_flat_index",
    "sph_harm_matrix",
]

# arguments may stray past [-1, 1] by this much before we call it an error
X_DOMAIN_TOL = 1e-12


def _check_x(x: float) -> float:
    x = float(x)
    if not math.isfinite(x) or abs(x) > 1.0 + X_DOMAIN_TOL:
        raise ValueError(f"argument {x!r} lies outside [-1, 1]")
    return min(1.0, max(-1.0, x))


def _check_degree(l: int) -> int:
    l = int(l)
    if l < 0:
        raise ValueError("degree must be >= 0")
    cap = degree_cap()
    if l > cap:
        raise DegreeCapExceeded(f"degree {l} exceeds the configured cap {cap}")
    return l


@dataclass(frozen=True)
class LegendreTable:
    """Values P_0(x) .. P_lmax(x) at a single abscissa."""

    lmax: int
    x: float
    values: np.ndarray


@dataclass(frozen=True)
class SphHarmPoint:
    """A spherical-harmonic evaluation request: degree, order, colatitude, longitude."""

    l: int
    m: int
    theta: float
    phi: float

    def __post_init__(self):
        if abs(self.m) > self.l:
            raise ValueError(f"order |m|={abs(self.m)} exceeds degree l={self.l}")
        if not 0.0 <= self.theta <= math.pi + 1e-12:
            raise ValueError(f"colatitude {self.theta!r} outside [0, pi]")

    @property
    def laplacian_eigenvalue(self) -> float:
        """l(l+1), the spherical-Laplacian eigenvalue at this degree."""
        return float(self.l * (self.l + 1))


def legendre_batch(x: float, lmax: int) -> LegendreTable:
    """Evaluate P_0(x) .. P_lmax(x) with (l+1) P_{l+1} = (2l+1) x P_l - l P_{l-1}."""
    x = _check_x(x)
    lmax = _check_degree(lmax)
    values = np.empty(lmax + 1)
    values[0] = 1.0
    if lmax >= 1:
        values[1] = x
    for l in range(1, lmax):
        values[l + 1] = ((2 * l + 1) * x * values[l] - l * values[l - 1]) / (l + 1)
    return LegendreTable(lmax=lmax, x=x, values=values)


def legendre_series(coeffs: np.ndarray, x, offset: int = 0):
    """Sum of coeffs[l - offset] * P_l(x) over l = offset .. offset + len - 1.

    `x` may be a scalar or an array.  Terms are accumulated in ascending l
    with Neumaier compensation, so the result is independent of how callers
    batch or partition their evaluation points.
    """
    coeffs = np.asarray(coeffs, dtype=float)
    if offset < 0:
        raise ValueError("offset must be >= 0")
    xs = np.asarray(x, dtype=float)
    scalar = xs.ndim == 0
    xv = np.atleast_1d(xs).astype(float)
    if xv.size and np.max(np.abs(xv)) > 1.0 + X_DOMAIN_TOL:
        raise ValueError("series arguments must lie in [-1, 1]")
    xv = np.clip(xv, -1.0, 1.0)
    top = offset + coeffs.size - 1

    total = np.zeros_like(xv)
    carry = np.zeros_like(xv)
    p_prev = np.zeros_like(xv)  # P_{-1} = 0
    p = np.ones_like(xv)        # P_0
    for l in range(top + 1):
        if l >= offset:
            term = coeffs[l - offset] * p
            new = total + term
            carry += np.where(np.abs(total) >= np.abs(term),
                              (total - new) + term,
                              (term - new) + total)
            total = new
        p, p_prev = ((2 * l + 1) * xv * p - l * p_prev) / (l + 1), p
    out = total + carry
    return float(out[0]) if scalar else out


def zonal_eval(l: int, x: float) -> float:
    """Zonal harmonic Z_l(x) = (2l+1) P_l(x)."""
    l = _check_degree(l)
    table = legendre_batch(x, l)
    return (2 * l + 1) * float(table.values[l])


def zonal_series(values: np.ndarray, x, offset: int = 0):
    """Sum of a_l * Z_l(x) = a_l (2l+1) P_l(x) for a coefficient window."""
    values = np.asarray(values, dtype=float)
    ls = np.arange(offset, offset + values.size)
    return legendre_series(values * (2 * ls + 1), x, offset=offset)


def recursion_residual(l: int, x: float) -> float:
    """Defect of (2l+1)(x-1) P_l = (l+1) P_{l+1} - (2l+1) P_l + l P_{l-1}.

    P_{-1} is taken to be 0, so l = 0 is allowed.
    """
    l = _check_degree(l)
    x = _check_x(x)
    table = legendre_batch(x, l + 1)
    p_lm1 = float(table.values[l - 1]) if l >= 1 else 0.0
    p_l = float(table.values[l])
    p_lp1 = float(table.values[l + 1])
    lhs = (2 * l + 1) * (x - 1.0) * p_l
    rhs = (l + 1) * p_lp1 - (2 * l + 1) * p_l + l * p_lm1
    return lhs - rhs


def generating_function_check(xi: float, eta: float, terms: int) -> float:
    """|sum_{l<=terms} P_l(eta) xi^l - (1 - 2 xi eta + xi^2)^{-1/2}|."""
    xi = float(xi)
    if abs(xi) >= 1.0:
        raise ValueError("|xi| must be < 1 for the series to converge")
    eta = _check_x(eta)
    disc = 1.0 - 2.0 * xi * eta + xi * xi
    if disc <= 0.0:
        raise ValueError("generating function is singular: 1 - 2 xi eta + xi^2 <= 0")
    table = legendre_batch(eta, terms)
    powers = xi ** np.arange(terms + 1)
    partial = math.fsum(table.values * powers)
    return abs(partial - disc ** -0.5)


# ---------------------------------------------------------------------------
# real spherical harmonics
# ---------------------------------------------------------------------------

_SQRT_INV_4PI = math.sqrt(1.0 / (4.0 * math.pi))


def sph_harm_flat_index(l: int, m: int) -> int:
    """Position of (l, m) in the flat degree-major layout over l >= 1."""
    if l < 1 or abs(m) > l:
        raise ValueError(f"invalid (l, m) = ({l}, {m}) for the flat layout")
    return l * l - 1 + (m + l)


def real_sph_harm(p: SphHarmPoint) -> float:
    """Real orthonormal spherical harmonic at (theta, phi).

    m = 0 is the zonal harmonic; m > 0 pairs with sqrt(2) cos(m phi) and
    m < 0 with sqrt(2) sin(|m| phi).  Built by ascending the sectoral
    diagonal and then raising the degree, all in normalized form.
    """
    _check_degree(p.l)
    m = abs(p.m)
    x = math.cos(p.theta)
    s = math.sin(p.theta)

    pmm = _SQRT_INV_4PI
    for k in range(1, m + 1):
        pmm *= -math.sqrt((2 * k + 1) / (2.0 * k)) * s
    if p.l == m:
        plm = pmm
    else:
        p_lo = pmm
        p_hi = math.sqrt(2 * m + 3.0) * x * pmm
        for l in range(m + 2, p.l + 1):
            a = math.sqrt((4.0 * l * l - 1.0) / (l * l - m * m))
            b = math.sqrt(((l - 1.0) ** 2 - m * m) / (4.0 * (l - 1.0) ** 2 - 1.0))
            p_lo, p_hi = p_hi, a * (x * p_hi - b * p_lo)
        plm = p_hi

    if p.m == 0:
        return plm
    if p.m > 0:
        return math.sqrt(2.0) * plm * math.cos(m * p.phi)
    return math.sqrt(2.0) * plm * math.sin(m * p.phi)


def sph_harm_matrix(lmax: int, theta, phi) -> np.ndarray:
    """All real harmonics Y_{l,m} for 1 <= l <= lmax at the given points.

    Returns shape (npoints, (lmax+1)^2 - 1) with columns in the flat
    (l, m) layout of `sph_harm_flat_index`.
    """
    lmax = _check_degree(int(lmax))
    if lmax < 1:
        raise ValueError("need lmax >= 1")
    th = np.atleast_1d(np.asarray(theta, dtype=float))
    ph = np.atleast_1d(np.asarray(phi, dtype=float))
    if th.shape != ph.shape or th.ndim != 1:
        raise ValueError("theta and phi must be 1-d arrays of equal length")
    x = np.cos(th)
    s = np.sin(th)
    npts = th.size
    out = np.empty((npts, (lmax + 1) ** 2 - 1))

    sqrt2 = math.sqrt(2.0)
    pmm = np.full(npts, _SQRT_INV_4PI)
    for m in range(lmax + 1):
        if m > 0:
            pmm = pmm * (-math.sqrt((2 * m + 1) / (2.0 * m))) * s
        if m > 0:
            ccol = sqrt2 * np.cos(m * ph)
            scol = sqrt2 * np.sin(m * ph)
        p_lo = np.zeros(npts)
        p_hi = pmm
        for l in range(m, lmax + 1):
            if l == m + 1:
                p_lo, p_hi = p_hi, math.sqrt(2 * m + 3.0) * x * pmm
            elif l > m + 1:
                a = math.sqrt((4.0 * l * l - 1.0) / (l * l - m * m))
                b = math.sqrt(((l - 1.0) ** 2 - m * m) / (4.0 * (l - 1.0) ** 2 - 1.0))
                p_lo, p_hi = p_hi, a * (x * p_hi - b * p_lo)
            if l == 0:
                continue
            if m == 0:
                out[:, sph_harm_flat_index(l, 0)] = p_hi
            else:
                out[:, sph_harm_flat_index(l, m)] = ccol * p_hi
                out[:, sph_harm_flat_index(l, -m)] = scol * p_hi
    return out
