"""Difference operators on degree-indexed coefficient sequences.

A `CoeffSequence` stores a finite window a_offset .. a_top of a sequence on
the nonnegative integers; indices outside the window read as zero.  The
operator realized by `multiply_cos_minus_one` rewrites multiplication of a
zonal series by (cos theta - 1) as an operation on its coefficients:

    sum_l out_l Z_l(cos theta) = (cos theta - 1) sum_l a_l Z_l(cos theta)

with out = R(l) (a_{l-1} - 2 a_l + a_{l+1}) + S(l) (a_{l+1} - a_l), where
R(l) = l/(2l+1) and S(l) = 1/(2l+1).  Iterating N times multiplies the
series by (cos theta - 1)^N while improving coefficient decay by l^(-2N).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "CoeffSequence",
    "forward_difference",
    "backward_difference",
    "first_difference_weight",
    "second_difference_weight",
    "multiply_cos_minus_one",
    "multiply_cos_minus_one_power",
    "decay_rate_estimate",
]


@dataclass(frozen=True)
class CoeffSequence:
    """A finite window of a degree-indexed sequence, zero outside the window."""

    offset: int
    values: np.ndarray

    def __post_init__(self):
        if self.offset < 0:
            raise ValueError("offset must be >= 0")
        object.__setattr__(self, "values", np.asarray(self.values, dtype=float))

    @property
    def top(self) -> int:
        return self.offset + self.values.size - 1

    def __getitem__(self, l: int) -> float:
        if self.offset <= l <= self.top:
            return float(self.values[l - self.offset])
        return 0.0

    def dense(self, top: int | None = None) -> np.ndarray:
        """Values a_0 .. a_top as a contiguous array."""
        if top is None:
            top = self.top
        out = np.zeros(top + 1)
        hi = min(top, self.top)
        if hi >= self.offset:
            out[self.offset:hi + 1] = self.values[:hi - self.offset + 1]
        return out


def forward_difference(s: CoeffSequence) -> CoeffSequence:
    """a_{l+1} - a_l; the window loses its top index."""
    if s.values.size < 2:
        raise ValueError("need at least two stored values")
    return CoeffSequence(s.offset, np.diff(s.values))


def backward_difference(s: CoeffSequence) -> CoeffSequence:
    """a_l - a_{l-1}, reading a_{offset-1} as 0; the window keeps its shape."""
    if s.values.size < 2:
        raise ValueError("need at least two stored values")
    shifted = np.concatenate(([0.0], s.values[:-1]))
    return CoeffSequence(s.offset, s.values - shifted)


def first_difference_weight(l):
    """S(l) = 1/(2l+1), the weight on the backward difference."""
    l = np.asarray(l, dtype=float)
    out = 1.0 / (2.0 * l + 1.0)
    return float(out) if out.ndim == 0 else out


def second_difference_weight(l):
    """R(l) = l/(2l+1), the weight on the mixed second difference."""
    l = np.asarray(l, dtype=float)
    out = l / (2.0 * l + 1.0)
    return float(out) if out.ndim == 0 else out


def multiply_cos_minus_one(s: CoeffSequence) -> CoeffSequence:
    """Coefficients of (cos theta - 1) times the zonal series of `s`.

    The result is stored densely from degree 0 and its support extends one
    degree above the input's.
    """
    if s.values.size == 0:
        raise ValueError("empty coefficient sequence")
    top = s.top + 1
    a = s.dense(top + 1)  # one slot of zero padding above the new top
    ls = np.arange(top + 1, dtype=float)
    prev = np.concatenate(([0.0], a[:top]))        # a_{l-1}, a_{-1} = 0
    here = a[:top + 1]
    nxt = a[1:top + 2]
    out = (second_difference_weight(ls) * (prev - 2.0 * here + nxt)
           + first_difference_weight(ls) * (nxt - here))
    return CoeffSequence(0, out)


def multiply_cos_minus_one_power(s: CoeffSequence, n: int) -> CoeffSequence:
    """n-fold application of `multiply_cos_minus_one`."""
    if n < 1:
        raise ValueError("n must be >= 1")
    out = s
    for _ in range(n):
        out = multiply_cos_minus_one(out)
    return out


def decay_rate_estimate(s: CoeffSequence, l_min: int, l_max: int) -> float:
    """Least-squares slope of log|a_l| against log l over [l_min, l_max]."""
    if not 1 <= l_min < l_max:
        raise ValueError("need l_max > l_min >= 1")
    if l_min < s.offset or l_max > s.top:
        raise ValueError("window extends outside the stored values")
    ls = np.arange(l_min, l_max + 1)
    vals = np.abs(s.values[l_min - s.offset:l_max - s.offset + 1])
    if np.any(vals == 0.0):
        raise ValueError("zero coefficient inside the fit window; adjust the window")
    slope, _ = np.polyfit(np.log(ls), np.log(vals), 1)
    return float(slope)
