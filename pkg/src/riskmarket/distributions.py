"""Renewable-output distributions on a bounded support with positive density.

Each distribution exposes the pdf/cdf/quantile triple, inverse-transform
sampling from a caller-supplied generator, and the partial power moments
``int_0^theta (y - w)^k f(w) dw`` (k = 1, 2) that every market formula is
assembled from.  Values are immutable after construction and all methods are
pure, so instances can be shared freely across threads; sampling mutates only
the caller-owned generator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import ndtr

__all__ = [
    "RenewableDistribution",
    "UniformRenewable",
    "TruncatedNormalRenewable",
    "PiecewiseLinearRenewable",
]

_SQRT_2PI = math.sqrt(2.0 * math.pi)


def _promote(x) -> tuple[np.ndarray, bool]:
    arr = np.asarray(x, dtype=float)
    return arr, arr.ndim == 0


def _ret(arr: np.ndarray, scalar: bool):
    return float(arr[()]) if scalar else arr


class RenewableDistribution:
    """Random renewable output W supported on [0, w_max] with positive pdf."""

    kind: str = ""
    w_max: float

    def pdf(self, w):
        raise NotImplementedError

    def cdf(self, w):
        raise NotImplementedError

    def quantile(self, p):
        raise NotImplementedError

    def partial_power_integral(self, y, theta, k):
        """Return int_0^theta (y - w)^k f(w) dw for k in {1, 2}."""
        raise NotImplementedError

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        """Draw n i.i.d. values by inverse transform; deterministic given the
        generator state, so a seeded rng reproduces the sequence exactly."""
        return np.asarray(self.quantile(rng.random(int(n))), dtype=float)

    # shared argument validation -------------------------------------------

    def _check_support(self, w: np.ndarray) -> None:
        if np.any(w < 0.0) or np.any(w > self.w_max):
            raise ValueError(f"w outside support [0, {self.w_max}]")

    @staticmethod
    def _check_prob(p: np.ndarray) -> None:
        if np.any(p < 0.0) or np.any(p > 1.0):
            raise ValueError("p outside [0, 1]")

    def _check_moment_args(self, theta: np.ndarray, k: int) -> None:
        if k not in (1, 2):
            raise ValueError("k must be 1 or 2")
        if np.any(theta < 0.0):
            raise ValueError("theta must be >= 0")
        if np.any(theta > self.w_max):
            raise ValueError(f"theta must be <= w_max = {self.w_max}")


@dataclass(frozen=True)
class UniformRenewable(RenewableDistribution):
    """Uniform output on [0, w_max]."""

    w_max: float
    kind = "uniform"

    def __post_init__(self):
        if not self.w_max > 0.0:
            raise ValueError("w_max must be > 0")

    def pdf(self, w):
        arr, scalar = _promote(w)
        self._check_support(arr)
        return _ret(np.full_like(arr, 1.0 / self.w_max), scalar)

    def cdf(self, w):
        arr, scalar = _promote(w)
        self._check_support(arr)
        return _ret(arr / self.w_max, scalar)

    def quantile(self, p):
        arr, scalar = _promote(p)
        self._check_prob(arr)
        return _ret(arr * self.w_max, scalar)

    def partial_power_integral(self, y, theta, k):
        y_arr, s1 = _promote(y)
        t_arr, s2 = _promote(theta)
        self._check_moment_args(t_arr, k)
        out = (y_arr ** (k + 1) - (y_arr - t_arr) ** (k + 1)) / ((k + 1) * self.w_max)
        return _ret(np.asarray(out, dtype=float), s1 and s2)


@dataclass(frozen=True)
class TruncatedNormalRenewable(RenewableDistribution):
    """Normal(loc, scale) conditioned on [0, w_max]."""

    w_max: float
    loc: float
    scale: float
    kind = "truncated-normal"

    def __post_init__(self):
        if not self.w_max > 0.0:
            raise ValueError("w_max must be > 0")
        if not self.scale > 0.0:
            raise ValueError("scale must be > 0")

    def _mass(self) -> float:
        # probability mass of the parent normal on [0, w_max]
        return float(ndtr((self.w_max - self.loc) / self.scale) - ndtr(-self.loc / self.scale))

    def pdf(self, w):
        arr, scalar = _promote(w)
        self._check_support(arr)
        t = (arr - self.loc) / self.scale
        dens = np.exp(-0.5 * t * t) / (_SQRT_2PI * self.scale * self._mass())
        return _ret(dens, scalar)

    def cdf(self, w):
        arr, scalar = _promote(w)
        self._check_support(arr)
        return _ret(self._cdf_raw(arr), scalar)

    def _cdf_raw(self, arr: np.ndarray) -> np.ndarray:
        lo = ndtr(-self.loc / self.scale)
        return (ndtr((arr - self.loc) / self.scale) - lo) / self._mass()

    def quantile(self, p):
        # No closed inverse on the truncated support; bisect the cdf down to
        # a 1e-12 bracket, which is well below every downstream tolerance.
        arr, scalar = _promote(p)
        self._check_prob(arr)
        lo = np.zeros(arr.shape, dtype=float)
        hi = np.full(arr.shape, self.w_max, dtype=float)
        for _ in range(64):
            mid = 0.5 * (lo + hi)
            below = self._cdf_raw(mid) < arr
            lo = np.where(below, mid, lo)
            hi = np.where(below, hi, mid)
            if float(np.max(hi - lo)) <= 1e-12:
                break
        return _ret(0.5 * (lo + hi), scalar)

    def partial_power_integral(self, y, theta, k):
        y_arr, s1 = _promote(y)
        t_arr, s2 = _promote(theta)
        self._check_moment_args(t_arr, k)
        s = self.scale
        t0 = np.full(np.broadcast(y_arr, t_arr).shape, -self.loc / s)
        t1 = (t_arr - self.loc) / s
        c = y_arr - self.loc
        phi0 = np.exp(-0.5 * t0 * t0) / _SQRT_2PI
        phi1 = np.exp(-0.5 * t1 * t1) / _SQRT_2PI
        d_cdf = ndtr(t1) - ndtr(t0)
        d_pdf = phi1 - phi0
        if k == 1:
            out = c * d_cdf + s * d_pdf
        else:
            second = d_cdf + t0 * phi0 - t1 * phi1
            out = c * c * d_cdf + 2.0 * c * s * d_pdf + s * s * second
        return _ret(np.asarray(out / self._mass(), dtype=float), s1 and s2)


@dataclass(frozen=True)
class PiecewiseLinearRenewable(RenewableDistribution):
    """Pdf interpolated linearly through (w_i, f_i) breakpoints.

    Breakpoints must be strictly increasing, start at 0, and carry positive
    heights; the trapezoid area is normalized to one at construction.
    """

    breakpoints: tuple[tuple[float, float], ...]
    kind = "piecewise-linear-pdf"

    def __post_init__(self):
        pts = tuple((float(w), float(f)) for w, f in self.breakpoints)
        object.__setattr__(self, "breakpoints", pts)
        if len(pts) < 2:
            raise ValueError("at least two breakpoints required")
        ws = np.array([w for w, _ in pts])
        fs = np.array([f for _, f in pts])
        if ws[0] != 0.0:
            raise ValueError("breakpoints must start at w = 0")
        if np.any(np.diff(ws) <= 0.0):
            raise ValueError("breakpoint positions must be strictly increasing")
        if np.any(fs <= 0.0):
            raise ValueError("breakpoint densities must be > 0")
        area = float(np.sum(0.5 * (fs[1:] + fs[:-1]) * np.diff(ws)))
        fs = fs / area
        cum = np.concatenate([[0.0], np.cumsum(0.5 * (fs[1:] + fs[:-1]) * np.diff(ws))])
        cum[-1] = 1.0
        object.__setattr__(self, "_w", ws)
        object.__setattr__(self, "_f", fs)
        object.__setattr__(self, "_slope", np.diff(fs) / np.diff(ws))
        object.__setattr__(self, "_cum", cum)

    @property
    def w_max(self) -> float:
        return float(self._w[-1])

    def _segment(self, w: np.ndarray) -> np.ndarray:
        return np.clip(np.searchsorted(self._w, w, side="right") - 1, 0, len(self._w) - 2)

    def pdf(self, w):
        arr, scalar = _promote(w)
        self._check_support(arr)
        i = self._segment(arr)
        return _ret(self._f[i] + self._slope[i] * (arr - self._w[i]), scalar)

    def cdf(self, w):
        arr, scalar = _promote(w)
        self._check_support(arr)
        i = self._segment(arr)
        t = arr - self._w[i]
        return _ret(self._cum[i] + self._f[i] * t + 0.5 * self._slope[i] * t * t, scalar)

    def quantile(self, p):
        arr, scalar = _promote(p)
        self._check_prob(arr)
        i = np.clip(np.searchsorted(self._cum, arr, side="right") - 1, 0, len(self._w) - 2)
        gap = arr - self._cum[i]
        f0 = self._f[i]
        s = self._slope[i]
        # root of 0.5*s*t^2 + f0*t = gap in the cancellation-free form
        t = 2.0 * gap / (f0 + np.sqrt(f0 * f0 + 2.0 * s * gap))
        return _ret(np.clip(self._w[i] + t, 0.0, self.w_max), scalar)

    def partial_power_integral(self, y, theta, k):
        y_arr, s1 = _promote(y)
        t_arr, s2 = _promote(theta)
        self._check_moment_args(t_arr, k)
        y_b, t_b = np.broadcast_arrays(y_arr, t_arr)
        total = np.zeros(y_b.shape, dtype=float)
        for i in range(len(self._w) - 1):
            lo, hi = self._w[i], self._w[i + 1]
            c1 = self._slope[i]
            c0 = self._f[i] - c1 * lo
            upper = np.clip(t_b, lo, hi)
            total += _segment_moment(y_b, lo, upper, c0, c1, k)
        return _ret(total, s1 and s2)


def _segment_moment(y, a, b, c0, c1, k):
    """Exact int_a^b (y - w)^k (c0 + c1 w) dw for a linear density piece."""

    if k == 1:
        def anti(w):
            return c0 * y * w + 0.5 * (c1 * y - c0) * w * w - c1 * w ** 3 / 3.0
    else:
        def anti(w):
            return (c0 * y * y * w
                    + 0.5 * (c1 * y * y - 2.0 * c0 * y) * w * w
                    + (c0 - 2.0 * c1 * y) * w ** 3 / 3.0
                    + 0.25 * c1 * w ** 4)

    return anti(b) - anti(a)
