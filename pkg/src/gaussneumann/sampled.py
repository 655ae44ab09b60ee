"""Functions known through samples on a 1D grid."""

from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.interpolate import CubicHermiteSpline, CubicSpline

from .errors import DomainError

_GL_X, _GL_W = np.polynomial.legendre.leggauss(6)


@dataclass(frozen=True)
class SampledFunction:
    grid: np.ndarray
    values: np.ndarray
    derivative: Optional[np.ndarray] = None

    def __post_init__(self):
        grid = np.asarray(self.grid, dtype=float)
        values = np.asarray(self.values, dtype=float)
        if grid.ndim != 1 or grid.shape != values.shape or grid.size < 2:
            raise DomainError("grid and values must be 1D arrays of equal length >= 2")
        if not np.all(np.isfinite(grid)) or np.any(np.diff(grid) <= 0):
            raise DomainError("grid must be finite and strictly increasing")
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "values", values)
        if self.derivative is not None:
            d = np.asarray(self.derivative, dtype=float)
            if d.shape != grid.shape:
                raise DomainError("derivative samples must match the grid")
            object.__setattr__(self, "derivative", d)

    def interpolant(self):
        """C^1 cubic Hermite interpolant when slopes are known, else a cubic spline."""
        if self.derivative is not None:
            return CubicHermiteSpline(self.grid, self.values, self.derivative)
        return CubicSpline(self.grid, self.values)

    def __call__(self, x):
        return self.interpolant()(x)

    def scaled(self, c):
        d = None if self.derivative is None else c * self.derivative
        return SampledFunction(self.grid, c * self.values, d)


def integrate_pieces(func, grid, lo=None, hi=None):
    """Composite 6-point Gauss-Legendre over the cells of ``grid``.

    ``func`` must accept an array of abscissae. Exact for piecewise
    polynomials of degree <= 11 on the grid, which covers products of cubic
    interpolants; smooth weights are integrated to high order.
    """
    g = np.asarray(grid, dtype=float)
    if lo is not None or hi is not None:
        lo = g[0] if lo is None else max(lo, g[0])
        hi = g[-1] if hi is None else min(hi, g[-1])
        inner = g[(g > lo) & (g < hi)]
        g = np.concatenate(([lo], inner, [hi]))
    left, right = g[:-1], g[1:]
    half = 0.5 * (right - left)
    mid = 0.5 * (right + left)
    x = mid[:, None] + half[:, None] * _GL_X[None, :]
    vals = func(x.ravel()).reshape(x.shape)
    return float(np.sum(half * (vals @ _GL_W)))
