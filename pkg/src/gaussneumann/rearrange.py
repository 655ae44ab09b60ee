"""Gaussian rearrangements of sampled functions.

A function is represented by samples ``v_i`` with Gaussian weights
``w_i`` summing to the measure of the domain. Sorting ``|v|`` in
decreasing order and accumulating weights gives the decreasing
rearrangement ``u*`` as a step function on ``(0, m]``; the Gaussian
rearrangement is ``u_gauss(x) = u*(Phi(x_1))`` on the half-space
``{x_1 > Phi^{-1}(m)}``.
"""

from dataclasses import dataclass
import math

import numpy as np
from scipy import special as sc

from .errors import DomainError, PreconditionError
from .measure import Interval1D
from .special import SQRT2PI, phi_complementary, phi_inverse

_GL_X, _GL_W = np.polynomial.legendre.leggauss(8)


@dataclass(frozen=True)
class WeightedSamples:
    values: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float).ravel()
        w = np.asarray(self.weights, dtype=float).ravel()
        if v.shape != w.shape:
            raise DomainError("values and weights differ in size")
        if v.size == 0 or not np.sum(w) > 0:
            raise DomainError("empty or zero-measure domain")
        if np.any(w < 0) or not np.all(np.isfinite(v)):
            raise DomainError("weights must be nonnegative and values finite")
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "weights", w)

    @property
    def measure(self):
        return float(np.sum(self.weights))


def cell_weights(grid, iv):
    """Gaussian measure of the cells of a 1D sample grid inside ``iv``.

    Cell boundaries are midpoints between samples; the outer cells extend
    to the ends of ``iv``, so the weights sum to ``gamma_1(iv)``.
    """
    x = np.asarray(grid, dtype=float)
    if np.any(x < iv.a) or np.any(x > iv.b):
        raise DomainError("samples lie outside the interval")
    edges = np.concatenate([[iv.a], 0.5 * (x[1:] + x[:-1]), [iv.b]])
    # lower tails on the negative side keep small cells accurate
    lower = sc.ndtr(edges)
    upper = sc.ndtr(-edges)
    w = np.where(edges[1:] <= 0, lower[1:] - lower[:-1], upper[:-1] - upper[1:])
    return np.maximum(w, 0.0)


def samples_1d(u, iv):
    return WeightedSamples(u.values, cell_weights(u.grid, iv))


@dataclass(frozen=True)
class RearrangedFunction:
    """Decreasing rearrangement of ``|u|`` as a step function.

    ``levels[k]`` is the value of ``u*`` on ``[breaks[k], breaks[k+1])``.
    """

    source: WeightedSamples
    levels: np.ndarray
    breaks: np.ndarray

    @property
    def measure(self):
        return float(self.breaks[-1])

    def mu(self, t):
        """Distribution function ``gamma{|u| > t}``."""
        t = np.asarray(t, dtype=float)
        a = np.abs(self.source.values)
        out = np.array([np.sum(self.source.weights[a > ti]) for ti in np.atleast_1d(t)])
        return out if t.ndim else float(out[0])

    def u_star(self, s):
        s = np.asarray(s, dtype=float)
        if np.any((s < 0) | (s > self.measure)):
            raise DomainError("u_star is defined on [0, measure]")
        idx = np.searchsorted(self.breaks, s, side="right") - 1
        idx = np.clip(idx, 0, self.levels.size - 1)
        out = self.levels[idx]
        return out if s.ndim else float(out)

    def u_lowstar(self, s):
        """Increasing rearrangement ``u_*(s) = u*(m - s)``."""
        s = np.asarray(s, dtype=float)
        return self.u_star(self.measure - s)

    def u_gauss(self, x1):
        """``u*(Phi(x1))`` on ``x1 > Phi^{-1}(m)``; nan outside."""
        s = phi_complementary(x1)
        s_arr = np.asarray(s, dtype=float)
        inside = s_arr < self.measure
        out = np.where(inside, self.u_star(np.where(inside, s_arr, 0.0)), np.nan)
        return out if np.ndim(x1) else float(out)

    def threshold(self):
        """``Phi^{-1}(m)``, the boundary of the rearranged half-space."""
        if self.measure >= 1.0:
            return -math.inf
        return phi_inverse(self.measure)

    def lp_norm(self, p):
        """``(int_0^m (u*)^p ds)^(1/p)``."""
        return float(np.sum(np.diff(self.breaks) * self.levels**p)) ** (1.0 / p)

    def gauss_lp_norm(self, p):
        """L^p norm of ``u_gauss`` over its half-space, cell by cell in ``x_1``."""
        cuts = [math.inf] + [phi_inverse(s) for s in self.breaks[1:-1]] + [self.threshold()]
        cuts = np.array(cuts)
        mass = sc.ndtr(-cuts[1:]) - sc.ndtr(-cuts[:-1])
        return float(np.sum(mass * self.levels**p)) ** (1.0 / p)


def rearrange(u, domain=None):
    """Rearrange ``u``: a SampledFunction on ``domain`` (an Interval1D) or
    WeightedSamples (``domain`` ignored)."""
    if isinstance(u, WeightedSamples):
        ws = u
    else:
        if not isinstance(domain, Interval1D):
            raise DomainError("1D samples need their Interval1D")
        ws = samples_1d(u, domain)
    a = np.abs(ws.values)
    order = np.argsort(-a, kind="stable")
    levels = a[order]
    breaks = np.concatenate([[0.0], np.cumsum(ws.weights[order])])
    return RearrangedFunction(ws, levels, breaks)


def lp_norm(ws, p):
    return float(np.sum(ws.weights * np.abs(ws.values) ** p)) ** (1.0 / p)


def _step_product(b1, l1, b2, l2):
    # exact integral of the product of two step functions on (0, m)
    cuts = np.union1d(b1, b2)
    mids = 0.5 * (cuts[1:] + cuts[:-1])
    i1 = np.clip(np.searchsorted(b1, mids, side="right") - 1, 0, l1.size - 1)
    i2 = np.clip(np.searchsorted(b2, mids, side="right") - 1, 0, l2.size - 1)
    return float(np.sum(np.diff(cuts) * l1[i1] * l2[i2]))


def hardy_littlewood_gap(u, v, domain=None):
    """Slacks of ``int u* v_* <= int |u v| dgamma <= int u* v*``.

    Returns ``(middle - lower, upper - middle)``.
    """
    ru, rv = rearrange(u, domain), rearrange(v, domain)
    wu, wv = ru.source, rv.source
    if wu.values.size != wv.values.size or not np.array_equal(wu.weights, wv.weights):
        raise DomainError("u and v must be sampled on the same weighted grid")
    middle = float(np.sum(wu.weights * np.abs(wu.values * wv.values)))
    upper = _step_product(ru.breaks, ru.levels, rv.breaks, rv.levels)
    m = rv.measure
    # v_*(s) = v*(m - s): reverse the steps
    low_breaks = m - rv.breaks[::-1]
    low_breaks[0] = 0.0
    low_breaks[-1] = ru.breaks[-1]
    lower = _step_product(ru.breaks, ru.levels, low_breaks, rv.levels[::-1])
    return middle - lower, upper - middle


def _level_geometry(x, u, t, tails):
    """Crossings of the piecewise-linear ``u`` with each level in ``t``.

    Returns ``mu(t)``, ``sum |s| phi(x_s)`` and ``sum phi(x_s)/|s|`` over
    the crossing points ``x_s`` (slopes ``s``).
    """
    x0, x1 = x[:-1, None], x[1:, None]
    u0, u1 = u[:-1, None], u[1:, None]
    tt = t[None, :]
    slope = (u1 - u0) / (x1 - x0)
    crossing = (np.minimum(u0, u1) < tt) & (tt < np.maximum(u0, u1))
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        xc = np.where(crossing, x0 + (tt - u0) / slope, 0.0)
    dens = np.exp(-0.5 * xc * xc) / SQRT2PI
    aslope = np.abs(slope)
    energy = np.sum(np.where(crossing, aslope * dens, 0.0), axis=0)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        flux = np.sum(np.where(crossing, dens / aslope, 0.0), axis=0)
    # part of each cell where u > t
    lo = np.where(crossing & (slope > 0), xc, x0)
    hi = np.where(crossing & (slope < 0), xc, x1)
    above = (np.maximum(u0, u1) > tt) & ((np.minimum(u0, u1) >= tt) | crossing)
    inner = np.where(above, sc.ndtr(-lo) - sc.ndtr(-hi), 0.0)
    mu = np.sum(inner, axis=0)
    for value, mass in tails:
        mu = mu + np.where(value > t, mass, 0.0)
    return mu, energy, flux


def dirichlet_energies(u, domain):
    """``(int u'^2 dgamma, int (u_gauss')^2 dgamma)`` for the piecewise-linear
    interpolant of ``u`` and its Gaussian rearrangement, by the coarea formula
    on shared quadrature nodes in the level variable.

    Finite ends of ``domain`` must carry zero samples; an infinite end
    extends the last sample as a constant.
    """
    x = np.asarray(u.grid, dtype=float)
    v = np.asarray(u.values, dtype=float)
    if np.any(v < 0):
        raise PreconditionError("Polya-Szego check needs nonnegative samples")
    tails = []
    for end, edge, val, mass in (
        (domain.a, x[0], v[0], sc.ndtr(x[0]) - sc.ndtr(domain.a)),
        (domain.b, x[-1], v[-1], sc.ndtr(-x[-1]) - sc.ndtr(-domain.b)),
    ):
        if math.isfinite(end):
            if edge != end or val != 0.0:
                raise PreconditionError("samples must reach finite endpoints with value 0")
        elif val > 0:
            tails.append((val, float(mass)))
    m = float(np.sum(cell_weights(x, Interval1D(x[0], x[-1])))) + sum(t[1] for t in tails)
    scale = float(np.max(v))
    if scale == 0.0:
        return 0.0, 0.0
    # both energies scale as scale^2; unit height keeps slopes representable
    v = v / scale
    tails = [(val / scale, mass) for val, mass in tails]
    lv = np.unique(v)
    if lv.size < 2:
        return 0.0, 0.0
    # level gaps that vanish at unit height carry no energy
    lv = lv[np.concatenate([[True], np.diff(lv) > 1e-14])]
    if lv.size < 2:
        return 0.0, 0.0
    lo, hi = lv[:-1], lv[1:]
    half = 0.5 * (hi - lo)
    t = (0.5 * (hi + lo))[:, None] + half[:, None] * _GL_X[None, :]
    wt = (half[:, None] * _GL_W[None, :]).ravel()
    mu, energy, flux = _level_geometry(x, v, t.ravel(), tails)
    mu = np.clip(mu, 1e-300, min(m, 1.0 - 1e-16))
    xs = -sc.ndtri(mu)
    star = np.exp(-xs * xs) / (2.0 * math.pi) / flux
    s2 = scale * scale
    return s2 * float(np.sum(wt * energy)), s2 * float(np.sum(wt * star))


def polya_szego_gap(u, domain):
    """``int u'^2 dgamma - int (u_gauss')^2 dgamma`` (nonnegative in theory)."""
    e, e_star = dirichlet_energies(u, domain)
    return e - e_star
