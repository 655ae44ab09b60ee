"""Weinberger-type upper bound for centrally symmetric planar domains.

The ball's first eigenfunction ``w(r) x_i / r`` (k = 1 branch) is
extended by ``G = w`` on ``[0, R]`` and ``G = w(R)`` beyond. On any
domain ``Omega`` symmetric about the origin the functions
``P_i = G(|x|) x_i / |x|`` have mean zero, and summing their Rayleigh
quotients gives::

    mu_1(Omega) <= int_Omega Ndens dgamma / int_Omega Ddens dgamma

with ``Ndens = G'^2 + (N-1) G^2 / r^2`` and ``Ddens = G^2``. Moving mass
outward lowers the numerator (Ndens decreases) and raises the denominator
(Ddens increases), so at equal measure the ball gives the largest value,
``mu_1(B_R)``.
"""

from dataclasses import dataclass, field
import math
from typing import Callable, Optional

import numpy as np
from scipy import optimize

from .errors import DomainError, PreconditionError
from .grid2d import MaskedGrid2D, masked_eigs, symmetric_grid, tensor_eigs
from .measure import Interval1D
from .radial import ball_rayleigh, mu1_ball
from .sampled import SampledFunction
from .special import phi_inverse

THETA_NODES = 128


def ball_radius(m):
    """Radius of the centred disk of Gaussian measure ``m``."""
    if not 0.0 < m < 1.0:
        raise DomainError(f"measure must lie in (0, 1), got {m}")
    return math.sqrt(-2.0 * math.log1p(-m))


def _theta_rule(breaks):
    # Gauss-Legendre on panels of [0, pi], then the mirror image on [pi, 2 pi]
    cuts = sorted({0.0, math.pi, *[b % math.pi for b in breaks]})
    per = max(2, THETA_NODES // (len(cuts) - 1))
    x, w = np.polynomial.legendre.leggauss(per)
    th, wt = [], []
    for a, b in zip(cuts[:-1], cuts[1:]):
        th.append(0.5 * (a + b) + 0.5 * (b - a) * x)
        wt.append(0.5 * (b - a) * w)
    th, wt = np.concatenate(th), np.concatenate(wt)
    return np.concatenate([th, th + math.pi]), np.concatenate([wt, wt])


@dataclass
class SymmetricDomain2D:
    """Centrally symmetric planar domain, polar (``rho(theta)``) or masked.

    ``kind`` names the family (disk, square, star, annulus, mask) and is
    used to pick the eigenvalue evaluator.
    """

    kind: str
    rho: Optional[Callable] = None
    mask: Optional[MaskedGrid2D] = None
    breaks: tuple = ()
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if (self.rho is None) == (self.mask is None):
            raise DomainError("give exactly one of rho and mask")
        if self.rho is not None:
            th = np.linspace(0.0, math.pi, 721)
            r1, r2 = self.rho(th), self.rho(th + math.pi)
            if np.any(~(r1 > 0)) or np.max(np.abs(r1 - r2)) > 1e-12 * np.max(r1):
                raise PreconditionError("rho must be positive with rho(t) = rho(t + pi)")
        else:
            if not self.mask.is_centrally_symmetric():
                raise PreconditionError("mask is not symmetric about the origin")
            if not self.mask.is_connected():
                raise DomainError("mask is not connected")
        self._measure = None

    @property
    def polar(self):
        return self.rho is not None

    def theta_rule(self):
        return _theta_rule(self.breaks)

    @property
    def measure(self):
        if self._measure is None:
            if self.polar:
                th, wt = self.theta_rule()
                r = self.rho(th)
                self._measure = float(np.sum(wt * -np.expm1(-0.5 * r * r)) / (2 * math.pi))
            else:
                self._measure = self.mask.measure
        return self._measure

    def to_mask(self, n=60):
        """Midpoint-rule mask on ``2n x 2n`` cells."""
        if not self.polar:
            return self.mask
        extent = 1.02 * float(np.max(self.rho(np.linspace(0, 2 * math.pi, 2001))))
        rho = self.rho
        return symmetric_grid(lambda x, y: np.hypot(x, y) < rho(np.arctan2(y, x)), extent, n)

    def mu1(self, n=60, tol=1e-9):
        """First nontrivial Neumann eigenvalue (exact for disks and squares)."""
        if self.kind == "disk":
            return mu1_ball(2, self.params["R"], tol)[0]
        if self.kind == "square":
            s = self.params["s"]
            iv = Interval1D(-s, s)
            return float(tensor_eigs(iv, iv, 2, tol).eigenvalues[1])
        return float(masked_eigs(self.to_mask(n), 2, tol * 1e-2).eigenvalues[1])


def disk(m):
    R = ball_radius(m)
    return SymmetricDomain2D("disk", rho=lambda t: np.full_like(np.asarray(t, float), R), params={"R": R})


def centered_square(m):
    """Square ``(-s, s)^2`` of Gaussian measure ``m``."""
    s = -phi_inverse((1.0 + math.sqrt(m)) / 2.0)
    s = abs(s)

    def rho(t):
        t = np.asarray(t, dtype=float)
        return s / np.maximum(np.abs(np.cos(t)), np.abs(np.sin(t)))

    kinks = tuple(math.pi / 4 + k * math.pi / 2 for k in range(2))
    return SymmetricDomain2D("square", rho=rho, breaks=kinks, params={"s": s})


def _scaled_to_measure(shape, m):
    def meas(c):
        th, wt = _theta_rule(())
        r = c * shape(th)
        return float(np.sum(wt * -np.expm1(-0.5 * r * r)) / (2 * math.pi)) - m

    return optimize.brentq(meas, 1e-6, 50.0, xtol=1e-15, rtol=1e-15)


def star(m, amplitude=0.3, harmonics=None):
    """``rho = c (1 + amplitude cos 2 theta + ...)`` scaled to measure ``m``.

    ``harmonics`` maps ``k -> (a_k, b_k)`` for extra terms
    ``a_k cos 2k theta + b_k sin 2k theta``.
    """
    terms = {1: (amplitude, 0.0)}
    terms.update(harmonics or {})

    def shape(t):
        t = np.asarray(t, dtype=float)
        out = np.ones_like(t)
        for k, (a, b) in terms.items():
            out = out + a * np.cos(2 * k * t) + b * np.sin(2 * k * t)
        return out

    th = np.linspace(0, math.pi, 2001)
    if np.min(shape(th)) <= 0.05:
        raise DomainError("star profile is not positive")
    c = _scaled_to_measure(shape, m)
    return SymmetricDomain2D("star", rho=lambda t: c * shape(t), params={"c": c, "terms": terms})


def random_star(m, rng, n_terms=3, scale=0.25):
    """Star domain with random even harmonics (reproducible from ``rng``)."""
    for _ in range(100):
        coef = rng.uniform(-scale, scale, size=(n_terms, 2)) / np.arange(1, n_terms + 1)[:, None]
        harm = {k + 1: (float(a), float(b)) for k, (a, b) in enumerate(coef)}
        try:
            return star(m, 0.0, harm)
        except DomainError:
            continue
    raise DomainError("could not draw a positive star profile")


def annulus(m, inner, n=60):
    """Mask of ``{inner < |x| < outer}``; the continuous annulus has measure ``m``."""
    rest = math.exp(-0.5 * inner * inner) - m
    if not rest > 0:
        raise DomainError(f"no annulus with inner radius {inner} has measure {m}")
    outer = math.sqrt(-2.0 * math.log(rest))
    g = symmetric_grid(lambda x, y: (np.hypot(x, y) > inner) & (np.hypot(x, y) < outer), outer * 1.02, n)
    return SymmetricDomain2D("annulus", mask=g, params={"inner": inner, "outer": outer})


_GL_X, _GL_W = np.polynomial.legendre.leggauss(8)


@dataclass
class TrialProfile:
    """Extended ball profile ``G`` and the two radial densities.

    ``G``, ``Ndens`` and ``Ddens`` are samples on ``[0, extent]``; the
    methods evaluate them exactly from the spline of ``w``.
    """

    N: int
    R: float
    mu1: float
    w: SampledFunction
    G: Optional[SampledFunction] = None
    Ndens: Optional[SampledFunction] = None
    Ddens: Optional[SampledFunction] = None

    def __post_init__(self):
        self._sp = self.w.interpolant()
        self._dsp = self._sp.derivative()
        self._cum = {}

    def g(self, r):
        return self._sp(np.minimum(np.asarray(r, dtype=float), self.R))

    def n_density(self, r):
        r = np.asarray(r, dtype=float)
        rr = np.minimum(r, self.R)
        dg = np.where(r < self.R, self._dsp(rr), 0.0)
        safe = np.where(r > 0, r, 1.0)
        # w(r)/r -> w'(0) at the origin
        ratio = np.where(r > 0, self._sp(rr) / safe, self._dsp(0.0))
        return dg**2 + (self.N - 1) * ratio**2

    def d_density(self, r):
        return self.g(r) ** 2

    def _cumulative(self, name):
        if name not in self._cum:
            f = {"N": self.n_density, "D": self.d_density, "G": self.g}[name]
            grid = self.G.grid
            half = 0.5 * np.diff(grid)
            x = (0.5 * (grid[1:] + grid[:-1]))[:, None] + half[:, None] * _GL_X
            cells = half * ((f(x) * _planar_weight(x)) @ _GL_W)
            self._cum[name] = np.concatenate([[0.0], np.cumsum(cells)])
        return self._cum[name]

    def disk_integral(self, name, rho):
        """``(1/2 pi) int_0^rho F(r) r e^{-r^2/2} dr`` for F in N, D, G."""
        rho = np.asarray(rho, dtype=float)
        grid = self.G.grid
        if np.any(rho > grid[-1]) or np.any(rho < 0):
            raise DomainError("radius outside the sampled profile")
        f = {"N": self.n_density, "D": self.d_density, "G": self.g}[name]
        cum = self._cumulative(name)
        i = np.clip(np.searchsorted(grid, rho, side="right") - 1, 0, grid.size - 2)
        a = grid[i]
        half = 0.5 * (rho - a)
        x = (0.5 * (rho + a))[..., None] + half[..., None] * _GL_X
        part = half * ((f(x) * _planar_weight(x)) @ _GL_W)
        return cum[i] + part


def _planar_weight(r):
    return r * np.exp(-0.5 * r * r) / (2 * math.pi)


def build_profile(N, R, tol=1e-9, extent=None, n_out=400):
    """Profile from the ball eigenfunction, sampled on ``[0, extent]``."""
    mu, w = mu1_ball(N, R, tol)
    extent = max(2 * R, R + 6.0) if extent is None else extent
    r = np.concatenate([w.grid, np.linspace(R, extent, n_out)[1:]])
    prof = TrialProfile(N, R, mu, w)
    prof.G = SampledFunction(r, prof.g(r))
    prof.Ndens = SampledFunction(r, prof.n_density(r))
    prof.Ddens = SampledFunction(r, prof.d_density(r))
    return prof


def domain_integrals(omega, profile):
    """``(int_Omega Ndens dgamma, int_Omega Ddens dgamma)``."""
    if omega.polar:
        th, wt = omega.theta_rule()
        rho = omega.rho(th)
        return (
            float(np.sum(wt * profile.disk_integral("N", rho))),
            float(np.sum(wt * profile.disk_integral("D", rho))),
        )
    g = omega.mask
    X, Y = g.centers()
    r = np.hypot(X, Y)[g.active]
    cw = g.cell_weight[g.active]
    return float(np.sum(cw * profile.n_density(r))), float(np.sum(cw * profile.d_density(r)))


def ball_integrals(profile):
    """``(int_{B_R} Ndens dgamma, int_{B_R} Ddens dgamma)`` in the plane."""
    R = np.array(profile.R)
    return (
        2 * math.pi * float(profile.disk_integral("N", R)),
        2 * math.pi * float(profile.disk_integral("D", R)),
    )


def orthogonality_defect(omega, profile):
    """``max_i |int_Omega G(|x|) x_i/|x| dgamma|`` by symmetric quadrature."""
    if omega.polar:
        th, wt = omega.theta_rule()
        c = profile.disk_integral("G", omega.rho(th))
        return max(abs(float(np.sum(wt * c * np.cos(th)))), abs(float(np.sum(wt * c * np.sin(th)))))
    g = omega.mask
    X, Y = g.centers()
    r = np.hypot(X, Y)
    on = g.active & (r > 0)
    safe = np.where(on, r, 1.0)
    G = np.where(on, g.cell_weight * profile.g(r) / safe, 0.0)
    return max(abs(float(np.sum(G * X))), abs(float(np.sum(G * Y))))


def weinberger_bound(omega, profile, measure_tol=1e-8):
    """``int_Omega Ndens dgamma / int_Omega Ddens dgamma``."""
    m_ball = -math.expm1(-0.5 * profile.R**2) if profile.N == 2 else None
    if m_ball is None:
        raise DomainError("domain checks are planar (N = 2)")
    if abs(omega.measure - m_ball) > measure_tol:
        raise PreconditionError(
            f"measure mismatch: domain {omega.measure:.12g}, ball {m_ball:.12g}"
        )
    num, den = domain_integrals(omega, profile)
    return num / den


def _check(name, lhs, rhs, allowance=0.0):
    slack = rhs - lhs
    return {"name": name, "pass": bool(slack >= -allowance), "lhs": lhs, "rhs": rhs, "slack": slack}


def szego_weinberger_check(omega, tol=1e-9, n=60, rel_slack=0.02, ineq_slack=1e-9):
    """Verify ``mu_1(Omega) <= bound <= mu_1(B_R)`` and the two density
    comparisons behind it."""
    R = ball_radius(omega.measure)
    prof = build_profile(2, R, tol)
    bound = weinberger_bound(omega, prof)
    num, den = domain_integrals(omega, prof)
    num_b, den_b = ball_integrals(prof)
    mu_omega = omega.mu1(n, tol)
    orth = orthogonality_defect(omega, prof)
    checks = [
        _check("mu1(Omega) <= bound (+2%)", mu_omega, bound * (1 + rel_slack)),
        _check("bound <= mu1(B_R)", bound, prof.mu1, 1e-9),
        _check("int_Omega N <= int_B N", num, num_b, ineq_slack),
        _check("int_Omega D >= int_B D", den_b, den, ineq_slack),
        _check("|int_Omega P_i| <= 1e-8", orth, 1e-8),
        _check("ball Rayleigh identity", abs(ball_rayleigh(2, prof.w) - prof.mu1), 10 * tol),
    ]
    return {
        "kind": omega.kind,
        "measure": omega.measure,
        "R": R,
        "mu1_omega": mu_omega,
        "bound": bound,
        "mu1_ball": prof.mu1,
        "equal_to_ball": abs(bound - prof.mu1) <= 1e-9,
        "checks": checks,
        "ok": all(c["pass"] for c in checks),
    }
