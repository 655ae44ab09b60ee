"""Eigenproblems on balls ``B_R`` of R^N after separation of variables.

With ``u(x) = Y_k(x/|x|) f(r)`` and ``Y_k`` a spherical harmonic of degree
``k``, the profile solves::

    f'' + f' ((N-1)/r - r) + mu f - k(k+N-2) f / r^2 = 0   on (0, R)

with ``f'(0) = 0`` for ``k = 0`` and ``f(0) = 0`` for ``k >= 1``. The
``k = 0`` branch gives the radial eigenvalues ``tau_n(R)``, the ``k = 1``
branch the angular ones ``nu_n(R)``.
"""

from dataclasses import dataclass
import math
from typing import NamedTuple

import numpy as np
from scipy import optimize

from .errors import DomainError, SolverError
from .measure import sphere_factor
from .prufer import Shooter
from .sampled import SampledFunction, integrate_pieces
from .sturm1d import DIRICHLET, NEUMANN, EigenResult, count_sign_changes

# Frobenius start radius; the two-term series error there is O(r0^4)
R_START = 1e-4
# R = inf is replaced by max(R_INF_MIN, sqrt(N) + R_INF_MARGIN)
R_INF_MIN = 12.0
R_INF_MARGIN = 6.0


@dataclass(frozen=True)
class RadialProblem:
    N: int
    k: int
    R: float
    bc: str = NEUMANN

    def __post_init__(self):
        if self.N < 1 or self.k < 0:
            raise DomainError(f"need N >= 1 and k >= 0, got N={self.N}, k={self.k}")
        if not self.R > 0:
            raise DomainError(f"radius must be positive, got {self.R}")
        if self.bc not in (NEUMANN, DIRICHLET):
            raise DomainError(f"unknown boundary condition {self.bc!r}")

    @property
    def kbar(self):
        return self.k * (self.k + self.N - 2)

    @property
    def radius(self):
        """Computational radius (the truncation point when ``R`` is infinite)."""
        if math.isinf(self.R):
            return max(R_INF_MIN, math.sqrt(self.N) + R_INF_MARGIN)
        return float(self.R)


def frobenius(N, k, mu, r):
    """Two-term regular solution ``r^k (1 + c2 r^2)`` and its derivative."""
    c2 = (k - mu) / (4 * k + 2 * N)
    f = r**k * (1.0 + c2 * r * r)
    df = (k * r ** (k - 1) if k else 0.0) * (1.0 + c2 * r * r) + 2.0 * c2 * r ** (k + 1)
    return f, df


def _start(N, k, r0):
    def state(mu):
        f, df = frobenius(N, k, mu, r0)
        return math.atan2(f, df), math.log(math.hypot(f, df))

    return state


def _shooter(p, tol):
    R = p.radius
    r0 = min(R_START, 1e-3 * R)
    dirichlet = p.bc == DIRICHLET and math.isfinite(p.R)
    return Shooter(
        left=r0,
        right=R,
        match=min(0.5 * R, 2.0),
        right_angle=math.pi if dirichlet else math.pi / 2,
        left_state=_start(p.N, p.k, r0),
        c1=float(p.N - 1),
        kbar=float(p.kbar),
        ode_tol=min(1e-10, max(1e-13, tol * 1e-3)),
        h0=0.1 * r0,
    )


def radial_norm2(N, sf, R=None):
    """``||f(|x|)||^2`` in ``L^2(B_R, gamma_N)``."""
    spline = sf.interpolant()
    hi = sf.grid[-1] if R is None else R
    val = integrate_pieces(
        lambda r: spline(r) ** 2 * r ** (N - 1) * np.exp(-0.5 * r * r), sf.grid, 0.0, hi
    )
    return sphere_factor(N) * val


def _sample(p, shooter, mu, n_samples):
    grid = np.unique(
        np.concatenate([np.linspace(shooter.left, shooter.right, n_samples), [shooter.match]])
    )
    u, du, _ = shooter.profile(mu, grid)
    # extend to r = 0 with the series, scaled to the first sample
    f0, _ = frobenius(p.N, p.k, mu, shooter.left)
    c = u[0] / f0
    at0 = (c if p.k == 0 else 0.0, c if p.k == 1 else 0.0)
    grid = np.concatenate([[0.0], grid])
    u = np.concatenate([[at0[0]], u])
    du = np.concatenate([[at0[1]], du])
    sf = SampledFunction(grid, u, du)
    scale = 1.0 / math.sqrt(radial_norm2(p.N, sf))
    # sign: positive next to the origin
    if u[np.argmax(np.abs(u) > 1e-8 * np.max(np.abs(u)))] < 0:
        scale = -scale
    return sf.scaled(scale)


def first_node(sf):
    """First zero of a sampled profile (``None`` if it keeps its sign)."""
    v = sf.values
    idx = np.nonzero(np.sign(v[1:]) * np.sign(v[:-1]) < 0)[0]
    if idx.size == 0:
        return None
    i = int(idx[0])
    spline = sf.interpolant()
    return float(optimize.brentq(spline, sf.grid[i], sf.grid[i + 1], xtol=1e-14))


def radial_eigs(p, count=2, tol=1e-9, n_samples=801, profiles=True):
    """First ``count`` eigenvalues of branch ``p.k``, with profiles.

    Profiles are normalized to unit ``L^2(B_R, gamma_N)`` norm of
    ``f(|x|)`` and made positive near the origin. For the ``k = 0``
    Neumann branch the list starts with the constant mode 0, and the
    first node of the ``tau_1`` profile is reported as ``diagnostics["r0"]``.
    """
    if count < 1:
        raise DomainError("count must be >= 1")
    shooter = _shooter(p, tol)
    out = []
    lower = -1.0
    for n in range(count):
        diag = {"N": p.N, "k": p.k, "R": p.R, "radius": shooter.right, "match": shooter.match}
        if n == 0 and p.k == 0 and p.bc == NEUMANN:
            mu, width = 0.0, 0.0
        else:
            mu, width = shooter.eigenvalue(n, lower, tol)
        lower = mu
        if not profiles:
            out.append(EigenResult(mu, None, n, width, n, diag))
            continue
        if mu == 0.0 and width == 0.0:
            grid = np.linspace(0.0, shooter.right, n_samples)
            sf = SampledFunction(grid, np.ones_like(grid), np.zeros_like(grid))
            sf = sf.scaled(1.0 / math.sqrt(radial_norm2(p.N, sf)))
        else:
            sf = _sample(p, shooter, mu, n_samples)
        if p.k == 0 and n == 1:
            diag["r0"] = first_node(sf)
        out.append(EigenResult(mu, sf, count_sign_changes(sf.values), width, n, diag))
    return out


def radial_eigenvalue(N, k, R, n, bc=NEUMANN, tol=1e-9):
    """Eigenvalue ``n`` (0-based, counting the constant mode) of branch ``k``."""
    return radial_eigs(RadialProblem(N, k, R, bc), n + 1, tol, profiles=False)[n].value


def tau(N, R, n=1, tol=1e-9):
    """Radial Neumann eigenvalue ``tau_n(R)``."""
    return radial_eigenvalue(N, 0, R, n, NEUMANN, tol)


def nu1(N, R, tol=1e-9):
    """First angular (k = 1) Neumann eigenvalue ``nu_1(R)``."""
    return radial_eigenvalue(N, 1, R, 0, NEUMANN, tol)


def ball_rayleigh(N, w, R=None):
    """Rayleigh quotient of ``w(|x|) x_i/|x|`` on ``B_R``.

    ``int (w'^2 + (N-1) w^2 / r^2) dgamma / int w^2 dgamma`` over the ball.
    """
    spline = w.interpolant()
    dspline = spline.derivative()
    hi = w.grid[-1] if R is None else R
    wt = lambda r: r ** (N - 1) * np.exp(-0.5 * r * r)
    num = integrate_pieces(
        lambda r: (dspline(r) ** 2 + (N - 1) * spline(r) ** 2 / (r * r)) * wt(r), w.grid, 0.0, hi
    )
    den = integrate_pieces(lambda r: spline(r) ** 2 * wt(r), w.grid, 0.0, hi)
    return num / den


def mu1_ball(N, R, tol=1e-9, n_samples=801):
    """First nontrivial Neumann eigenvalue of ``B_R`` and its profile ``w``.

    The minimum over branches is taken on ``k = 1``; the competing ``k = 0``
    and ``k = 2`` values are computed on every call and a
    :class:`SolverError` is raised if either does not lie above.
    """
    if N < 2:
        raise DomainError("mu1_ball needs N >= 2")
    res = radial_eigs(RadialProblem(N, 1, R), 1, tol, n_samples)[0]
    t1 = tau(N, R, 1, tol)
    k2 = radial_eigenvalue(N, 2, R, 0, NEUMANN, tol)
    if not (res.value < t1 and res.value < k2):
        raise SolverError(
            "first ball eigenvalue is not on the k = 1 branch",
            {"N": N, "R": R, "nu1": res.value, "tau1": t1, "k2": k2},
        )
    return res.value, res.eigenfunction


class RadialShapeDerivative(NamedTuple):
    formula_value: float
    fd_value: float


def radial_shape_formula(N, R, mu, uR):
    """``-(N omega_N/(2 pi)^(N/2)) mu u(R)^2 R^(N-1) e^(-R^2/2)``."""
    return -sphere_factor(N) * mu * uR**2 * R ** (N - 1) * math.exp(-0.5 * R * R)


def shape_derivative_radial(N, R, index=1, tol=1e-11, h=1e-3):
    """Derivative in ``R`` of the radial Neumann eigenvalue ``tau_index``.

    The formula uses the profile normalized in ``L^2(B_R, gamma_N)``; the
    check value is the central difference of ``tau_index`` with step ``h``.
    """
    if index < 1:
        raise DomainError("index must be >= 1 (tau_0 = 0 for every R)")
    if not (math.isfinite(R) and R > h):
        raise DomainError(f"need a finite radius larger than the step, got {R}")
    res = radial_eigs(RadialProblem(N, 0, R), index + 1, tol)[index]
    formula = radial_shape_formula(N, R, res.value, res.eigenfunction.values[-1])
    fd = (tau(N, R + h, index, tol) - tau(N, R - h, index, tol)) / (2 * h)
    return RadialShapeDerivative(formula, fd)
