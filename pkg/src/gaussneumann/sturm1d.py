"""One-dimensional eigenproblems for ``-u'' + x u' = mu u``.

Neumann and Dirichlet conditions on intervals and half-lines, the
constant-measure sliding profile ``a -> mu_1(a, b(a))`` and the
constrained shape derivative.
"""

from dataclasses import dataclass, field
import math
from typing import NamedTuple

import numpy as np
from scipy import optimize

from .errors import DomainError, PreconditionError
from .measure import Interval1D, b_of_a, gauss_measure
from .prufer import Shooter, _constant_state
from .sampled import SampledFunction, integrate_pieces
from .special import SQRT2PI, TRUNC_WEIGHT, gauss_density, phi_inverse, truncation_radius

NEUMANN = "neumann"
DIRICHLET = "dirichlet"
_BCS = (NEUMANN, DIRICHLET)

# beyond this distance past a finite endpoint the eigenfunction mass of a
# half-line problem is negligible even when the Gaussian cutoff is not
_HALF_LINE_MARGIN = 6.0


@dataclass
class EigenResult:
    value: float
    eigenfunction: SampledFunction
    nodes: int
    bracket: float
    index: int = 0
    diagnostics: dict = field(default_factory=dict)


def count_sign_changes(values, rel=1e-10):
    v = np.asarray(values, dtype=float)
    scale = np.max(np.abs(v)) if v.size else 0.0
    s = np.sign(np.where(np.abs(v) > rel * scale, v, 0.0))
    s = s[s != 0]
    return int(np.count_nonzero(s[1:] != s[:-1]))


def tail_radius(mu, trunc_weight=TRUNC_WEIGHT):
    """Radius past which ``|x|^(2 mu) e^{-x^2/2}`` stays below ``trunc_weight``.

    Eigenfunctions of index ``mu`` grow like ``|x|^mu``, so this is where
    their weighted tail becomes negligible; for ``mu <= 0`` it is the plain
    Gaussian cutoff.
    """
    radius = truncation_radius(trunc_weight)
    if mu <= 0:
        return radius
    target = -math.log(trunc_weight)
    g = lambda t: 0.5 * t * t - 2.0 * mu * math.log(t) - target
    lo = max(1.0, math.sqrt(2.0 * mu))
    hi = max(radius, 2.0 * lo)
    while g(hi) < 0:
        hi *= 2.0
    return max(radius, optimize.brentq(g, lo, hi, xtol=1e-6)) if g(lo) < 0 else radius


def truncate(iv, trunc_weight=TRUNC_WEIGHT, mu=0.0):
    """Finite stand-in ``(a', b')`` for ``iv``; infinite ends get a natural cut.

    ``mu`` is the largest eigenvalue wanted; the cut moves out with it.
    """
    radius = tail_radius(mu, trunc_weight)
    finite = [t for t in (iv.a, iv.b) if math.isfinite(t)]
    reach = max([radius] + [abs(t) + _HALF_LINE_MARGIN for t in finite])
    a = iv.a if math.isfinite(iv.a) else -reach
    b = iv.b if math.isfinite(iv.b) else reach
    return a, b


def _shooter(iv, bc, tol, trunc_weight, mu=0.0):
    a, b = truncate(iv, trunc_weight, mu)
    left_dirichlet = bc == DIRICHLET and math.isfinite(iv.a)
    right_dirichlet = bc == DIRICHLET and math.isfinite(iv.b)
    match = min(max(0.0, a), b)
    return Shooter(
        left=a,
        right=b,
        match=match,
        right_angle=math.pi if right_dirichlet else math.pi / 2,
        left_state=_constant_state(0.0 if left_dirichlet else math.pi / 2),
        ode_tol=min(1e-10, max(1e-13, tol * 1e-3)),
        h0=1e-3,
    )


def _normalize(x, u, du):
    """Unit L2(gamma_1) norm, first clearly nonzero sample positive."""
    sf = SampledFunction(x, u, du)
    spline = sf.interpolant()
    norm2 = integrate_pieces(lambda t: spline(t) ** 2 * gauss_density(t), x)
    c = 1.0 / math.sqrt(norm2)
    scale = np.max(np.abs(u))
    lead = u[np.argmax(np.abs(u) > 1e-8 * scale)]
    if lead < 0:
        c = -c
    return sf.scaled(c)


def eig1d(iv, bc=NEUMANN, count=2, tol=1e-9, n_samples=801, trunc_weight=TRUNC_WEIGHT):
    """First ``count`` eigenvalues of the weighted problem on ``iv``.

    The Neumann list starts with ``mu_0 = 0`` (constant eigenfunction).
    Infinite endpoints are cut where the Gaussian weight is negligible and
    given the natural (zero-flux) condition there.
    """
    shooter, values = _solve(iv, bc, count, tol, trunc_weight)
    grid = np.unique(np.concatenate([np.linspace(shooter.left, shooter.right, n_samples), [shooter.match]]))
    results = []
    for n, (mu, width) in enumerate(values):
        if n == 0 and bc == NEUMANN:
            x = grid
            sf = _normalize(x, np.ones_like(x), np.zeros_like(x))
            results.append(EigenResult(0.0, sf, 0, 0.0, 0, {"truncated": (shooter.left, shooter.right)}))
            continue
        u, du, theta = shooter.profile(mu, grid)
        sf = _normalize(grid, u, du)
        results.append(
            EigenResult(
                value=mu,
                eigenfunction=sf,
                nodes=count_sign_changes(sf.values),
                bracket=width,
                index=n,
                diagnostics={"truncated": (shooter.left, shooter.right), "match": shooter.match},
            )
        )
    return results


def _eigen_sweep(shooter, bc, count, tol):
    values = []
    lower = -1.0
    for n in range(count):
        if n == 0 and bc == NEUMANN:
            mu, width = 0.0, 0.0
        else:
            mu, width = shooter.eigenvalue(n, lower, tol)
        values.append((mu, width))
        lower = mu
    return values


def _solve(iv, bc, count, tol, trunc_weight):
    if bc not in _BCS:
        raise DomainError(f"unknown boundary condition {bc!r}")
    if count < 1:
        raise DomainError("count must be >= 1")
    shooter = _shooter(iv, bc, tol, trunc_weight)
    values = _eigen_sweep(shooter, bc, count, tol)
    if iv.bounded:
        return shooter, values
    # push infinite ends out until the top eigenfunction's tail is negligible
    top = values[-1][0]
    wider = _shooter(iv, bc, tol, trunc_weight, top)
    if (wider.left, wider.right) != (shooter.left, shooter.right):
        shooter = wider
        values = _eigen_sweep(shooter, bc, count, tol)
    return shooter, values


def eigenvalues1d(iv, bc=NEUMANN, count=2, tol=1e-9, trunc_weight=TRUNC_WEIGHT):
    """Eigenvalues only, skipping the eigenfunction sampling of :func:`eig1d`."""
    return [mu for mu, _ in _solve(iv, bc, count, tol, trunc_weight)[1]]


def mu1(iv, tol=1e-9, trunc_weight=TRUNC_WEIGHT):
    return eigenvalues1d(iv, NEUMANN, 2, tol, trunc_weight)[1]


def lambda1(iv, tol=1e-9, trunc_weight=TRUNC_WEIGHT):
    return eigenvalues1d(iv, DIRICHLET, 1, tol, trunc_weight)[0]


def neumann_dirichlet_gap(iv, tol=1e-9):
    """``mu_1(iv) - lambda_1(iv)``; equals 1 on every interval."""
    return mu1(iv, tol) - lambda1(iv, tol)


def symmetric_point(L):
    """Left endpoint of the centred interval of measure ``L``."""
    return -phi_inverse((1.0 - L) / 2.0)


def slide_profile(L, a_grid, tol=1e-9):
    """``[(a, mu_1(a, b(a))) for a in a_grid]`` at fixed measure ``L``."""
    a_grid = list(a_grid)
    if any(y < x for x, y in zip(a_grid, a_grid[1:])):
        raise DomainError("a_grid must be sorted")
    out = []
    for a in a_grid:
        iv = Interval1D(a, b_of_a(a, L))
        out.append((a, mu1(iv, tol)))
    return out


def rayleigh(u, iv, mean_zero=True, mean_tol=1e-8):
    """Rayleigh quotient ``int u'^2 dgamma / int u^2 dgamma`` on ``iv``.

    Integrals run over the part of the sample grid inside ``iv``. With
    ``mean_zero`` the Neumann admissibility ``int u dgamma = 0`` is checked.
    """
    spline = u.interpolant()
    dspline = spline.derivative()
    lo, hi = max(iv.a, u.grid[0]), min(iv.b, u.grid[-1])
    den = integrate_pieces(lambda t: spline(t) ** 2 * gauss_density(t), u.grid, lo, hi)
    if not den > 0.0:
        raise DomainError("zero-norm function has no Rayleigh quotient")
    if mean_zero:
        mean = integrate_pieces(lambda t: spline(t) * gauss_density(t), u.grid, lo, hi)
        if abs(mean) > mean_tol * max(1.0, math.sqrt(den)):
            raise PreconditionError(f"function is not mean-zero (mean {mean:.3e})")
    num = integrate_pieces(lambda t: dspline(t) ** 2 * gauss_density(t), u.grid, lo, hi)
    return num / den


class ShapeDerivative(NamedTuple):
    formula_value: float
    fd_value: float
    unscaled_value: float


def shape_derivative_1d(iv, tol=1e-11, h=1e-3, n_samples=801):
    """Derivative of ``mu_1`` when ``a`` moves right at unit speed under the
    measure constraint ``b = b(a)``.

    ``formula_value = mu_1 phi(a) (u(a)^2 - u(b)^2)`` with ``phi`` the normal
    density and ``u`` normalized in L2(gamma_1); ``fd_value`` is the central
    difference of ``a -> mu_1(a, b(a))`` with step ``h``. ``unscaled_value``
    omits the ``1/sqrt(2 pi)`` factor.
    """
    if not iv.bounded:
        raise DomainError("shape derivative needs two finite endpoints")
    L = gauss_measure(iv)
    res = eig1d(iv, NEUMANN, 2, tol, n_samples=n_samples)[1]
    u = res.eigenfunction.values
    jump = u[0] ** 2 - u[-1] ** 2
    unscaled = res.value * math.exp(-0.5 * iv.a**2) * jump
    formula = unscaled / SQRT2PI

    def f(a):
        return mu1(Interval1D(a, b_of_a(a, L)), tol)

    fd = (f(iv.a + h) - f(iv.a - h)) / (2 * h)
    return ShapeDerivative(formula, fd, unscaled)
