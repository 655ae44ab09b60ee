"""Elementary bound functions for the ball eigenvalues and their chains.

``k(R)`` bounds the angular eigenvalue ``nu_1(R)`` from above (trial
functions ``x_i``) and ``h(R)`` bounds the radial ``tau_1(R)`` from below
(a quarter-wave comparison past ``sqrt(N-1)``). The chain ``nu_1 < tau_1``
is assembled from these on three radius ranges J1, J2, J3.
"""

from dataclasses import dataclass, field
import math

from scipy import optimize

from .errors import DomainError
from .special import quad

J1, J2, J3 = "J1", "J2", "J3"

# non-strict links may be off by float roundoff in the quadratures
ROUNDOFF = 1e-12
STRICT_SLACK = 1e-10


def _moment(N, p, R):
    # int_0^R e^{-s^2/2} s^p ds
    return quad(lambda s: math.exp(-0.5 * s * s) * s**p, 0.0, R, tol=1e-14, rtol=1e-13)


def k_bound(N, R):
    """``N int_0^R e^{-s^2/2} s^{N-1} ds / int_0^R e^{-s^2/2} s^{N+1} ds``."""
    if N < 2 or not R > 0:
        raise DomainError(f"k_bound needs N >= 2 and R > 0, got N={N}, R={R}")
    return N * _moment(N, N - 1, R) / _moment(N, N + 1, R)


def k_bound_2d(R):
    """Closed form of ``k_bound(2, R)``."""
    e = math.exp(-0.5 * R * R)
    return (2.0 - 2.0 * e) / (2.0 - (R * R + 2.0) * e)


def h_bound(N, R):
    """``pi^2 / (4 (R - sqrt(N-1))^2)``, defined for ``R > sqrt(N-1)``."""
    c = math.sqrt(N - 1)
    if not R > c:
        raise DomainError(f"h_bound needs R > sqrt(N-1) = {c}, got {R}")
    return math.pi**2 / (4.0 * (R - c) ** 2)


def rbar_function(t):
    return t * t + 1.0 - math.exp(0.5 * t * t)


def rbar(xtol=1e-13):
    """Positive zero of ``t^2 + 1 - e^{t^2/2}`` by bisection on [1, 2]."""
    return optimize.bisect(rbar_function, 1.0, 2.0, xtol=xtol)


def j2_end(N):
    return math.sqrt(N - 1) + math.pi / math.sqrt(8.0)


def regime(N, R):
    if R <= math.sqrt(N - 1):
        return J1
    if R <= j2_end(N):
        return J2
    return J3


def constant_ratio(N):
    """``(2N+1)/(N-1)``."""
    return (2 * N + 1) / (N - 1)


@dataclass
class Link:
    name: str
    lhs: float
    rhs: float
    strict: bool

    @property
    def slack(self):
        return self.rhs - self.lhs

    @property
    def ok(self):
        return self.slack > STRICT_SLACK if self.strict else self.slack >= -ROUNDOFF

    def as_dict(self):
        return {
            "name": self.name,
            "pass": bool(self.ok),
            "lhs": self.lhs,
            "rhs": self.rhs,
            "slack": self.slack,
        }


@dataclass
class BoundsReport:
    N: int
    R: float
    k_val: float
    h_val: float  # +inf when R <= sqrt(N-1)
    regime: str
    links: list = field(default_factory=list)

    @property
    def chain_ok(self):
        return all(link.ok for link in self.links)


def _j2_links(N, R, k_R, h_R):
    links = []
    if N == 2:
        rb = rbar()
        if R < rb:
            links.append(Link("k(R) <= k(1)", k_R, k_bound(2, 1.0), False))
            links.append(Link("k(1) < h(Rbar)", k_bound(2, 1.0), h_bound(2, rb), True))
            links.append(Link("h(Rbar) <= h(R)", h_bound(2, rb), h_R, False))
        else:
            links.append(Link("k(R) <= k(Rbar)", k_R, k_bound(2, rb), False))
            links.append(Link("k(Rbar) <= 2", k_bound(2, rb), 2.0, False))
            links.append(Link("2 <= h(R)", 2.0, h_R, False))
        return links
    lo, hi = math.sqrt(N - 1), math.sqrt(N + 2)
    if R < hi:
        k_lo = k_bound(N, lo)
        c = constant_ratio(N)
        h_hi = h_bound(N, hi)
        links.append(Link("k(R) <= k(sqrt(N-1))", k_R, k_lo, False))
        links.append(Link("k(sqrt(N-1)) <= (2N+1)/(N-1)", k_lo, c, False))
        links.append(Link("(2N+1)/(N-1) < h(sqrt(N+2))", c, h_hi, True))
        links.append(Link("h(sqrt(N+2)) <= h(R)", h_hi, h_R, False))
    else:
        k_hi = k_bound(N, hi)
        links.append(Link("k(R) <= k(sqrt(N+2))", k_R, k_hi, False))
        links.append(Link("k(sqrt(N+2)) <= 2", k_hi, 2.0, False))
        links.append(Link("2 <= h(R)", 2.0, h_R, False))
    return links


def lemma_chain(N, R, tol=1e-9, nu1=None, tau1=None, r0=None):
    """Evaluate every link of the ``nu_1(R) < tau_1(R)`` argument at ``(N, R)``.

    ``nu1``, ``tau1`` and ``r0`` (first node of the radial eigenfunction)
    are computed with the radial solver when not supplied.
    """
    from . import radial

    if N < 2 or not (R > 0 and math.isfinite(R)):
        raise DomainError(f"lemma_chain needs N >= 2 and finite R > 0, got N={N}, R={R}")
    if nu1 is None:
        nu1 = radial.nu1(N, R, tol)
    if tau1 is None or r0 is None:
        res = radial.radial_eigs(radial.RadialProblem(N, 0, R), 2, tol)[1]
        tau1 = res.value if tau1 is None else tau1
        r0 = res.diagnostics["r0"] if r0 is None else r0
    reg = regime(N, R)
    k_R = k_bound(N, R)
    h_R = h_bound(N, R) if reg != J1 else math.inf
    links = []
    if reg == J2:
        links.append(Link("nu1 < k(R)", nu1, k_R, True))
        links.extend(_j2_links(N, R, k_R, h_R))
        if r0 > math.sqrt(N - 1):
            links.append(Link("h(R) < tau1", h_R, tau1, True))
    elif reg == J3:
        links.append(Link("nu1 < k(R)", nu1, k_R, True))
        links.append(Link("k(R) < 2", k_R, 2.0, True))
        if r0 < math.sqrt(N):
            lam = radial.radial_eigenvalue(N, 0, r0, 0, "dirichlet", tol)
            links.append(Link("2 < lambda1(B_r0)", 2.0, lam, True))
        links.append(Link("2 < tau1", 2.0, tau1, True))
    links.append(Link("nu1 < tau1", nu1, tau1, True))
    return BoundsReport(N, R, k_R, h_R, reg, links)
