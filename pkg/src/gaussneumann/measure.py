"""Gaussian measure and Gaussian perimeter of simple domains."""

from dataclasses import dataclass
import math

from scipy import special as sc

from .errors import DomainError
from .special import SQRT2PI, phi_complementary, phi_inverse, quad

INF = math.inf


@dataclass(frozen=True)
class Interval1D:
    """Interval ``(a, b)`` of the extended real line."""

    a: float
    b: float

    def __post_init__(self):
        if math.isnan(self.a) or math.isnan(self.b) or not self.a < self.b:
            raise DomainError(f"need a < b, got ({self.a}, {self.b})")

    @property
    def bounded(self):
        return math.isfinite(self.a) and math.isfinite(self.b)


@dataclass(frozen=True)
class Ball:
    N: int
    R: float

    def __post_init__(self):
        if self.N < 1 or not self.R > 0:
            raise DomainError(f"invalid ball N={self.N}, R={self.R}")


@dataclass(frozen=True)
class HalfSpace:
    """``{x : x_1 > c}`` in dimension ``N``."""

    N: int
    c: float

    def __post_init__(self):
        if self.N < 1:
            raise DomainError(f"invalid dimension {self.N}")


@dataclass(frozen=True)
class Rectangle:
    x: Interval1D
    y: Interval1D


def unit_ball_volume(N):
    """Lebesgue volume of the unit ball in R^N."""
    return math.pi ** (N / 2) / math.gamma(N / 2 + 1)


def sphere_factor(N):
    """``N omega_N / (2 pi)^(N/2)``: radial density prefactor of gamma_N."""
    return N * unit_ball_volume(N) / (2 * math.pi) ** (N / 2)


def _interval_measure(a, b):
    # use the lower tail when the interval sits on the negative side
    if b <= 0:
        return float(sc.ndtr(b) - sc.ndtr(a))
    return phi_complementary(a) - phi_complementary(b)


def _interval_perimeter(a, b):
    return sum(math.exp(-0.5 * t * t) for t in (a, b) if math.isfinite(t)) / SQRT2PI


def gauss_measure(d):
    if isinstance(d, Interval1D):
        return _interval_measure(d.a, d.b)
    if isinstance(d, Ball):
        if math.isinf(d.R):
            return 1.0
        n = d.N
        radial = quad(lambda s: math.exp(-0.5 * s * s) * s ** (n - 1), 0.0, d.R, tol=1e-14)
        return sphere_factor(n) * radial
    if isinstance(d, HalfSpace):
        return phi_complementary(d.c)
    if isinstance(d, Rectangle):
        return _interval_measure(d.x.a, d.x.b) * _interval_measure(d.y.a, d.y.b)
    raise TypeError(f"unsupported domain {d!r}")


def gauss_perimeter(d):
    if isinstance(d, Interval1D):
        return _interval_perimeter(d.a, d.b)
    if isinstance(d, Ball):
        if math.isinf(d.R):
            return 0.0
        return sphere_factor(d.N) * d.R ** (d.N - 1) * math.exp(-0.5 * d.R**2)
    if isinstance(d, HalfSpace):
        return math.exp(-0.5 * d.c**2) / SQRT2PI if math.isfinite(d.c) else 0.0
    if isinstance(d, Rectangle):
        px, py = _interval_perimeter(d.x.a, d.x.b), _interval_perimeter(d.y.a, d.y.b)
        mx, my = _interval_measure(d.x.a, d.x.b), _interval_measure(d.y.a, d.y.b)
        return px * my + mx * py
    raise TypeError(f"unsupported domain {d!r}")


def b_of_a(a, L):
    """Right endpoint ``b`` with ``gamma_1(a, b) = L``.

    Equivalent to ``sqrt(2) erfinv(2L + erf(a/sqrt(2)))``; evaluated through
    the Gaussian tail so it stays accurate for intervals far out on the
    right. Returns ``inf`` at the right half-line limit.
    """
    if not 0.0 < L < 1.0:
        raise DomainError(f"L must lie in (0, 1), got {L}")
    tail = phi_complementary(a) - L
    if tail < -1e-15:
        raise DomainError(f"no b with gamma(a, b) = {L} for a = {a}")
    if tail <= 0.0:
        return INF
    return phi_inverse(tail)


def half_space_rearranged(m, N=1):
    """Half-space ``{x_1 > Phi^{-1}(m)}`` of Gaussian measure ``m``."""
    return HalfSpace(N, phi_inverse(m))
