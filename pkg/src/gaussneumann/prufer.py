"""Prüfer-angle shooting for ``u'' + q1(x) u' + (mu - q0(x)) u = 0``.

Here ``q1(x) = c1/x - x`` and ``q0(x) = kbar/x**2``; ``c1 = kbar = 0`` gives
the one-dimensional Hermite operator, ``c1 = N - 1`` and
``kbar = k(k + N - 2)`` the radial equation of angular index ``k``.

With ``u = rho sin(theta)`` and ``u' = rho cos(theta)``::

    theta' = cos^2 + q1 sin cos + (mu - q0) sin^2
    (log rho)' = (1 - mu + q0) sin cos - q1 cos^2

``theta`` only crosses multiples of pi upwards (at zeros of ``u``), so the
total phase counts nodes and the boundary mismatch is monotone in ``mu``.
"""

from dataclasses import dataclass, field
import math
from typing import Callable

import numba
import numpy as np
from scipy import optimize

from .errors import SolverError

# Dormand-Prince 5(4) tableau
_C2, _C3, _C4, _C5 = 1 / 5, 3 / 10, 4 / 5, 8 / 9
_A21 = 1 / 5
_A31, _A32 = 3 / 40, 9 / 40
_A41, _A42, _A43 = 44 / 45, -56 / 15, 32 / 9
_A51, _A52, _A53, _A54 = 19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729
_A61, _A62, _A63, _A64, _A65 = 9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656
_B1, _B3, _B4, _B5, _B6 = 35 / 384, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84
_E1, _E3, _E4, _E5, _E6, _E7 = (
    71 / 57600,
    -71 / 16695,
    71 / 1920,
    -17253 / 339200,
    22 / 525,
    -1 / 40,
)


@numba.njit(cache=True)
def _rhs(x, th, mu, c1, kbar):
    s = math.sin(th)
    c = math.cos(th)
    q1 = -x
    if c1 != 0.0:
        q1 += c1 / x
    q0 = 0.0
    if kbar != 0.0:
        q0 = kbar / (x * x)
    return c * c + q1 * s * c + (mu - q0) * s * s, (1.0 - mu + q0) * s * c - q1 * c * c


@numba.njit(cache=True)
def integrate_phase(xs, th0, lr0, mu, c1, kbar, rtol, atol, h0, max_steps):
    """Integrate (theta, log rho) through the monotone abscissae ``xs``.

    Returns the two state arrays at ``xs`` and the number of accepted steps
    (negative on failure).
    """
    n = xs.shape[0]
    th_out = np.empty(n)
    lr_out = np.empty(n)
    th_out[0] = th0
    lr_out[0] = lr0
    if n == 1:
        return th_out, lr_out, 0
    direction = 1.0 if xs[n - 1] > xs[0] else -1.0
    x = xs[0]
    th = th0
    lr = lr0
    h = abs(h0)
    steps = 0
    k1t, k1r = _rhs(x, th, mu, c1, kbar)
    for i in range(1, n):
        target = xs[i]
        while direction * (target - x) > 0.0:
            if steps >= max_steps:
                return th_out, lr_out, -1
            rem = abs(target - x)
            tiny = 1e-15 * max(1.0, abs(x))
            if rem <= tiny:
                # output point within roundoff of x: the state cannot change
                x = target
                k1t, k1r = _rhs(x, th, mu, c1, kbar)
                break
            last = h >= rem
            hh = rem if last else h
            if hh < tiny:
                return th_out, lr_out, -2
            d = direction * hh
            k2t, k2r = _rhs(x + _C2 * d, th + d * _A21 * k1t, mu, c1, kbar)
            k3t, k3r = _rhs(x + _C3 * d, th + d * (_A31 * k1t + _A32 * k2t), mu, c1, kbar)
            k4t, k4r = _rhs(
                x + _C4 * d, th + d * (_A41 * k1t + _A42 * k2t + _A43 * k3t), mu, c1, kbar
            )
            k5t, k5r = _rhs(
                x + _C5 * d,
                th + d * (_A51 * k1t + _A52 * k2t + _A53 * k3t + _A54 * k4t),
                mu,
                c1,
                kbar,
            )
            k6t, k6r = _rhs(
                x + d,
                th + d * (_A61 * k1t + _A62 * k2t + _A63 * k3t + _A64 * k4t + _A65 * k5t),
                mu,
                c1,
                kbar,
            )
            th_new = th + d * (_B1 * k1t + _B3 * k3t + _B4 * k4t + _B5 * k5t + _B6 * k6t)
            lr_new = lr + d * (_B1 * k1r + _B3 * k3r + _B4 * k4r + _B5 * k5r + _B6 * k6r)
            x_new = target if last else x + d
            k7t, k7r = _rhs(x_new, th_new, mu, c1, kbar)
            et = d * (_E1 * k1t + _E3 * k3t + _E4 * k4t + _E5 * k5t + _E6 * k6t + _E7 * k7t)
            er = d * (_E1 * k1r + _E3 * k3r + _E4 * k4r + _E5 * k5r + _E6 * k6r + _E7 * k7r)
            st = atol + rtol * max(abs(th), abs(th_new))
            sr = atol + rtol * max(abs(lr), abs(lr_new))
            err = max(abs(et) / st, abs(er) / sr)
            if err <= 1.0:
                x = x_new
                th = th_new
                lr = lr_new
                k1t = k7t
                k1r = k7r
                steps += 1
            fac = 5.0 if err == 0.0 else min(5.0, max(0.2, 0.9 * err ** -0.2))
            if last and err <= 1.0:
                # a step shortened to land on an output point says little about h
                h = max(h, hh * fac)
            else:
                h = hh * fac
        th_out[i] = th
        lr_out[i] = lr
    return th_out, lr_out, steps


def _constant_state(theta):
    return lambda mu: (theta, 0.0)


@dataclass
class Shooter:
    """Two-sided shooting on ``[left, right]`` matched at ``match``.

    ``left_state(mu)`` gives (theta, log rho) at ``left``; at ``right`` the
    angle is ``right_angle`` (pi/2 for a Neumann end, pi for Dirichlet).
    Eigenvalue ``n`` (with n interior nodes) solves
    ``theta_L(match) - theta_R(match) = n pi``.
    """

    left: float
    right: float
    match: float
    right_angle: float
    left_state: Callable = field(default_factory=lambda: _constant_state(math.pi / 2))
    c1: float = 0.0
    kbar: float = 0.0
    ode_tol: float = 1e-12
    h0: float = 1e-3
    max_steps: int = 2_000_000

    def _run(self, xs, th0, lr0, mu, h0):
        th, lr, steps = integrate_phase(
            np.ascontiguousarray(xs, dtype=float),
            float(th0),
            float(lr0),
            float(mu),
            float(self.c1),
            float(self.kbar),
            self.ode_tol,
            self.ode_tol,
            float(h0),
            self.max_steps,
        )
        if steps < 0:
            raise SolverError(
                "phase integration failed",
                {"mu": mu, "span": (xs[0], xs[-1]), "code": int(steps)},
            )
        return th, lr

    def mismatch(self, mu):
        th0, lr0 = self.left_state(mu)
        th_l, _ = self._run([self.left, self.match], th0, lr0, mu, self.h0)
        th_r, _ = self._run([self.right, self.match], self.right_angle, 0.0, mu, 1e-3)
        return th_l[-1] - th_r[-1]

    def eigenvalue(self, n, lower, tol, ceiling=1e5):
        """Eigenvalue with ``n`` nodes, known to exceed ``lower``."""
        target = n * math.pi
        g = lambda mu: self.mismatch(mu) - target
        lo = lower
        g_lo = g(lo)
        step = 1.0
        while g_lo >= 0.0:
            lo -= step
            step *= 2.0
            if step > ceiling:
                raise SolverError("could not bracket from below", {"n": n, "lower": lower})
            g_lo = g(lo)
        hi = max(lo, 0.0) + 1.0
        step = 1.0
        g_hi = g(hi)
        while g_hi <= 0.0:
            lo, g_lo = hi, g_hi
            step *= 2.0
            hi = hi + step
            if hi > ceiling:
                raise SolverError(
                    "eigenvalue bracket exceeded search ceiling",
                    {"n": n, "ceiling": ceiling, "last_mismatch": g_hi},
                )
            g_hi = g(hi)
        mu, info = optimize.brentq(g, lo, hi, xtol=tol / 4, rtol=1e-15, full_output=True)
        # certify a bracket of width tol around the root
        half = tol / 2
        a, b = mu - half, mu + half
        ga, gb = g(a), g(b)
        if not (ga <= 0.0 <= gb):
            raise SolverError(
                "eigenvalue bracket could not be certified",
                {"n": n, "mu": mu, "g_minus": ga, "g_plus": gb, "iterations": info.iterations},
            )
        return mu, b - a

    def profile(self, mu, grid):
        """Sample (u, u') at ``grid`` (which must contain ``match``).

        The right piece is rescaled and sign-matched to join the left piece
        continuously at ``match``.
        """
        grid = np.asarray(grid, dtype=float)
        left_part = grid[grid <= self.match]
        right_part = grid[grid >= self.match][::-1]
        th0, lr0 = self.left_state(mu)
        th_l, lr_l = self._run(left_part, th0, lr0, mu, self.h0)
        th_r, lr_r = self._run(right_part, self.right_angle, 0.0, mu, 1e-3)
        shift = round((th_l[-1] - th_r[-1]) / math.pi)
        th_r = th_r + shift * math.pi
        lr_r = lr_r + (lr_l[-1] - lr_r[-1])
        theta = np.concatenate([th_l, th_r[::-1][1:]])
        logrho = np.concatenate([lr_l, lr_r[::-1][1:]])
        rho = np.exp(logrho - logrho.max())
        return rho * np.sin(theta), rho * np.cos(theta), theta
