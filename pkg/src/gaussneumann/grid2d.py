"""Gaussian-weighted Neumann eigenvalues of planar domains.

Product domains are solved exactly by separation of variables. Other
domains are discretized by cell-centred finite volumes on a masked uniform
grid: a cell is active when its centre lies in the domain, each interior
face carries the flux weight ``phi_2(face midpoint)`` and boundary faces
are simply left out, so the Neumann condition is natural and constants lie
exactly in the kernel.
"""

from dataclasses import dataclass, field
import math
from typing import Optional

import numpy as np
from scipy import linalg, ndimage, sparse
from scipy.sparse import linalg as splinalg

from .errors import DomainError, SolverError
from .measure import Interval1D, gauss_measure
from .special import phi_inverse
from .sturm1d import NEUMANN, eigenvalues1d

DENSE_LIMIT = 4000
# shift for the sparse solver; below the spectrum so the constant mode
# cannot be confused with its neighbours
SHIFT = -0.5

T_LO = math.sqrt(3.0 - math.sqrt(6.0))
T_HI = math.sqrt(3.0 + math.sqrt(6.0))


def phi2(x, y):
    return np.exp(-0.5 * (x * x + y * y)) / (2.0 * math.pi)


@dataclass
class MaskedGrid2D:
    """Uniform cells ``[x0 + i hx, x0 + (i+1) hx] x [y0 + j hy, ...]``;
    ``active[i, j]`` marks cells of the domain."""

    x0: float
    y0: float
    hx: float
    hy: float
    active: np.ndarray

    def __post_init__(self):
        self.active = np.asarray(self.active, dtype=bool)
        if self.active.ndim != 2:
            raise DomainError("mask must be two-dimensional")
        if not (self.hx > 0 and self.hy > 0):
            raise DomainError("grid spacing must be positive")

    @property
    def h(self):
        return max(self.hx, self.hy)

    @property
    def shape(self):
        return self.active.shape

    def centers(self):
        nx, ny = self.shape
        xc = self.x0 + (np.arange(nx) + 0.5) * self.hx
        yc = self.y0 + (np.arange(ny) + 0.5) * self.hy
        return np.meshgrid(xc, yc, indexing="ij")

    @property
    def cell_weight(self):
        X, Y = self.centers()
        return np.where(self.active, phi2(X, Y) * self.hx * self.hy, 0.0)

    @property
    def edge_weight(self):
        """Face weights ``phi_2(midpoint) * face length`` for x- and y-faces
        between active cells."""
        X, Y = self.centers()
        ex = phi2(X[:-1] + 0.5 * self.hx, Y[:-1]) * self.hy
        ey = phi2(X[:, :-1], Y[:, :-1] + 0.5 * self.hy) * self.hx
        ex = np.where(self.active[:-1] & self.active[1:], ex, 0.0)
        ey = np.where(self.active[:, :-1] & self.active[:, 1:], ey, 0.0)
        return ex, ey

    @property
    def measure(self):
        return float(np.sum(self.cell_weight))

    @property
    def n_active(self):
        return int(np.count_nonzero(self.active))

    def is_connected(self):
        _, n = ndimage.label(self.active)
        return n == 1

    def is_centrally_symmetric(self, atol=1e-12):
        """Mask invariant under ``x -> -x`` (the grid itself must be symmetric)."""
        nx, ny = self.shape
        if abs(2 * self.x0 + nx * self.hx) > atol * max(1, abs(self.x0)):
            return False
        if abs(2 * self.y0 + ny * self.hy) > atol * max(1, abs(self.y0)):
            return False
        return bool(np.array_equal(self.active, self.active[::-1, ::-1]))


def assemble(g):
    """Stiffness ``A`` (sparse, on active cells) and diagonal mass ``M``."""
    idx = -np.ones(g.shape, dtype=np.int64)
    idx[g.active] = np.arange(g.n_active)
    ex, ey = g.edge_weight
    rows, cols, vals = [], [], []
    for w, a, b, h in (
        (ex, idx[:-1], idx[1:], g.hx),
        (ey, idx[:, :-1], idx[:, 1:], g.hy),
    ):
        sel = w > 0
        i, j, c = a[sel], b[sel], w[sel] / h
        rows += [i, j, i, j]
        cols += [j, i, i, j]
        vals += [-c, -c, c, c]
    n = g.n_active
    A = sparse.coo_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))), shape=(n, n)
    ).tocsr()
    M = g.cell_weight[g.active]
    return A, M


@dataclass
class SpectrumResult:
    eigenvalues: np.ndarray
    eigenfunction: Optional[np.ndarray] = None
    diagnostics: dict = field(default_factory=dict)


def masked_eigs(g, count=3, tol=1e-10):
    """Smallest ``count`` eigenvalues of ``A u = mu M u`` on the mask.

    The first nontrivial eigenvector is returned on the full grid (nan on
    inactive cells), normalized in the discrete ``L^2(gamma_2)`` norm.
    """
    if g.n_active == 0:
        raise DomainError("empty mask")
    if not g.is_connected():
        raise DomainError("mask is not 4-connected")
    count = min(count, g.n_active)
    A, M = assemble(g)
    n = g.n_active
    if n <= DENSE_LIMIT:
        vals, vecs = linalg.eigh(A.toarray(), np.diag(M), subset_by_index=[0, count - 1])
        method = "dense"
    else:
        try:
            # fixed start vector: ARPACK's default is random
            v0 = np.random.default_rng(0).standard_normal(n)
            vals, vecs = splinalg.eigsh(
                A, k=count, M=sparse.diags(M), sigma=SHIFT, which="LM", tol=tol, v0=v0
            )
        except (splinalg.ArpackNoConvergence, RuntimeError) as exc:
            raise SolverError("sparse eigensolver did not converge", {"n_active": n}) from exc
        order = np.argsort(vals)
        vals, vecs = vals[order], vecs[:, order]
        method = "shift-invert"
    ef = None
    if count > 1:
        v = vecs[:, 1] / math.sqrt(np.sum(M * vecs[:, 1] ** 2))
        ef = np.full(g.shape, np.nan)
        ef[g.active] = v
    diag = {"h": g.h, "n_active": n, "method": method}
    return SpectrumResult(np.asarray(vals), ef, diag)


def tensor_eigs(ivx, ivy, count=3, tol=1e-9):
    """Spectrum of ``ivx x ivy``: all sums ``mu_i(ivx) + mu_j(ivy)``."""
    ex = eigenvalues1d(ivx, NEUMANN, count, tol)
    ey = eigenvalues1d(ivy, NEUMANN, count, tol)
    pairs = sorted(((a + b, i, j) for i, a in enumerate(ex) for j, b in enumerate(ey)))[:count]
    return SpectrumResult(
        np.array([p[0] for p in pairs]),
        None,
        {"pairs": [(p[1], p[2]) for p in pairs], "x": ex, "y": ey},
    )


def rectangle_grid(ivx, ivy, nx, ny=None):
    """Full mask of a bounded rectangle with ``nx`` by ``ny`` cells."""
    if not (ivx.bounded and ivy.bounded):
        raise DomainError("rectangle_grid needs a bounded rectangle")
    ny = nx if ny is None else ny
    hx, hy = (ivx.b - ivx.a) / nx, (ivy.b - ivy.a) / ny
    return MaskedGrid2D(ivx.a, ivy.a, hx, hy, np.ones((nx, ny), dtype=bool))


def symmetric_grid(predicate, extent, n):
    """Mask of ``{predicate(x, y)}`` on ``2n x 2n`` cells over ``[-extent, extent]^2``.

    The grid is symmetric about the origin, so centrally symmetric
    domains give centrally symmetric masks.
    """
    h = extent / n
    g = MaskedGrid2D(-extent, -extent, h, h, np.zeros((2 * n, 2 * n), dtype=bool))
    X, Y = g.centers()
    g.active = np.asarray(predicate(X, Y), dtype=bool)
    return g


def disk_grid(R, n):
    """Disk of radius ``R``; ``n`` cells per radius."""
    return symmetric_grid(lambda x, y: x * x + y * y < R * R, R * (1.0 + 1.0 / n), n + 1)


def f_delta(x, delta):
    """Top edge of the square with its upper-right corner rounded."""
    x = np.asarray(x, dtype=float)
    c = T_HI - delta
    arc = c + np.sqrt(np.maximum(delta * delta - (x - c) ** 2, 0.0))
    return np.where(x <= c, T_HI, arc)


def rounded_square(delta, n=80):
    """Mask of the square ``(T_LO, T_HI)^2`` with one corner rounded by an arc
    of radius ``delta``; cells of side ``(T_HI - T_LO)/n`` aligned with the
    square. ``delta = 0`` gives the full square."""
    side = T_HI - T_LO
    if not 0.0 <= delta < side / 2:
        raise DomainError(f"delta must lie in [0, {side / 2}), got {delta}")
    h = side / n
    g = MaskedGrid2D(T_LO, T_LO, h, h, np.ones((n, n), dtype=bool))
    if delta > 0:
        X, Y = g.centers()
        g.active = Y <= f_delta(X, delta)
    return g


def rounded_square_measure(delta):
    """Gaussian measure of the rounded square by 1D quadrature in ``x``."""
    from .special import quad

    def column(x):
        top = float(f_delta(x, delta))
        return math.exp(-0.5 * x * x) / math.sqrt(2 * math.pi) * gauss_measure(Interval1D(T_LO, top))

    c = T_HI - delta
    return quad(column, T_LO, T_HI, tol=1e-13, points=[c])


def richardson(h1, mu1, h2, mu2):
    """First-order extrapolation ``mu(h) = mu_0 + C h`` through two levels."""
    return (h1 * mu2 - h2 * mu1) / (h1 - h2)


def half_space_mu1(threshold, tol=1e-9):
    """First nontrivial eigenvalue of ``{x_1 > threshold}`` in the plane.

    Tensor route: the half-line factor against the full transverse line.
    Returns ``(mu1, half_line_mu1, transverse_mu1)``.
    """
    res = tensor_eigs(Interval1D(threshold, math.inf), Interval1D(-math.inf, math.inf), 2, tol)
    return float(res.eigenvalues[1]), res.diagnostics["x"][1], res.diagnostics["y"][1]


def counterexample_run(deltas=(0.2, 0.1, 0.05), h_levels=(0.04, 0.02), tol=1e-9):
    """``mu_1`` of the rounded squares at two or more grid levels with
    first-order extrapolation, against the equal-measure half-space."""
    deltas, h_levels = list(deltas), list(h_levels)
    if any(b > a for a, b in zip(deltas, deltas[1:])) or any(
        b > a for a, b in zip(h_levels, h_levels[1:])
    ):
        raise DomainError("deltas and h_levels must be descending")
    if len(h_levels) < 2:
        raise DomainError("need at least two grid levels")
    side = T_HI - T_LO
    square = tensor_eigs(Interval1D(T_LO, T_HI), Interval1D(T_LO, T_HI), 3, tol)
    rows = [{"delta": 0.0, "h": [], "mu1": [], "extrapolated": float(square.eigenvalues[1])}]
    for d in deltas:
        hs, mus = [], []
        for h in h_levels:
            g = rounded_square(d, max(1, round(side / h)))
            hs.append(g.h)
            mus.append(float(masked_eigs(g, 2, tol * 1e-2).eigenvalues[1]))
        ext = richardson(hs[-2], mus[-2], hs[-1], mus[-1])
        rows.append({"delta": d, "h": hs, "mu1": mus, "extrapolated": ext})
    m_T = gauss_measure(Interval1D(T_LO, T_HI)) ** 2
    c = phi_inverse(m_T)
    hs_mu, half_line, transverse = half_space_mu1(c, tol)
    return {
        "rows": rows,
        "square_spectrum": square.eigenvalues.tolist(),
        "half_space": {
            "measure": m_T,
            "threshold": c,
            "mu1": hs_mu,
            "half_line_mu1": half_line,
            "transverse_mu1": transverse,
        },
    }
