import math

import numpy as np
import pytest

from gaussneumann import grid2d, radial, weinberger
from gaussneumann.errors import DomainError
from gaussneumann.measure import Interval1D, gauss_measure


def test_assembly_kernel_and_symmetry():
    g = grid2d.disk_grid(1.3, 12)
    A, M = grid2d.assemble(g)
    assert abs(A - A.T).max() < 1e-16
    assert np.max(np.abs(A @ np.ones(g.n_active))) < 1e-15
    assert M.sum() == pytest.approx(g.measure)
    assert g.is_centrally_symmetric() and g.is_connected()


def test_rectangle_converges_to_tensor():
    ivx, ivy = Interval1D(-0.4, 1.1), Interval1D(0.2, 1.5)
    exact = grid2d.tensor_eigs(ivx, ivy, 3).eigenvalues
    mus = [grid2d.masked_eigs(grid2d.rectangle_grid(ivx, ivy, n), 3).eigenvalues for n in (20, 40)]
    assert mus[0][0] == pytest.approx(0.0, abs=1e-9)
    err = [abs(m[1] - exact[1]) for m in mus]
    # second order on cell-aligned rectangles
    assert err[1] < err[0] / 3
    assert err[1] < 2e-3 * exact[1]


def test_tensor_pairs():
    iv = Interval1D(grid2d.T_LO, grid2d.T_HI)
    res = grid2d.tensor_eigs(iv, iv, 3)
    assert res.eigenvalues == pytest.approx([0, 5, 5], abs=1e-8)
    assert sorted(res.diagnostics["pairs"][1:]) == [(0, 1), (1, 0)]


def test_disk_mask_against_radial():
    R = 1.4
    mu, _ = radial.mu1_ball(2, R)
    fv = grid2d.masked_eigs(grid2d.disk_grid(R, 40), 3).eigenvalues
    assert fv[1] == pytest.approx(mu, rel=0.03)
    assert fv[2] == pytest.approx(mu, rel=0.03)


def test_sparse_path_matches_dense():
    g = grid2d.disk_grid(1.5, 40)
    assert g.n_active > grid2d.DENSE_LIMIT
    sparse = grid2d.masked_eigs(g, 3)
    assert sparse.diagnostics["method"] == "shift-invert"
    small = grid2d.disk_grid(1.5, 30)
    dense = grid2d.masked_eigs(small, 3)
    assert dense.diagnostics["method"] == "dense"
    assert sparse.eigenvalues[1] == pytest.approx(dense.eigenvalues[1], rel=0.02)
    ef = sparse.eigenfunction
    assert np.isnan(ef[~g.active]).all()
    assert np.sum(g.cell_weight[g.active] * ef[g.active] ** 2) == pytest.approx(1.0)


def test_mask_errors():
    g = grid2d.MaskedGrid2D(0, 0, 1, 1, np.array([[1, 0], [0, 1]]))
    assert not g.is_connected()
    with pytest.raises(DomainError):
        grid2d.masked_eigs(g)
    with pytest.raises(DomainError):
        grid2d.masked_eigs(grid2d.MaskedGrid2D(0, 0, 1, 1, np.zeros((2, 2))))
    with pytest.raises(DomainError):
        grid2d.MaskedGrid2D(0, 0, -1, 1, np.ones((2, 2)))
    with pytest.raises(DomainError):
        grid2d.rectangle_grid(Interval1D(0, math.inf), Interval1D(0, 1), 4)


def test_rounded_square():
    side = grid2d.T_HI - grid2d.T_LO
    full = grid2d.rounded_square(0.0, 40)
    assert full.n_active == 1600
    iv = Interval1D(grid2d.T_LO, grid2d.T_HI)
    assert grid2d.rounded_square_measure(0.0) == pytest.approx(gauss_measure(iv) ** 2, abs=1e-13)
    g = grid2d.rounded_square(0.2, 80)
    assert g.n_active < 6400
    assert g.measure == pytest.approx(grid2d.rounded_square_measure(0.2), rel=2e-2)
    assert grid2d.rounded_square_measure(0.2) < grid2d.rounded_square_measure(0.1)
    with pytest.raises(DomainError):
        grid2d.rounded_square(side / 2)
    assert float(grid2d.f_delta(grid2d.T_HI, 0.2)) == pytest.approx(grid2d.T_HI - 0.2)


def test_richardson_exact_on_linear():
    mu = lambda h: 3.0 + 7.0 * h
    assert grid2d.richardson(0.1, mu(0.1), 0.05, mu(0.05)) == pytest.approx(3.0)


def test_half_space():
    mu, half, transverse = grid2d.half_space_mu1(0.4)
    assert mu == pytest.approx(1.0, abs=1e-9)
    assert transverse == pytest.approx(1.0, abs=1e-9)
    assert half > 1.0


def test_counterexample_small_run():
    rep = grid2d.counterexample_run((0.1,), (0.08, 0.04))
    row = rep["rows"][1]
    assert all(m > 1 for m in row["mu1"])
    assert row["extrapolated"] == pytest.approx(5.0, rel=0.1)
    assert rep["rows"][0]["extrapolated"] == pytest.approx(5.0, abs=1e-8)
    with pytest.raises(DomainError):
        grid2d.counterexample_run((0.05, 0.1))
    with pytest.raises(DomainError):
        grid2d.counterexample_run((0.1,), (0.04,))
