import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gaussneumann import sturm1d
from gaussneumann.errors import DomainError, PreconditionError
from gaussneumann.measure import Interval1D, b_of_a
from gaussneumann.sampled import SampledFunction, integrate_pieces
from gaussneumann.special import SQRT2PI, gauss_density, hermite_poly, truncation_radius
from oracles import extrapolate, fd_interval

INF = math.inf
# Neumann mu_1, mu_2 of the centred interval (-0.6745, 0.6745); finite-volume
# oracle with h^2 Richardson extrapolation agrees to 1e-10
SYM_MU = (5.938310069291, 22.225954202394)
T = Interval1D(math.sqrt(3 - math.sqrt(6)), math.sqrt(3 + math.sqrt(6)))


@pytest.mark.parametrize("iv", [Interval1D(-INF, INF), Interval1D(-8.0, 8.0)])
def test_hermite_spectrum(iv):
    res = sturm1d.eig1d(iv, sturm1d.NEUMANN, 5, 1e-10)
    for n, r in enumerate(res):
        assert r.index == n
        assert r.value == pytest.approx(n, abs=1e-8)
        assert r.nodes == n
    # eigenfunctions are normalized Hermite polynomials up to sign
    u = res[2].eigenfunction
    h2 = hermite_poly(2)(u.grid) / math.sqrt(2.0)
    inside = np.abs(u.grid) < 4
    assert np.max(np.abs(np.abs(u.values[inside]) - np.abs(h2[inside]))) < 1e-6


def test_half_line_parity():
    right = Interval1D(0.0, INF)
    assert sturm1d.eigenvalues1d(right, sturm1d.NEUMANN, 3, 1e-11) == pytest.approx([0, 2, 4], abs=1e-9)
    assert sturm1d.eigenvalues1d(right, sturm1d.DIRICHLET, 2, 1e-11) == pytest.approx([1, 3], abs=1e-9)
    left = Interval1D(-INF, 0.0)
    assert sturm1d.lambda1(left, 1e-11) == pytest.approx(1.0, abs=1e-9)


def test_frozen_against_finite_volumes():
    iv = Interval1D(-0.6745, 0.6745)
    vals = sturm1d.eigenvalues1d(iv, sturm1d.NEUMANN, 3, 1e-12)
    assert vals[1:] == pytest.approx(SYM_MU, abs=1e-9)
    ref = extrapolate(lambda n: fd_interval(iv.a, iv.b, n), 100, 3)
    assert ref[1:] == pytest.approx(SYM_MU, abs=1e-7)


def test_square_side_constant():
    assert sturm1d.mu1(T, 1e-12) == pytest.approx(5.0, abs=1e-9)
    ref = extrapolate(lambda n: fd_interval(T.a, T.b, n), 100, 3)
    assert ref[1] == pytest.approx(5.0, abs=1e-7)


def test_dirichlet_values_and_nodes():
    iv = Interval1D(-1.0, 2.0)
    res = sturm1d.eig1d(iv, sturm1d.DIRICHLET, 3, 1e-10)
    assert [r.nodes for r in res] == [0, 1, 2]
    assert [r.value for r in res] == pytest.approx(sturm1d.eigenvalues1d(iv, sturm1d.DIRICHLET, 3, 1e-10), abs=1e-12)
    u = res[0].eigenfunction
    assert abs(u.values[0]) < 1e-12 and abs(u.values[-1]) < 1e-12


def test_eigenfunction_normalization_and_rayleigh():
    iv = Interval1D(-0.3, 1.7)
    r = sturm1d.eig1d(iv, sturm1d.NEUMANN, 2, 1e-11)[1]
    u = r.eigenfunction
    spline = u.interpolant()
    norm = integrate_pieces(lambda t: spline(t) ** 2 * gauss_density(t), u.grid)
    assert norm == pytest.approx(1.0, abs=1e-8)
    assert sturm1d.rayleigh(u, iv) == pytest.approx(r.value, rel=1e-7)
    assert r.bracket <= 1e-11 * (1 + 1e-6)


@settings(max_examples=15, deadline=None)
@given(st.floats(-3.0, 2.0), st.floats(0.2, 3.0), st.sampled_from(["bounded", "left", "right"]))
def test_neumann_dirichlet_gap(a, length, kind):
    b = a + length
    iv = {"bounded": Interval1D(a, b), "left": Interval1D(-INF, b), "right": Interval1D(a, INF)}[kind]
    assert sturm1d.neumann_dirichlet_gap(iv, 1e-10) == pytest.approx(1.0, abs=2e-10)


@pytest.mark.parametrize("iv", [Interval1D(-INF, 0.3), Interval1D(0.5, INF), Interval1D(-INF, -3.0), Interval1D(2.5, INF)])
def test_truncation_insensitive(iv):
    # doubling the cut radius leaves the low spectrum unchanged
    for bc, count in ((sturm1d.NEUMANN, 4), (sturm1d.DIRICHLET, 2)):
        a = sturm1d.eigenvalues1d(iv, bc, count, 1e-11)
        b = sturm1d.eigenvalues1d(iv, bc, count, 1e-11, trunc_weight=1e-36)
        assert a == pytest.approx(b, abs=1e-10)


def test_tail_radius():
    assert sturm1d.tail_radius(0.0) == truncation_radius()
    r = [sturm1d.tail_radius(mu) for mu in (1.0, 5.0, 15.0)]
    assert r[0] < r[1] < r[2]
    mu = 15.0
    t = r[2]
    assert 0.5 * t * t - 2 * mu * math.log(t) == pytest.approx(-math.log(1e-18), abs=1e-4)


def test_truncate_reaches_past_finite_end():
    a, b = sturm1d.truncate(Interval1D(-INF, -3.0))
    assert b == -3.0 and a <= -9.0
    assert sturm1d.truncate(Interval1D(-1.0, 2.0)) == (-1.0, 2.0)


def test_slide_profile_mirror_symmetry():
    L = 0.4
    for a in (-2.0, -1.1, -0.6):
        b = b_of_a(a, L)
        assert sturm1d.mu1(Interval1D(a, b), 1e-11) == pytest.approx(sturm1d.mu1(Interval1D(-b, -a), 1e-11), abs=1e-9)
    with pytest.raises(DomainError):
        sturm1d.slide_profile(L, [0.0, -1.0])


def test_symmetric_point():
    L = 0.5
    a = sturm1d.symmetric_point(L)
    assert b_of_a(a, L) == pytest.approx(-a, abs=1e-13)


def test_rayleigh_of_hermite_combination():
    # u = H_1 + 0.1 H_2: (1 + 0.01 * 2 * 2) / (1 + 0.01 * 2)
    x = np.linspace(-12, 12, 2401)
    u = SampledFunction(x, x + 0.1 * (x * x - 1), 1 + 0.2 * x)
    assert sturm1d.rayleigh(u, Interval1D(-INF, INF)) == pytest.approx(1.04 / 1.02, abs=1e-10)
    with pytest.raises(PreconditionError):
        sturm1d.rayleigh(SampledFunction(x, 1 + x, np.ones_like(x)), Interval1D(-INF, INF))
    with pytest.raises(DomainError):
        sturm1d.rayleigh(SampledFunction(x, 0 * x, 0 * x), Interval1D(-INF, INF))


def test_shape_derivative_1d():
    iv = Interval1D(-1.4, b_of_a(-1.4, 0.45))
    sd = sturm1d.shape_derivative_1d(iv)
    assert sd.formula_value == pytest.approx(sd.fd_value, rel=1e-5)
    assert sd.unscaled_value == pytest.approx(sd.formula_value * SQRT2PI)
    # moving right raises mu_1 left of the symmetric interval
    assert sd.formula_value > 0
    a = sturm1d.symmetric_point(0.45)
    assert abs(sturm1d.shape_derivative_1d(Interval1D(a, -a)).formula_value) < 1e-6
    with pytest.raises(DomainError):
        sturm1d.shape_derivative_1d(Interval1D(0.0, INF))


def test_count_sign_changes():
    assert sturm1d.count_sign_changes(np.array([1.0, 0.5, -0.2, -1.0, 0.3])) == 2
    assert sturm1d.count_sign_changes(np.array([0.0, 1.0, 1e-17, 2.0])) == 0


def test_bad_arguments():
    iv = Interval1D(0.0, 1.0)
    with pytest.raises(DomainError):
        sturm1d.eig1d(iv, "robin")
    with pytest.raises(DomainError):
        sturm1d.eigenvalues1d(iv, sturm1d.NEUMANN, 0)


@pytest.mark.parametrize("a", [-1.2e-157, 1e-300, -1e-16])
def test_endpoint_within_roundoff_of_match(a):
    # the match point sits at 0, almost on top of the left end
    assert sturm1d.mu1(Interval1D(a, 1.0), 1e-10) == pytest.approx(sturm1d.mu1(Interval1D(0.0, 1.0), 1e-10), abs=1e-9)
