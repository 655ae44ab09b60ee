import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gaussneumann import radial
from gaussneumann.errors import DomainError
from gaussneumann.sampled import SampledFunction
from oracles import extrapolate, fd_radial

# shooting values at tol 1e-12, confirmed by the finite-volume oracle
NU1_2_1 = 3.8376221679
NU1_2_15 = 1.9914691888
NU1_3_1 = 4.7156903699
TAU1_2_1 = 14.7652439532


def test_frobenius_solves_ode():
    # f = r^k (1 + c r^2) leaves an O(r^{k+4}) residual
    N, k, mu = 3, 1, 2.7
    r = 1e-3
    f, df = radial.frobenius(N, k, mu, r)
    assert f == pytest.approx(r * (1 + (k - mu) / (4 * k + 2 * N) * r * r))
    assert df / f == pytest.approx(k / r, rel=1e-5)


@pytest.mark.parametrize(
    "N, k, R, value", [(2, 1, 1.0, NU1_2_1), (2, 1, 1.5, NU1_2_15), (3, 1, 1.0, NU1_3_1)]
)
def test_angular_branch_frozen(N, k, R, value):
    assert radial.radial_eigenvalue(N, k, R, 0, tol=1e-12) == pytest.approx(value, abs=1e-9)
    ref = extrapolate(lambda n: fd_radial(N, k, R, n, 1), 100, 3)[0]
    assert ref == pytest.approx(value, abs=1e-7)


def test_radial_branch_frozen():
    assert radial.tau(2, 1.0, 1, 1e-12) == pytest.approx(TAU1_2_1, abs=1e-9)
    ref = extrapolate(lambda n: fd_radial(2, 0, 1.0, n, 2), 100, 3)
    assert ref[1] == pytest.approx(TAU1_2_1, abs=1e-7)


@pytest.mark.parametrize("N", [2, 3, 5])
def test_whole_space_anchors(N):
    res = radial.radial_eigs(radial.RadialProblem(N, 0, math.inf), 3, 1e-10)
    assert [r.value for r in res] == pytest.approx([0.0, 2.0, 4.0], abs=1e-8)
    assert radial.nu1(N, math.inf, 1e-10) == pytest.approx(1.0, abs=1e-8)
    # first node of r^2 - N
    assert res[1].diagnostics["r0"] == pytest.approx(math.sqrt(N), abs=1e-6)
    assert radial.radial_eigenvalue(N, 0, math.sqrt(N), 0, "dirichlet", 1e-11) == pytest.approx(2.0, abs=1e-9)


def test_profiles_normalized():
    res = radial.radial_eigs(radial.RadialProblem(3, 1, 1.7), 2, 1e-11)
    for r in res:
        assert radial.radial_norm2(3, r.eigenfunction, 1.7) == pytest.approx(1.0, abs=1e-8)
        assert r.eigenfunction.values[1] > 0
    assert [r.nodes for r in res] == [0, 1]
    assert res[0].eigenfunction.values[0] == 0.0


def test_constant_mode():
    res = radial.radial_eigs(radial.RadialProblem(2, 0, 1.2), 1)
    assert res[0].value == 0.0
    assert np.ptp(res[0].eigenfunction.values) == 0.0


def test_ball_mu1_and_rayleigh():
    mu, w = radial.mu1_ball(2, 1.5, 1e-12)
    assert mu == pytest.approx(NU1_2_15, abs=1e-9)
    assert radial.ball_rayleigh(2, w, 1.5) == pytest.approx(mu, abs=1e-8)
    # a trial function that is not an eigenfunction sits above
    r = np.linspace(0, 1.5, 301)
    trial = SampledFunction(r, r, np.ones_like(r))
    assert radial.ball_rayleigh(2, trial, 1.5) > mu
    with pytest.raises(DomainError):
        radial.mu1_ball(1, 1.0)


@settings(max_examples=10, deadline=None)
@given(st.sampled_from([2, 3, 4]), st.floats(0.3, 5.0))
def test_angular_below_radial(N, R):
    assert radial.nu1(N, R) < radial.tau(N, R)


@settings(max_examples=10, deadline=None)
@given(st.sampled_from([2, 3, 5]), st.floats(0.5, 3.0), st.sampled_from([1, 2]))
def test_radial_shape_derivative(N, R, index):
    sd = radial.shape_derivative_radial(N, R, index)
    assert sd.formula_value < 0
    assert sd.formula_value == pytest.approx(sd.fd_value, rel=1e-4)


def test_shape_derivative_arguments():
    with pytest.raises(DomainError):
        radial.shape_derivative_radial(2, 1.0, 0)
    with pytest.raises(DomainError):
        radial.shape_derivative_radial(2, math.inf, 1)


def test_problem_validation():
    with pytest.raises(DomainError):
        radial.RadialProblem(0, 0, 1.0)
    with pytest.raises(DomainError):
        radial.RadialProblem(2, -1, 1.0)
    with pytest.raises(DomainError):
        radial.RadialProblem(2, 0, -1.0)
    assert radial.RadialProblem(4, 2, 1.0).kbar == 8


@pytest.mark.parametrize("N", [2, 3, 5])
def test_whole_space_truncation_insensitive(N, monkeypatch):
    def low(N):
        res = radial.radial_eigs(radial.RadialProblem(N, 0, math.inf), 3, 1e-11, profiles=False)
        return [r.value for r in res] + [radial.nu1(N, math.inf, 1e-11)]

    base = low(N)
    monkeypatch.setattr(radial, "R_INF_MIN", 2 * radial.R_INF_MIN)
    monkeypatch.setattr(radial, "R_INF_MARGIN", 2 * radial.R_INF_MARGIN)
    assert low(N) == pytest.approx(base, abs=1e-11)
