import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gaussneumann import special
from gaussneumann.errors import DomainError, QuadratureError
from oracles import bisect, erf_series

# frozen from 30-digit mpmath evaluations
ERF_HALF = 0.5204998778130465
ERFINV_03 = 0.27246271472675435
Z_975 = 1.959963984540054


def test_erf_frozen_and_series():
    assert special.erf(0.5) == pytest.approx(ERF_HALF, abs=1e-15)
    for x in (-2.5, -0.3, 0.0, 0.7, 1.9):
        assert special.erf(x) == pytest.approx(erf_series(x), abs=1e-14)


def test_erfinv_against_bisection():
    assert special.erfinv(0.3) == pytest.approx(ERFINV_03, abs=1e-15)
    for p in (-0.99, -0.5, 0.1, 0.8, 0.999):
        ref = bisect(lambda x: erf_series(x) - p, -4.0, 4.0)
        assert special.erfinv(p) == pytest.approx(ref, abs=1e-12)


@pytest.mark.parametrize("p", [1.0, -1.0, 1.5, float("nan")])
def test_erfinv_domain(p):
    with pytest.raises(DomainError):
        special.erfinv(p)


def test_phi_inverse_quantile():
    assert special.phi_inverse(0.025) == pytest.approx(Z_975, abs=1e-14)
    assert special.phi_inverse(0.5) == 0.0
    with pytest.raises(DomainError):
        special.phi_inverse(0.0)
    with pytest.raises(DomainError):
        special.phi_inverse(1.0)


@settings(max_examples=200, deadline=None)
@given(st.floats(-30.0, 30.0))
def test_phi_round_trip(t):
    m = special.phi_complementary(t)
    if 1e-300 < m < 1.0 - 1e-15:
        # inverting near m = 1 loses accuracy like eps / density
        err = 1e-12 * (1 + abs(t)) + 4e-16 / special.gauss_density(t)
        assert special.phi_inverse(m) == pytest.approx(t, abs=err)


@settings(max_examples=100, deadline=None)
@given(st.floats(-6.0, 6.0), st.floats(0.01, 3.0))
def test_phi_decreasing(t, dt):
    assert special.phi_complementary(t + dt) < special.phi_complementary(t)


def test_truncation_radius():
    r = special.truncation_radius()
    assert math.exp(-0.5 * r * r) == pytest.approx(special.TRUNC_WEIGHT, rel=1e-12)
    assert 9.0 < r < 9.2
    with pytest.raises(DomainError):
        special.truncation_radius(1.0)


def test_hermite_coefficients():
    assert special.hermite_poly(0).coefficients == (1.0,)
    assert special.hermite_poly(2).coefficients == (-1.0, 0.0, 1.0)
    assert special.hermite_poly(4).coefficients == (3.0, 0.0, -6.0, 0.0, 1.0)
    with pytest.raises(DomainError):
        special.hermite_poly(-1)


@pytest.mark.parametrize("n", range(7))
def test_hermite_orthogonality_and_ode(n):
    # int H_n H_m dgamma = n! delta_nm
    x, w = np.polynomial.hermite_e.hermegauss(20)
    w = w / math.sqrt(2 * math.pi)
    hn = special.hermite_poly(n)(x)
    for m in range(7):
        ip = np.sum(w * hn * special.hermite_poly(m)(x))
        assert ip == pytest.approx(math.factorial(n) if m == n else 0.0, abs=1e-9)
    t = np.linspace(-5, 5, 41)
    h, d, res = special.hermite_eval(n, t)
    assert np.allclose(h, special.hermite_poly(n)(t))
    assert np.allclose(d, special.hermite_poly(n).deriv()(t))
    assert np.max(res) < 1e-9


def test_quad_truncates_infinite_ends():
    val = special.quad(lambda t: math.exp(-0.5 * t * t) / math.sqrt(2 * math.pi), -math.inf, math.inf, tol=1e-14)
    assert val == pytest.approx(1.0, abs=1e-13)
    # int_0^1 s^3 e^{-s^2/2} ds = 2 - 3 e^{-1/2}
    assert special.quad(lambda s: s**3 * math.exp(-0.5 * s * s), 0, 1, tol=1e-14) == pytest.approx(
        0.18040802086209973, abs=1e-14
    )


def test_quad_errors():
    with pytest.raises(DomainError):
        special.quad(math.sin, 1.0, 0.0)
    with pytest.raises(QuadratureError) as info:
        special.quad(lambda t: math.sin(1.0 / t) / t, 1e-9, 1.0, tol=1e-14, limit=5)
    assert math.isfinite(info.value.estimate)
