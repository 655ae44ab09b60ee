import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from gaussneumann import rearrange
from gaussneumann.errors import DomainError, PreconditionError
from gaussneumann.measure import Interval1D, gauss_measure
from gaussneumann.sampled import SampledFunction

values = arrays(np.float64, st.integers(3, 60), elements=st.floats(-50, 50, allow_nan=False))


def _samples(v, a=-1.0, b=2.0):
    x = np.linspace(a, b, len(v) + 2)[1:-1]
    return SampledFunction(x, v), Interval1D(a, b)


def test_cell_weights_sum_to_measure():
    iv = Interval1D(-math.inf, 0.7)
    x = np.linspace(-3, 0.5, 40)
    w = rearrange.cell_weights(x, iv)
    assert w.sum() == pytest.approx(gauss_measure(iv), abs=1e-15)
    with pytest.raises(DomainError):
        rearrange.cell_weights(np.array([0.0, 1.0]), Interval1D(0.5, 2.0))


def test_rearrange_small_example():
    ws = rearrange.WeightedSamples([1.0, -3.0, 2.0], [0.1, 0.2, 0.3])
    r = rearrange.rearrange(ws)
    assert r.levels.tolist() == [3.0, 2.0, 1.0]
    assert r.breaks == pytest.approx([0.0, 0.2, 0.5, 0.6])
    assert r.u_star(0.1) == 3.0 and r.u_star(0.5) == 1.0
    assert r.u_lowstar(0.05) == 1.0
    assert r.mu(1.5) == pytest.approx(0.5)
    assert r.mu(np.array([0.0, 2.5])) == pytest.approx([0.6, 0.2])
    assert r.threshold() == pytest.approx(-0.2533471031357997)
    assert math.isnan(r.u_gauss(-1.0))
    assert r.u_gauss(3.0) == 3.0
    with pytest.raises(DomainError):
        r.u_star(0.7)


def test_weighted_samples_validation():
    with pytest.raises(DomainError):
        rearrange.WeightedSamples([1.0], [0.1, 0.2])
    with pytest.raises(DomainError):
        rearrange.WeightedSamples([1.0], [-0.1])
    with pytest.raises(DomainError):
        rearrange.WeightedSamples([], [])
    with pytest.raises(DomainError):
        rearrange.rearrange(SampledFunction([0.0, 1.0], [1.0, 2.0]))


@settings(max_examples=100, deadline=None)
@given(values)
def test_equimeasurable(v):
    u, iv = _samples(v)
    r = rearrange.rearrange(u, iv)
    assert np.all(np.diff(r.levels) <= 0)
    for t in np.quantile(np.abs(v), [0.1, 0.5, 0.9]):
        step = np.sum(np.diff(r.breaks)[r.levels > t])
        assert step == pytest.approx(r.mu(t), abs=1e-14)
    for p in (1, 2, 3):
        direct = rearrange.lp_norm(r.source, p)
        assert r.lp_norm(p) == pytest.approx(direct, rel=1e-12, abs=1e-12)
        assert r.gauss_lp_norm(p) == pytest.approx(direct, rel=1e-10, abs=1e-12)


@settings(max_examples=100, deadline=None)
@given(values, st.randoms(use_true_random=False))
def test_hardy_littlewood(v, rnd):
    u, iv = _samples(v)
    w = SampledFunction(u.grid, np.array([rnd.uniform(-5, 5) for _ in v]))
    low, high = rearrange.hardy_littlewood_gap(u, w, iv)
    assert low >= -1e-10 and high >= -1e-10


def test_hardy_littlewood_equality_for_comonotone():
    x = np.linspace(0, 1, 30)
    u = SampledFunction(x, x + 1)
    v = SampledFunction(x, 2 * x + 0.5)
    low, high = rearrange.hardy_littlewood_gap(u, v, Interval1D(0, 1))
    assert high == pytest.approx(0.0, abs=1e-14)
    assert low > 0
    with pytest.raises(DomainError):
        rearrange.hardy_littlewood_gap(u, SampledFunction(x[:-1], x[:-1]), Interval1D(0, 1))


@settings(max_examples=50, deadline=None)
@given(arrays(np.float64, st.integers(3, 60), elements=st.floats(0.0, 20.0)), st.floats(-3.0, 1.0), st.floats(0.3, 4.0))
def test_polya_szego(v, a, length):
    x = np.linspace(a, a + length, len(v) + 2)
    vals = np.concatenate([[0.0], v, [0.0]])
    gap = rearrange.polya_szego_gap(SampledFunction(x, vals), Interval1D(x[0], x[-1]))
    assert gap >= -1e-8


def test_polya_szego_half_line_equality():
    # increasing from zero on a right half-line: its own rearrangement
    x = np.linspace(0.3, 6.0, 400)
    u = SampledFunction(x, (x - 0.3) ** 2)
    e, e_star = rearrange.dirichlet_energies(u, Interval1D(0.3, math.inf))
    assert e_star == pytest.approx(e, rel=1e-6)


def test_polya_szego_preconditions():
    x = np.linspace(0, 1, 5)
    with pytest.raises(PreconditionError):
        rearrange.dirichlet_energies(SampledFunction(x, x - 0.5), Interval1D(0, 1))
    with pytest.raises(PreconditionError):
        rearrange.dirichlet_energies(SampledFunction(x, x + 1), Interval1D(0, 1))
    assert rearrange.dirichlet_energies(SampledFunction(x, 0 * x), Interval1D(0, 1)) == (0.0, 0.0)
