import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mixflow.grid import Grid, derivative, divergence, gradient, make_grid


def test_spacing():
    assert make_grid(1, 8, 1.0).h == (0.125,)
    assert make_grid(2, (4, 8), (1, 2)).h == (0.25, 0.25)
    g = make_grid(3, 4, 2.0)
    assert g.shape == (4, 4, 4) and g.volume == 8.0


def test_invalid_sizes():
    with pytest.raises(ValueError):
        make_grid(1, 3, 1.0)
    with pytest.raises(ValueError):
        make_grid(4, 8, 1.0)
    with pytest.raises(ValueError):
        make_grid(1, 8, -1.0)


@pytest.mark.parametrize("order", [2, 4])
def test_constant_gradient_exact(order):
    g = make_grid(2, (8, 16), (1.0, 3.0))
    grad = gradient(np.full(g.shape, 3.7), g, order)
    assert np.all(grad == 0.0)


def test_size_mismatch():
    g = make_grid(1, 8, 1.0)
    with pytest.raises(ValueError):
        gradient(np.zeros(9), g)


@pytest.mark.parametrize("order,expected", [(2, 2.0), (4, 4.0)])
def test_sine_derivative_order(order, expected):
    L = 2.0
    errs = []
    for N in (32, 64, 128):
        g = make_grid(1, N, L)
        (x,) = g.coordinates()
        d = derivative(np.sin(2 * np.pi * x / L), g, 0, order)
        errs.append(np.abs(d - 2 * np.pi / L * np.cos(2 * np.pi * x / L)).max())
    orders = np.log2(np.array(errs[:-1]) / np.array(errs[1:]))
    assert np.all(orders >= expected - 0.1)


@settings(max_examples=25)
@given(st.integers(0, 2 ** 32 - 1), st.sampled_from([2, 4]))
def test_discrete_divergence_sums_to_zero(seed, order):
    g = make_grid(2, (8, 12), (1.0, 2.0))
    v = np.random.default_rng(seed).normal(size=(2,) + g.shape)
    assert abs(g.integrate(divergence(v, g, order))) < 1e-12


@settings(max_examples=25)
@given(st.integers(0, 2 ** 32 - 1))
def test_summation_by_parts(seed):
    g = make_grid(1, 16, 1.0)
    rng = np.random.default_rng(seed)
    f, w = rng.normal(size=(2, 16))
    lhs = g.integrate(w * derivative(f, g, 0))
    rhs = -g.integrate(f * derivative(w, g, 0))
    assert lhs == pytest.approx(rhs, abs=1e-12)


def test_div_grad_is_laplacian_in_2d():
    g = make_grid(2, (64, 64), (1.0, 1.0))
    x, y = g.coordinates()
    f = np.sin(2 * np.pi * x) * np.cos(4 * np.pi * y)
    lap = divergence(gradient(f, g, 4), g, 4)
    np.testing.assert_allclose(lap, -20 * np.pi ** 2 * f, atol=0.2)
