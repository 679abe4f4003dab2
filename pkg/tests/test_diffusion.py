import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from mixflow import diffusion
from mixflow.diffusion import DiffusionInputs, SingularStateError


def random_inputs(rng, n, d, points):
    """Consistent random pointwise states, species on axis 0."""
    Y = rng.dirichlet(np.ones(n), size=points).T
    rho = rng.uniform(0.1, 10.0, points)
    theta = rng.uniform(0.1, 10.0, points)
    m = rng.uniform(0.5, 3.0, n)[:, None]
    p = theta * rho * Y / m
    pi_m = p.sum(axis=0)
    grad_p = rng.normal(size=(n, d, points)) * pi_m
    return DiffusionInputs(
        Y=Y, partial_pressures=p, grad_partial_pressures=grad_p, pi_m=pi_m,
        grad_pi_m=grad_p.sum(axis=0), grad_theta=rng.normal(size=(d, points)),
        enthalpies=rng.uniform(0.5, 5.0, (n, points)), c0=rng.uniform(0.1, 2.0, points),
        kappa_val=rng.uniform(0.1, 2.0, points),
    ), rho, theta


def test_flux_matrix_examples():
    C = diffusion.flux_matrix(np.array([0.3, 0.7]))
    np.testing.assert_allclose(C, [[0.7, -0.3], [-0.7, 0.3]], rtol=1e-15)
    np.testing.assert_allclose(C @ [0.3, 0.7], 0.0, atol=1e-16)
    Y3 = np.array([0.2, 0.3, 0.5])
    np.testing.assert_allclose(diffusion.flux_matrix(Y3) @ Y3, 0.0, atol=1e-16)
    np.testing.assert_array_equal(diffusion.flux_matrix(np.array([1.0])), [[0.0]])


def test_flux_matrix_rejects_unnormalized():
    with pytest.raises(ValueError):
        diffusion.flux_matrix(np.array([0.3, 0.6]))


@given(st.integers(1, 6), st.integers(0, 2 ** 32 - 1))
def test_identity_on_zero_sum_vectors(n, seed):
    rng = np.random.default_rng(seed)
    Y = rng.dirichlet(np.ones(n))
    v = rng.normal(size=n)
    v -= v.mean()
    np.testing.assert_allclose(diffusion.flux_matrix(Y) @ v, v, atol=1e-14 * (1 + np.abs(v).max()))


def test_forces_examples():
    a = 0.7
    inp = DiffusionInputs(
        Y=np.array([0.5, 0.5]), partial_pressures=np.array([0.5, 0.5]),
        grad_partial_pressures=np.array([[a], [-a]]), pi_m=np.array(1.0),
        grad_pi_m=np.array([0.0]), grad_theta=np.array([0.0]), enthalpies=np.array([2.0, 3.0]),
        c0=np.array(1.0), kappa_val=np.array(0.0),
    ).check()
    np.testing.assert_allclose(diffusion.diffusion_forces(inp), [[a], [-a]])
    F = diffusion.species_fluxes(inp)
    np.testing.assert_allclose(F, [[-a], [a]])
    # h = (2, 3), F = (-a, a), kappa = 0 -> Q = a
    np.testing.assert_allclose(diffusion.heat_flux(inp, F), [a])


def test_mechanical_equilibrium_and_homogeneous(rng):
    inp, _, _ = random_inputs(rng, 3, 2, 5)
    inp.grad_partial_pressures = inp.Y[:, None] * inp.grad_pi_m[None]
    np.testing.assert_allclose(diffusion.diffusion_forces(inp), 0.0, atol=1e-14)
    inp.grad_partial_pressures = np.zeros_like(inp.grad_partial_pressures)
    inp.grad_pi_m = np.zeros_like(inp.grad_pi_m)
    assert np.all(diffusion.species_fluxes(inp) == 0.0)


def test_pure_fourier():
    inp = DiffusionInputs(np.array([1.0]), np.array([1.0]), np.zeros((1, 2)), np.array(1.0),
                          np.zeros(2), np.array([1.0, 0.0]), np.array([1.0]), np.array(1.0),
                          np.array(4.0))
    np.testing.assert_allclose(diffusion.heat_flux(inp, np.zeros((1, 2))), [-4.0, 0.0])


def test_singular_state():
    inp = DiffusionInputs(np.array([1.0]), np.array([0.0]), np.zeros((1, 1)), np.array(0.0),
                          np.zeros(1), np.zeros(1), np.ones(1), np.array(1.0), np.array(1.0))
    with pytest.raises(SingularStateError):
        diffusion.species_fluxes(inp)
    with pytest.raises(SingularStateError):
        inp.check()


@settings(max_examples=50)
@given(st.integers(1, 5), st.integers(1, 3), st.integers(0, 2 ** 32 - 1))
def test_flux_properties(n, d, seed):
    inp, rho, theta = random_inputs(np.random.default_rng(seed), n, d, 16)
    inp.check()
    F = diffusion.species_fluxes(inp)
    # natural flux scale C0 |grad p| / pi_m; F itself vanishes identically when n = 1
    scale = inp.c0 * np.abs(inp.grad_partial_pressures).max(axis=0) / inp.pi_m
    assert np.all(np.abs(F.sum(axis=0)) <= 1e-13 * scale + 1e-300)
    Fm = diffusion.species_fluxes_matrix(inp)
    assert np.all(np.abs(Fm - F) <= 1e-13 * scale + 1e-300)
    dk = diffusion.diffusion_forces(inp)
    assert np.all(np.abs(dk.sum(axis=0)) <= 1e-13 * scale * inp.pi_m / inp.c0)
    sig, vac = diffusion.entropy_dissipation(inp, F, rho, theta)
    assert np.all(sig >= 0) and not vac.any()
    alt = diffusion.entropy_dissipation_force_form(inp, F, rho, theta)
    np.testing.assert_allclose(alt, sig, rtol=1e-12)


@given(st.floats(1e-3, 1e3), st.integers(0, 2 ** 32 - 1))
def test_forces_homogeneous_degree_zero(lam, seed):
    inp, _, _ = random_inputs(np.random.default_rng(seed), 3, 2, 4)
    d1 = diffusion.diffusion_forces(inp)
    inp.partial_pressures = inp.partial_pressures * lam
    inp.grad_partial_pressures = inp.grad_partial_pressures * lam
    inp.pi_m = inp.pi_m * lam
    inp.grad_pi_m = inp.grad_pi_m * lam
    np.testing.assert_allclose(diffusion.diffusion_forces(inp), d1, rtol=1e-12, atol=1e-14)


def test_vacuum_species_excluded_and_flagged(rng):
    inp, rho, theta = random_inputs(rng, 3, 1, 4)
    Y = inp.Y.copy()
    Y[2, 0] = 0.0
    Y[:, 0] /= Y[:, 0].sum()
    inp.Y = Y
    F = diffusion.species_fluxes(inp)
    sig, vac = diffusion.entropy_dissipation(inp, F, rho, theta)
    assert vac.tolist() == [True, False, False, False]
    assert np.all(np.isfinite(sig))


def test_pressure_gradient_decomposition(rng):
    n, d, pts = 3, 2, 50
    Y = rng.dirichlet(np.ones(n), size=pts).T
    m = np.array([1.0, 2.0, 3.5])
    rho = rng.uniform(0.5, 2.0, pts)
    theta = rng.uniform(0.5, 2.0, pts)
    grad_rho = rng.normal(size=(d, pts))
    grad_theta = rng.normal(size=(d, pts))
    grad_Y = rng.normal(size=(n, d, pts))
    grad_Y -= grad_Y.mean(axis=0)
    # p_k = theta rho Y_k / m_k, so m_k p_k sums to rho theta
    grad_p = ((theta * rho)[None, None] * grad_Y
              + Y[:, None] * (theta * grad_rho + rho * grad_theta)[None]) / m[:, None, None]
    grad_rho_theta = theta * grad_rho + rho * grad_theta
    projected, mult = diffusion.pressure_gradient_decomposition(grad_p, Y, m, grad_rho_theta)
    recon = projected + Y[:, None] * mult[None]
    np.testing.assert_allclose(recon, grad_p, rtol=1e-12, atol=1e-12 * np.abs(grad_p).max())
    np.testing.assert_allclose(mult, grad_p.sum(axis=0), rtol=1e-12, atol=1e-12)
