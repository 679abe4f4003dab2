"""Pointwise multicomponent diffusion algebra.

Layout: species on axis 0, vector components on axis 1 of every gradient,
so ``grad_p[k, i]`` is the i-th component of the gradient of ``p_k``. Any
trailing axes are grid points.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class SingularStateError(ValueError):
    """Molecular pressure vanished where a division by it is required."""


@dataclass
class DiffusionInputs:
    Y: np.ndarray
    partial_pressures: np.ndarray
    grad_partial_pressures: np.ndarray
    pi_m: np.ndarray
    grad_pi_m: np.ndarray
    grad_theta: np.ndarray
    enthalpies: np.ndarray
    c0: np.ndarray
    kappa_val: np.ndarray

    def check(self, rtol: float = 1e-12):
        pi_m = np.asarray(self.pi_m)
        if np.any(pi_m <= 0):
            raise SingularStateError("molecular pressure must be positive")
        if np.any(np.abs(self.partial_pressures.sum(axis=0) - pi_m) > rtol * np.abs(pi_m)):
            raise ValueError("partial pressures do not sum to the molecular pressure")
        gsum = self.grad_partial_pressures.sum(axis=0)
        scale = np.maximum(np.abs(self.grad_partial_pressures).sum(axis=0), np.finfo(float).tiny)
        if np.any(np.abs(gsum - self.grad_pi_m) > rtol * scale):
            raise ValueError("partial pressure gradients do not sum to grad pi_m")
        return self


def flux_matrix(Y) -> np.ndarray:
    """Prototype diffusion matrix: Z_k on the diagonal, -Y_k across row k.

    ``Y`` may carry trailing grid axes; the result then has shape (n, n, ...).
    """
    Y = np.asarray(Y, dtype=float)
    if np.any(np.abs(Y.sum(axis=0) - 1.0) > 1e-10):
        raise ValueError("mass fractions must sum to one")
    n = Y.shape[0]
    C = np.empty((n, n) + Y.shape[1:])
    for k in range(n):
        C[k] = -Y[k]
        C[k, k] = sum(Y[i] for i in range(n) if i != k) if n > 1 else 0.0 * Y[k]
    return C


def apply_flux_matrix(C, v) -> np.ndarray:
    """(C v)_k = sum_l C_kl v_l, with v of shape (n, ...) or (n, d, ...)."""
    C = np.asarray(C)
    v = np.asarray(v)
    extra = v.ndim - (C.ndim - 1)
    Cb = C.reshape(C.shape[:2] + (1,) * extra + C.shape[2:])
    return (Cb * v[None]).sum(axis=1)


def _pi_m_checked(pi_m):
    pi_m = np.asarray(pi_m, dtype=float)
    if np.any(pi_m <= 0):
        raise SingularStateError("molecular pressure must be positive")
    return pi_m


def diffusion_forces(inp: DiffusionInputs) -> np.ndarray:
    """d_k = (grad p_k - Y_k grad pi_m) / pi_m."""
    pi_m = _pi_m_checked(inp.pi_m)
    Y = np.asarray(inp.Y)[:, None]
    return (inp.grad_partial_pressures - Y * inp.grad_pi_m[None]) / pi_m


def species_fluxes(inp: DiffusionInputs) -> np.ndarray:
    return -np.asarray(inp.c0) * diffusion_forces(inp)


def species_fluxes_matrix(inp: DiffusionInputs) -> np.ndarray:
    """Same fluxes through -(C0/pi_m) C grad p; kept as an independent route."""
    pi_m = _pi_m_checked(inp.pi_m)
    C = flux_matrix(inp.Y)
    return -(np.asarray(inp.c0) / pi_m) * apply_flux_matrix(C, inp.grad_partial_pressures)


def heat_flux(inp: DiffusionInputs, fluxes) -> np.ndarray:
    h = np.asarray(inp.enthalpies)[:, None]
    return (h * fluxes).sum(axis=0) - np.asarray(inp.kappa_val) * inp.grad_theta


def entropy_dissipation(inp: DiffusionInputs, fluxes, rho, theta):
    """sum_k pi_m |F_k|^2 / (C0 theta rho_k), skipping absent species.

    Returns the dissipation and a boolean mask of points where some species
    was absent (and therefore excluded).
    """
    rhok = rho * np.asarray(inp.Y)
    present = rhok > 0
    denom = np.where(present, np.asarray(inp.c0) * theta * rhok, 1.0)
    terms = np.where(present, inp.pi_m * (fluxes ** 2).sum(axis=1) / denom, 0.0)
    return terms.sum(axis=0), ~present.all(axis=0)


def entropy_dissipation_force_form(inp: DiffusionInputs, fluxes, rho, theta):
    """-sum_k F_k . (grad p_k - Y_k grad pi_m) / (theta rho Y_k), absent species skipped."""
    Y = np.asarray(inp.Y)
    present = Y > 0
    drive = inp.grad_partial_pressures - Y[:, None] * inp.grad_pi_m[None]
    denom = np.where(present, theta * rho * Y, 1.0)
    terms = np.where(present, -(fluxes * drive).sum(axis=1) / denom, 0.0)
    return terms.sum(axis=0)


def pressure_gradient_decomposition(grad_p, Y, m, grad_rho_theta):
    """Split grad p into C grad p plus a multiple of Y.

    Uses sum_k m_k p_k = rho theta to recover the multiplier without
    reference to grad pi_m. Returns (projected, multiplier).
    """
    Y = np.asarray(Y, dtype=float)
    m = np.asarray(m, dtype=float).reshape((-1,) + (1,) * (Y.ndim - 1))
    projected = apply_flux_matrix(flux_matrix(Y), grad_p)
    weight = (m * Y).sum(axis=0)
    multiplier = (grad_rho_theta - (m[:, None] * projected).sum(axis=0)) / weight
    return projected, multiplier
