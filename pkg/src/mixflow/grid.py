"""Uniform periodic grids and central-difference stencils.

Fields carry any number of leading component axes followed by ``dim``
spatial axes. Derivatives act on the spatial axes only.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class Grid:
    dim: int
    N: tuple
    L: tuple

    def __post_init__(self):
        if self.dim not in (1, 2, 3):
            raise ValueError("dim must be 1, 2 or 3")
        N = tuple(int(v) for v in np.broadcast_to(self.N, (self.dim,)))
        L = tuple(float(v) for v in np.broadcast_to(self.L, (self.dim,)))
        if any(n < 4 for n in N):
            raise ValueError("need at least 4 points per axis for the stencils")
        if any(not l > 0 for l in L):
            raise ValueError("periods must be positive")
        object.__setattr__(self, "N", N)
        object.__setattr__(self, "L", L)

    @property
    def h(self) -> tuple:
        return tuple(l / n for l, n in zip(self.L, self.N))

    @property
    def shape(self) -> tuple:
        return self.N

    @property
    def cell_volume(self) -> float:
        return float(np.prod(self.h))

    @property
    def volume(self) -> float:
        return float(np.prod(self.L))

    def coordinates(self) -> list:
        """Meshgrid of node coordinates, x_i = i h."""
        axes = [np.arange(n) * h for n, h in zip(self.N, self.h)]
        return np.meshgrid(*axes, indexing="ij")

    def integrate(self, f) -> np.ndarray:
        """Sum over the spatial axes times the cell volume (exact for periodic trig)."""
        f = np.asarray(f)
        axes = tuple(range(f.ndim - self.dim, f.ndim))
        return f.sum(axis=axes) * self.cell_volume


def make_grid(dim, N, L) -> Grid:
    return Grid(dim, N, L)


def _check(f, grid):
    if f.shape[f.ndim - grid.dim:] != grid.shape:
        raise ValueError(f"field shape {f.shape} does not match grid {grid.shape}")


def _shift(f, ax, k):
    """f[i + k] along axis ``ax`` with periodic wraparound."""
    return np.roll(f, -k, ax)


def derivative(f, grid: Grid, axis: int, order: int = 2) -> np.ndarray:
    f = np.asarray(f)
    _check(f, grid)
    ax = f.ndim - grid.dim + axis
    h = grid.h[axis]
    if order == 2:
        # interior by slicing, the two wrapped planes explicitly
        out = np.empty_like(f)
        lead = (slice(None),) * ax
        out[lead + (slice(1, -1),)] = f[lead + (slice(2, None),)] - f[lead + (slice(None, -2),)]
        out[lead + (0,)] = f[lead + (1,)] - f[lead + (-1,)]
        out[lead + (-1,)] = f[lead + (0,)] - f[lead + (-2,)]
        out *= 0.5 / h
        return out
    if order == 4:
        return (8.0 * (_shift(f, ax, 1) - _shift(f, ax, -1))
                - (_shift(f, ax, 2) - _shift(f, ax, -2))) * (1.0 / (12.0 * h))
    raise ValueError("stencil order must be 2 or 4")


def gradient(f, grid: Grid, order: int = 2) -> np.ndarray:
    """Gradient with the vector index inserted just before the spatial axes."""
    f = np.asarray(f)
    return np.stack([derivative(f, grid, a, order) for a in range(grid.dim)],
                    axis=f.ndim - grid.dim)


def divergence(v, grid: Grid, order: int = 2) -> np.ndarray:
    """Divergence over the vector axis sitting just before the spatial axes."""
    v = np.asarray(v)
    vax = v.ndim - grid.dim - 1
    if vax < 0 or v.shape[vax] != grid.dim:
        raise ValueError("vector field needs a component axis of length dim")
    out = derivative(np.take(v, 0, axis=vax), grid, 0, order)
    for a in range(1, grid.dim):
        out = out + derivative(np.take(v, a, axis=vax), grid, a, order)
    return out
