"""Problem setup: solver construction and the built-in initial conditions."""
from __future__ import annotations

import numpy as np

from . import mms, thermo
from .config import RunConfig
from .diagnostics import bd_functional, conserved_totals, recover_temperature
from .fields import FieldSet
from .grid import Grid
from .solver import Solver
from .thermo import MixtureSpec


class InitialConditionError(ValueError):
    pass


def build_solver(cfg: RunConfig, grid: Grid | None = None) -> Solver:
    grid = cfg.make_grid() if grid is None else grid
    solver = Solver(grid, cfg.mixture_spec(), cfg.transport_spec(), cfg.kinetics_spec(),
                    order=cfg.grid.order, rho_floor=cfg.run.rho_floor)
    if cfg.initial.kind == "manufactured":
        solver = mms.with_forcing(solver)
    return solver


def conservative_from_primitives(rho, u, theta, Y, spec: MixtureSpec) -> FieldSet:
    rho = np.asarray(rho, dtype=float)
    u = np.asarray(u, dtype=float)
    Y = np.asarray(Y, dtype=float)
    e = ((Y * spec.column("e_st", rho.ndim)).sum(axis=0) + spec.c_v * theta
         + thermo.cold_energy(rho, spec.cold))
    return FieldSet.from_parts(rho, rho * u, rho * (e + 0.5 * (u * u).sum(axis=0)), rho * Y)


def _phases(cfg: RunConfig, count: int) -> np.ndarray:
    if not cfg.initial.random_phases:
        return np.zeros(count)
    return np.random.default_rng(cfg.run.seed).uniform(0.0, 2.0 * np.pi, count)


def _wave(grid: Grid, mode: int, phases) -> np.ndarray:
    """Mean over axes of sin(2 pi mode x_a / L_a + phase_a), bounded by 1."""
    xs = grid.coordinates()
    out = np.zeros(grid.shape)
    for a, x in enumerate(xs):
        out += np.sin(2.0 * np.pi * mode * x / grid.L[a] + phases[a])
    return out / grid.dim


def perturbed(cfg: RunConfig, grid: Grid, spec: MixtureSpec) -> FieldSet:
    """Uniform state plus sinusoidal perturbations of rho, theta, u and Y.

    The Y perturbation moves mass from the last species to the first, so
    the fractions keep summing to one.
    """
    ic, d = cfg.initial, grid.dim
    ph = _phases(cfg, 4 * d).reshape(4, d)
    rho = ic.rho0 * (1.0 + ic.amp_rho * _wave(grid, ic.mode, ph[0]))
    theta = ic.theta0 * (1.0 + ic.amp_theta * _wave(grid, ic.mode, ph[1] + 0.5 * np.pi))
    u0 = np.broadcast_to(np.asarray(ic.u0, dtype=float), (d,))
    u = np.stack([u0[a] + ic.amp_u * _wave(grid, ic.mode, ph[2] + 0.25 * np.pi * (a + 1))
                  for a in range(d)])
    Y = np.stack([np.full(grid.shape, float(y)) for y in ic.Y0])
    dY = ic.amp_Y * _wave(grid, ic.mode, ph[3] + 0.3)
    Y[0] += dY
    Y[-1] -= dY
    return conservative_from_primitives(rho, u, theta, Y, spec)


def mixing_layer(cfg: RunConfig, grid: Grid, spec: MixtureSpec) -> FieldSet:
    """Smooth periodic band of species 0 between x = L/4 and x = 3L/4 on axis 0.

    The remaining mass is split over the other species in proportion to Y0.
    Density, temperature and velocity carry the same perturbations as the
    perturbed state.
    """
    ic = cfg.initial
    x = grid.coordinates()[0]
    L, w = grid.L[0], ic.layer_width * grid.L[0]
    band = 0.5 * (np.tanh((x - 0.25 * L) / w) - np.tanh((x - 0.75 * L) / w))
    Y1 = ic.Y_low + (ic.Y_high - ic.Y_low) * band
    base = perturbed(cfg, grid, spec)
    rest = np.asarray(ic.Y0[1:], dtype=float)
    rest = rest / rest.sum() if rest.sum() > 0 else np.full(len(rest), 1.0 / len(rest))
    Y = np.concatenate([Y1[None], (1.0 - Y1)[None] * rest.reshape((-1,) + (1,) * grid.dim)])
    rho = base.rho
    prim = np.asarray(base.mom) / rho
    theta = recover_temperature(base, spec)
    return conservative_from_primitives(rho, prim, theta, Y, spec)


def manufactured(cfg: RunConfig, grid: Grid, spec: MixtureSpec) -> FieldSet:
    solver = Solver(grid, spec, cfg.transport_spec(), cfg.kinetics_spec())
    try:
        mms.check_manufactured(solver)
    except ValueError as exc:
        raise InitialConditionError(str(exc)) from None
    return FieldSet(mms.exact_state(grid, spec, 0.0), grid.dim, spec.n)


BUILDERS = {"perturbed": perturbed, "mixing_layer": mixing_layer, "manufactured": manufactured}


def check_initial(fs: FieldSet, grid: Grid, spec: MixtureSpec, cfg: RunConfig) -> dict:
    """Pointwise admissibility and the finite initial functionals."""
    if not np.all(np.isfinite(fs.q)):
        raise InitialConditionError("initial state is not finite")
    if np.any(fs.rho <= 0):
        raise InitialConditionError("initial density must be positive (vacuum is not supported)")
    Y = fs.rhok / fs.rho
    if np.any(fs.rhok < 0):
        k = int(np.argmin(fs.rhok.reshape(spec.n, -1).min(axis=1)))
        raise InitialConditionError(f"initial mass fraction of species {k} is negative")
    if np.any(np.abs(Y.sum(axis=0) - 1.0) > 1e-12):
        raise InitialConditionError("initial mass fractions do not sum to one")
    theta = recover_temperature(fs, spec)
    if np.any(theta <= 0):
        raise InitialConditionError("initial temperature must be positive")
    mass, _, energy, _ = conserved_totals(fs, grid, spec)
    bd = bd_functional(fs, grid, cfg.transport_spec(), cfg.grid.order)
    report = {"initial_mass": mass, "initial_energy": energy, "initial_bd_functional": bd}
    if not all(np.isfinite(v) for v in report.values()):
        raise InitialConditionError("initial mass, energy or BD functional is not finite")
    return report


def make_initial_condition(cfg: RunConfig, grid: Grid | None = None,
                           spec: MixtureSpec | None = None) -> FieldSet:
    grid = cfg.make_grid() if grid is None else grid
    spec = cfg.mixture_spec() if spec is None else spec
    try:
        fs = BUILDERS[cfg.initial.kind](cfg, grid, spec)
    except thermo.ThermoDomainError as exc:
        raise InitialConditionError(f"initial state: {exc}") from None
    check_initial(fs, grid, spec, cfg)
    return fs
