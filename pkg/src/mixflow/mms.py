"""Manufactured-solution convergence studies.

The manufactured fields and their forcing live in ``_mms_forcing``, which
is generated offline by ``scripts/generate_mms.py``. The solution is 1D with
two species and density in [1.8, 2.2], so configurations outside that
setting are rejected rather than silently given a wrong forcing.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _mms_forcing, thermo
from .fields import FieldSet, field_names
from .grid import Grid
from .solver import Solver
from .transport import LinearViscosity


def check_manufactured(solver: Solver):
    """Raise ValueError if the generated forcing does not apply to ``solver``."""
    spec, tr, kin = solver.mixture, solver.transport, solver.kinetics
    problems = []
    if solver.grid.dim != 1:
        problems.append("dimension must be 1")
    if abs(solver.grid.L[0] - 1.0) > 0:
        problems.append("period must be 1")
    if spec.n != 2:
        problems.append("exactly two species are required")
    if not isinstance(tr.viscosity, LinearViscosity):
        problems.append("viscosity must be the linear family")
    if tr.nu_constant is not None:
        problems.append("bulk viscosity must be coupled to mu")
    if kin.kind == "pairwise_exchange":
        if (kin.donor, kin.acceptor) != (0, 1):
            problems.append("exchange must run from species 0 to species 1")
        elif kin.rate * 0.7 > min(kin.omega_lower, kin.omega_upper):
            problems.append("rate clamp would be active")
    if problems:
        raise ValueError("manufactured solution rejected: " + "; ".join(problems))


def _params(solver: Solver) -> tuple:
    spec, tr = solver.mixture, solver.transport
    rate = solver.kinetics.rate if solver.kinetics.kind == "pairwise_exchange" else 0.0
    return (spec.c_v, spec.m[0], spec.m[1], spec.e_st[0], spec.e_st[1], spec.cold.c2,
            spec.cold.gamma_plus, tr.viscosity.mu0, tr.viscosity.mu1, tr.kappa0, tr.alpha,
            tr.d0, rate)


def exact_state(grid: Grid, spec: thermo.MixtureSpec, t: float) -> np.ndarray:
    """Packed conservative fields of the manufactured solution at time t."""
    (x,) = grid.coordinates()
    rho, u, theta, Y1 = _mms_forcing.primitives(x, t)
    Y = np.stack([Y1, 1.0 - Y1])
    e = (Y * spec.column("e_st", 1)).sum(axis=0) + spec.c_v * theta + thermo.cold_energy(rho, spec.cold)
    return FieldSet.from_parts(rho, (rho * u)[None], rho * (e + 0.5 * u * u), rho * Y).q


def make_forcing(solver: Solver):
    check_manufactured(solver)
    (x,) = solver.grid.coordinates()
    params = _params(solver)

    def forcing(t):
        return np.stack(_mms_forcing.forcing(x, t, *params))

    return forcing


def with_forcing(solver: Solver) -> Solver:
    return Solver(solver.grid, solver.mixture, solver.transport, solver.kinetics,
                  solver.order, solver.rho_floor, make_forcing(solver))


def integrate(solver: Solver, q, t_end: float, dt: float):
    """Fixed-step RK4 to exactly t_end; dt is shrunk to divide the interval."""
    steps = max(1, math.ceil(t_end / dt - 1e-12))
    dt = t_end / steps
    t = 0.0
    for i in range(steps):
        q = solver.step(q, t, dt)
        t = (i + 1) * dt
    return q, steps


def l2_norms(diff, grid: Grid) -> np.ndarray:
    """Per-row discrete L2 norm."""
    return np.sqrt(grid.integrate(diff * diff))


@dataclass
class OrderReport:
    kind: str
    levels: list
    errors: np.ndarray
    orders: np.ndarray
    names: list

    @property
    def min_order(self) -> float:
        return float(np.min(self.orders))

    def table(self) -> str:
        head = f"{self.kind:>10s} " + " ".join(f"{n:>12s}" for n in self.names)
        lines = [head]
        for lvl, err in zip(self.levels, self.errors):
            lines.append(f"{lvl:>10.4g} " + " ".join(f"{e:12.4e}" for e in err))
        for i, o in enumerate(self.orders):
            lines.append(f"{'order ' + str(i):>10s} " + " ".join(f"{v:12.3f}" for v in o))
        return "\n".join(lines)


def _orders(errors, ratios):
    errors = np.asarray(errors)
    return np.log(errors[:-1] / errors[1:]) / np.log(np.asarray(ratios))[:, None]


def spatial_study(base: Solver, Ns, t_end: float, cfl: float) -> OrderReport:
    """Errors against the exact solution on refined grids with a CFL-limited dt."""
    if len(Ns) < 3:
        raise ValueError("need >= 3 levels")
    errs = []
    for N in Ns:
        grid = Grid(1, (N,), base.grid.L)
        solver = with_forcing(Solver(grid, base.mixture, base.transport, base.kinetics,
                                     base.order, base.rho_floor))
        q0 = exact_state(grid, solver.mixture, 0.0)
        q, _ = integrate(solver, q0, t_end, solver.cfl_dt(q0, cfl))
        errs.append(l2_norms(q - exact_state(grid, solver.mixture, t_end), grid))
    ratios = [Ns[i + 1] / Ns[i] for i in range(len(Ns) - 1)]
    return OrderReport("N", list(Ns), np.array(errs), _orders(errs, ratios), field_names(1, 2))


def temporal_study(base: Solver, N: int, dts, t_end: float) -> OrderReport:
    """Richardson differences on one grid: |q_dt - q_dt/2| against |q_dt/2 - q_dt/4|.

    Explicit diffusion ties dt to h^2, so the error against the exact
    solution is dominated by the spatial part; successive time-step
    differences isolate the integrator error instead.
    """
    if len(dts) < 3:
        raise ValueError("need >= 3 levels")
    grid = Grid(1, (N,), base.grid.L)
    solver = with_forcing(Solver(grid, base.mixture, base.transport, base.kinetics,
                                 base.order, base.rho_floor))
    q0 = exact_state(grid, solver.mixture, 0.0)
    finals = [integrate(solver, q0, t_end, dt)[0] for dt in dts]
    diffs = [l2_norms(finals[i] - finals[i + 1], grid) for i in range(len(finals) - 1)]
    ratios = [dts[i] / dts[i + 1] for i in range(len(dts) - 2)]
    return OrderReport("dt", list(dts[:-1]), np.array(diffs), _orders(diffs, ratios),
                       field_names(1, 2))
