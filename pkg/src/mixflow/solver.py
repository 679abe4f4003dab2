"""Method-of-lines discretization of the reacting Navier-Stokes-Fourier system.

The conservative unknowns (rho, rho u, rho E, rho_k) are evolved with
central differences on a periodic grid and classical RK4 in time. Viscous,
heat and diffusive fluxes are formed pointwise from first derivatives and
then differentiated again, so every flux stays available to diagnostics.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from types import SimpleNamespace
from typing import Callable, Optional

import numpy as np

from . import thermo, transport
from .fields import FieldSet
from .grid import Grid, derivative, gradient
from .kinetics import KineticsSpec, production_rates
from .thermo import MixtureSpec
from .transport import TransportSpec


class PositivityLossError(RuntimeError):
    """Density or temperature left the admissible range during a run."""

    def __init__(self, quantity: str, value: float, index: tuple):
        self.quantity = quantity
        self.value = value
        self.index = index
        super().__init__(f"{quantity} = {value:.6g} at grid index {index}")


def primitive_recovery(fs: FieldSet, spec: MixtureSpec, rho_floor: float = 1e-10):
    """Invert the conservative fields for (u, theta, Y, e).

    Exact, since the internal energy is affine in the temperature.
    """
    rho = fs.rho
    if np.any(rho <= rho_floor):
        idx = np.unravel_index(np.argmin(rho), rho.shape)
        raise PositivityLossError("density", float(rho[idx]), idx)
    u = fs.mom / rho
    Y = fs.rhok / rho
    e = fs.rhoE / rho - 0.5 * (u * u).sum(axis=0)
    e_form = (Y * spec.column("e_st", rho.ndim)).sum(axis=0)
    theta = (e - e_form - thermo.cold_energy(rho, spec.cold)) / spec.c_v
    if np.any(theta <= 0):
        idx = np.unravel_index(np.argmin(theta), theta.shape)
        raise PositivityLossError("temperature", float(theta[idx]), idx)
    return SimpleNamespace(u=u, theta=theta, Y=Y, e=e)


def stress_tensor(grad_u, mu_val, nu_val) -> np.ndarray:
    """2 mu D(u) + nu div(u) I with grad_u[i, j] = d u_i / d x_j."""
    grad_u = np.asarray(grad_u, dtype=float)
    d = grad_u.shape[0]
    S = mu_val * (grad_u + np.swapaxes(grad_u, 0, 1))
    div_u = np.trace(grad_u, axis1=0, axis2=1)
    for i in range(d):
        S[i, i] = S[i, i] + nu_val * div_u
    return S


@dataclass
class Solver:
    grid: Grid
    mixture: MixtureSpec
    transport: TransportSpec = field(default_factory=TransportSpec)
    kinetics: KineticsSpec = field(default_factory=KineticsSpec)
    order: int = 2
    rho_floor: float = 1e-10
    # optional manufactured forcing f(t) -> array shaped like the packed fields
    forcing: Optional[Callable] = None

    def __post_init__(self):
        d = self.grid.dim
        self._m_col = self.mixture.column("m", d)
        self._e_col = self.mixture.column("e_st", d)
        self._cp_col = self.mixture.column("c_p", d)

    @property
    def nvar(self) -> int:
        return 2 + self.grid.dim + self.mixture.n

    def fieldset(self, q) -> FieldSet:
        return FieldSet(q, self.grid.dim, self.mixture.n)

    def evaluate(self, q) -> SimpleNamespace:
        """Every pointwise quantity the right-hand side and diagnostics need."""
        grid, spec, tr = self.grid, self.mixture, self.transport
        d, n = grid.dim, spec.n
        fs = self.fieldset(q)
        prim = primitive_recovery(fs, spec, self.rho_floor)
        rho, u, theta, Y = fs.rho, prim.u, prim.theta, prim.Y
        p = theta * fs.rhok / self._m_col
        pi_m = p.sum(axis=0)
        pi_c = thermo.cold_pressure(rho, spec.cold)
        pi = pi_m + pi_c

        G = gradient(np.concatenate([u, theta[None], p]), grid, self.order)
        grad_u = G[:d]
        grad_theta = G[d]
        grad_p = G[d + 1:]
        grad_pi_m = grad_p.sum(axis=0)

        mu_val = tr.viscosity.mu(rho)
        nu_val = transport._nu(rho, tr)
        S = stress_tensor(grad_u, mu_val, nu_val)
        kap = transport._kappa(rho, theta, tr)
        c0 = transport._diffusion_scalar(rho, theta, tr)
        F = -(c0 / pi_m) * (grad_p - Y[:, None] * grad_pi_m[None])
        h = self._e_col + self._cp_col * theta
        Q = (h[:, None] * F).sum(axis=0) - kap * grad_theta
        omega = production_rates(Y, self.kinetics, check=False)
        return SimpleNamespace(
            fs=fs, rho=rho, u=u, theta=theta, Y=Y, e=prim.e, p=p, pi_m=pi_m, pi_c=pi_c,
            pi=pi, grad_u=grad_u, grad_theta=grad_theta, grad_p=grad_p, grad_pi_m=grad_pi_m,
            mu=mu_val, nu=nu_val, S=S, kappa=kap, c0=c0, F=F, Q=Q, h=h, omega=omega,
        )

    def fluxes(self, ev) -> list:
        """Physical flux along each axis, packed like the unknowns."""
        d = self.grid.dim
        fs = ev.fs
        out = []
        for j in range(d):
            f = np.empty_like(fs.q)
            uj = ev.u[j]
            f[0] = fs.mom[j]
            for i in range(d):
                f[1 + i] = fs.mom[i] * uj - ev.S[i, j]
            f[1 + j] += ev.pi
            work = ev.S[0, j] * ev.u[0]
            for i in range(1, d):
                work = work + ev.S[i, j] * ev.u[i]
            f[1 + d] = (fs.rhoE + ev.pi) * uj + ev.Q[j] - work
            f[2 + d:] = fs.rhok * uj + ev.F[:, j]
            out.append(f)
        return out

    def rhs(self, q, t: float = 0.0) -> np.ndarray:
        ev = self.evaluate(q)
        flux = self.fluxes(ev)
        dq = -derivative(flux[0], self.grid, 0, self.order)
        for j in range(1, self.grid.dim):
            dq -= derivative(flux[j], self.grid, j, self.order)
        if self.kinetics.kind != "null":
            dq[2 + self.grid.dim:] += ev.rho * ev.theta * ev.omega
        if self.forcing is not None:
            dq += self.forcing(t)
        return dq

    def cfl_dt(self, q, cfl: float) -> float:
        if not 0 < cfl <= 1:
            raise ValueError("cfl must lie in (0, 1]")
        if not np.all(np.isfinite(q)):
            raise ValueError("state is not finite")
        grid, spec, tr = self.grid, self.mixture, self.transport
        fs = self.fieldset(q)
        prim = primitive_recovery(fs, spec, self.rho_floor)
        rho, theta = fs.rho, prim.theta
        cs = np.sqrt(thermo.sound_speed_squared(rho, theta, prim.Y, spec))
        kap = transport.kappa(rho, theta, tr)
        c0 = transport.diffusion_scalar(rho, theta, tr)
        pi_m = (theta * fs.rhok / spec.column("m", grid.dim)).sum(axis=0)
        max_pk_over_rhok = theta / min(spec.m)
        visc = 2.0 * tr.viscosity.mu(rho) + np.abs(transport.nu(rho, tr))
        with np.errstate(divide="ignore"):
            diff_rate = np.max(np.maximum.reduce([
                kap / (rho * spec.c_v),
                c0 * max_pk_over_rhok / pi_m,
                visc / rho,
            ]))
            candidates = [np.min(h / (np.abs(prim.u[a]) + cs)) for a, h in enumerate(grid.h)]
            candidates.append(min(grid.h) ** 2 / diff_rate)
        dt = cfl * float(min(candidates))
        if not (np.isfinite(dt) and dt > 0):
            raise ValueError("time step is not positive and finite")
        return dt

    def step(self, q, t: float, dt: float) -> np.ndarray:
        """One classical RK4 step; raises before touching ``q`` on positivity loss."""
        if not dt > 0:
            raise ValueError("dt must be positive")
        k1 = self.rhs(q, t)
        k2 = self.rhs(q + (0.5 * dt) * k1, t + 0.5 * dt)
        k3 = self.rhs(q + (0.5 * dt) * k2, t + 0.5 * dt)
        k4 = self.rhs(q + dt * k3, t + dt)
        return q + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def step_rk4(fs: FieldSet, dt: float, solver: Solver, t: float = 0.0) -> FieldSet:
    return FieldSet(solver.step(fs.q, t, dt), fs.dim, fs.n)
