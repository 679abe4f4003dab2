"""Thermodynamic state functions of the reacting gas mixture.

All functions accept scalars or numpy arrays. Mass fractions are stacked
along the leading axis, so ``Y[k]`` is the field of species ``k``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


class ThermoDomainError(ValueError):
    """A state function was evaluated outside its domain."""


@dataclass(frozen=True)
class ColdPressureParams:
    c1: float = 1.0
    c2: float = 1.0
    gamma_minus: float = 2.0
    gamma_plus: float = 2.0

    def __post_init__(self):
        if not (self.c1 > 0 and self.c2 > 0):
            raise ValueError("cold pressure coefficients c1, c2 must be positive")
        if not self.gamma_minus > 1:
            raise ValueError("gamma_minus must exceed 1")
        if not self.gamma_plus > 1:
            raise ValueError("gamma_plus must exceed 1")


@dataclass(frozen=True)
class MixtureSpec:
    """Immutable chemical description of an n-species mixture.

    ``m`` are molar masses, ``e_st``/``s_st`` formation energies and
    entropies, ``c_v`` the heat capacity shared by every species. The gas
    constant is absorbed into ``m``.
    """

    m: tuple
    e_st: tuple = None
    s_st: tuple = None
    c_v: float = 1.0
    cold: ColdPressureParams = field(default_factory=ColdPressureParams)

    def __post_init__(self):
        m = tuple(float(v) for v in np.atleast_1d(self.m))
        n = len(m)
        if n < 1:
            raise ValueError("mixture needs at least one species")
        if any(not mk > 0 for mk in m):
            raise ValueError("molar masses must be positive")
        e_st = (0.0,) * n if self.e_st is None else tuple(float(v) for v in np.atleast_1d(self.e_st))
        s_st = (0.0,) * n if self.s_st is None else tuple(float(v) for v in np.atleast_1d(self.s_st))
        if len(e_st) != n or len(s_st) != n:
            raise ValueError("e_st and s_st must have one entry per species")
        if not self.c_v > 0:
            raise ValueError("c_v must be positive")
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "e_st", e_st)
        object.__setattr__(self, "s_st", s_st)
        object.__setattr__(self, "c_v", float(self.c_v))

    @property
    def n(self) -> int:
        return len(self.m)

    @property
    def c_p(self) -> np.ndarray:
        return self.c_v + 1.0 / np.asarray(self.m)

    def column(self, name: str, ndim: int = 0) -> np.ndarray:
        """Per-species constant shaped to broadcast against ``ndim`` spatial axes."""
        vals = np.asarray(getattr(self, name) if name != "c_p" else self.c_p, dtype=float)
        return vals.reshape((-1,) + (1,) * ndim)


@dataclass(frozen=True)
class ThermoState:
    rho: np.ndarray
    theta: np.ndarray
    Y: np.ndarray

    def __post_init__(self):
        rho = np.asarray(self.rho, dtype=float)
        theta = np.asarray(self.theta, dtype=float)
        Y = np.atleast_1d(np.asarray(self.Y, dtype=float))
        if np.any(rho <= 0):
            raise ThermoDomainError("density must be positive")
        # theta = 0 is allowed so pressures can be evaluated on the cold isotherm
        if np.any(theta < 0):
            raise ThermoDomainError("temperature must be nonnegative")
        if np.any(Y < 0) or np.any(Y > 1):
            raise ThermoDomainError("mass fractions must lie in [0, 1]")
        if np.any(np.abs(Y.sum(axis=0) - 1.0) > 1e-10):
            raise ThermoDomainError("mass fractions must sum to one")
        object.__setattr__(self, "rho", rho)
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "Y", Y)

    @property
    def rhok(self) -> np.ndarray:
        return self.rho * self.Y


def _check_rho(rho):
    rho = np.asarray(rho, dtype=float)
    if rho.min() <= 0:
        raise ThermoDomainError("density must be positive")
    return rho


def cold_pressure_derivative(rho, p: ColdPressureParams):
    rho = _check_rho(rho)
    low = rho <= 1.0
    # each branch is evaluated on a masked copy so neither overflows
    r_low = np.where(low, rho, 1.0)
    return np.where(low, p.c1 * r_low ** (-p.gamma_minus - 1.0),
                    p.c2 * rho ** (p.gamma_plus - 1.0))[()]


def cold_pressure(rho, p: ColdPressureParams):
    """Cold pressure, the antiderivative of its derivative with value 0 at rho = 1."""
    rho = _check_rho(rho)
    if rho.min() > 1.0:
        return (p.c2 / p.gamma_plus * (rho ** p.gamma_plus - 1.0))[()]
    low = rho <= 1.0
    r_low = np.where(low, rho, 1.0)
    below = p.c1 / p.gamma_minus * (1.0 - r_low ** (-p.gamma_minus))
    above = p.c2 / p.gamma_plus * (rho ** p.gamma_plus - 1.0)
    return np.where(low, below, above)[()]


def cold_energy(rho, p: ColdPressureParams):
    """Cold internal energy solving rho^2 de_c/drho = pi_c with e_c(1) = 0."""
    rho = _check_rho(rho)
    gm, gp = p.gamma_minus, p.gamma_plus
    if rho.min() > 1.0:
        return (p.c2 / gp * ((rho ** (gp - 1.0) - 1.0) / (gp - 1.0) + 1.0 / rho - 1.0))[()]
    low = rho <= 1.0
    r_low = np.where(low, rho, 1.0)
    below = p.c1 / gm * ((1.0 - 1.0 / r_low) + (r_low ** (-gm - 1.0) - 1.0) / (gm + 1.0))
    above = p.c2 / gp * ((rho ** (gp - 1.0) - 1.0) / (gp - 1.0) + 1.0 / rho - 1.0)
    return np.where(low, below, above)[()]


def _bcast(spec: MixtureSpec, name: str, Y: np.ndarray) -> np.ndarray:
    return spec.column(name, Y.ndim - 1)


def partial_pressures(rho, theta, Y, spec: MixtureSpec) -> np.ndarray:
    Y = np.asarray(Y, dtype=float)
    return theta * rho * Y / _bcast(spec, "m", Y)


def molecular_pressure(state: ThermoState, spec: MixtureSpec):
    return partial_pressures(state.rho, state.theta, state.Y, spec).sum(axis=0)[()]


def total_pressure(state: ThermoState, spec: MixtureSpec):
    return molecular_pressure(state, spec) + cold_pressure(state.rho, spec.cold)


def internal_energy(state: ThermoState, spec: MixtureSpec):
    e_form = (state.Y * _bcast(spec, "e_st", state.Y)).sum(axis=0)
    return (e_form + spec.c_v * state.theta + cold_energy(state.rho, spec.cold))[()]


def enthalpies(theta, spec: MixtureSpec, ndim: int = 0) -> np.ndarray:
    return spec.column("e_st", ndim) + spec.column("c_p", ndim) * np.asarray(theta)


def _species_entropy(rhok, theta, k: int, spec: MixtureSpec):
    m = spec.m[k]
    return spec.s_st[k] + spec.c_v * np.log(theta) + np.log(m / rhok) / m


def species_entropy(state: ThermoState, spec: MixtureSpec, k: int):
    Yk = state.Y[k]
    if np.any(Yk <= 0):
        raise ThermoDomainError(f"species {k} is absent; its entropy is undefined")
    return _species_entropy(state.rho * Yk, state.theta, k, spec)[()]


def entropy_density(rho, theta, Y, spec: MixtureSpec) -> np.ndarray:
    """rho * s, with the vacuum-species terms taken as their limit 0."""
    Y = np.asarray(Y, dtype=float)
    total = np.zeros(np.broadcast(rho, theta, Y[0]).shape)
    for k in range(spec.n):
        rhok = rho * Y[k]
        present = rhok > 0
        safe = np.where(present, rhok, 1.0)
        total = total + np.where(present, rhok * _species_entropy(safe, theta, k, spec), 0.0)
    return total


def mixture_entropy(state: ThermoState, spec: MixtureSpec):
    return (entropy_density(state.rho, state.theta, state.Y, spec) / state.rho)[()]


def gibbs_function(state: ThermoState, spec: MixtureSpec, k: int):
    h = spec.e_st[k] + spec.c_p[k] * state.theta
    return (h - state.theta * species_entropy(state, spec, k))[()]


def sound_speed_squared(rho, theta, Y, spec: MixtureSpec):
    """d(pi)/d(rho) at fixed temperature and composition."""
    Y = np.asarray(Y, dtype=float)
    return theta * (Y / _bcast(spec, "m", Y)).sum(axis=0) + cold_pressure_derivative(rho, spec.cold)


def cold_relation_residual(rho, p: ColdPressureParams, h_rel: float = 1e-4):
    """Relative residual of rho^2 de_c/drho = pi_c, with a 4th-order central difference."""
    rho = _check_rho(rho)
    h = h_rel * rho
    de = (8.0 * (cold_energy(rho + h, p) - cold_energy(rho - h, p))
          - (cold_energy(rho + 2 * h, p) - cold_energy(rho - 2 * h, p))) / (12.0 * h)
    pc = cold_pressure(rho, p)
    scale = np.maximum(np.abs(pc), rho * rho * np.abs(de))
    return (np.abs(rho * rho * de - pc) / np.maximum(scale, np.finfo(float).tiny))[()]


def gibbs_relation_residual(rho, theta, Y, spec: MixtureSpec, step: float = 1e-5,
                            direction=(1.0, 1.0)):
    """Relative residual of theta ds = de + pi d(1/rho) at fixed Y.

    Differences are taken symmetrically along ``direction`` in (log rho,
    log theta), with theta and pi at the midpoint, so the residual is
    second order in ``step``.
    """
    rho = np.asarray(rho, dtype=float)
    theta = np.asarray(theta, dtype=float)
    Y = np.asarray(Y, dtype=float)
    a, b = direction

    def at(sign):
        st = ThermoState(rho * np.exp(sign * a * step), theta * np.exp(sign * b * step), Y)
        return st.rho, mixture_entropy(st, spec), internal_energy(st, spec)

    r_p, s_p, e_p = at(1.0)
    r_m, s_m, e_m = at(-1.0)
    pi = total_pressure(ThermoState(rho, theta, Y), spec)
    ds, de, dv = s_p - s_m, e_p - e_m, 1.0 / r_p - 1.0 / r_m
    terms = np.abs(theta * ds) + np.abs(de) + np.abs(pi * dv)
    return (np.abs(theta * ds - de - pi * dv) / np.maximum(terms, np.finfo(float).tiny))[()]
