"""Species production rates and the second-law admissibility check."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .thermo import MixtureSpec, ThermoState


@dataclass(frozen=True)
class KineticsSpec:
    """Built-in rate laws depending on the mass fractions only.

    ``kind`` is ``"null"`` or ``"pairwise_exchange"``; the exchange moves
    mass from species ``donor`` to species ``acceptor`` at rate
    ``rate * Y_donor``. Rates are clamped to ``[-omega_lower, omega_upper]``.
    """

    kind: str = "null"
    donor: int = 0
    acceptor: int = 1
    rate: float = 1.0
    omega_lower: float = 10.0
    omega_upper: float = 10.0

    def __post_init__(self):
        if self.kind not in ("null", "pairwise_exchange"):
            raise ValueError(f"unknown kinetics kind {self.kind!r}")
        if not (self.omega_lower > 0 and self.omega_upper > 0):
            raise ValueError("rate bounds must be positive")
        if self.kind == "pairwise_exchange":
            if not self.rate > 0:
                raise ValueError("exchange rate constant must be positive")
            if self.donor == self.acceptor or min(self.donor, self.acceptor) < 0:
                raise ValueError("donor and acceptor must be distinct species indices")


def _check_simplex(Y, tol=1e-10):
    if np.any(Y < -tol) or np.any(np.abs(Y.sum(axis=0) - 1.0) > tol):
        raise ValueError("mass fractions are not on the simplex")


def production_rates(Y, kin: KineticsSpec, check: bool = True) -> np.ndarray:
    Y = np.asarray(Y, dtype=float)
    if check:
        _check_simplex(Y)
    omega = np.zeros_like(Y)
    if kin.kind == "null":
        return omega
    i, j = kin.donor, kin.acceptor
    if max(i, j) >= Y.shape[0]:
        raise ValueError("exchange species index out of range")
    flow = kin.rate * Y[i]
    # one factor for both entries keeps the rates summing to zero
    with np.errstate(divide="ignore", invalid="ignore"):
        scale = np.minimum(1.0, np.minimum(kin.omega_lower, kin.omega_upper) / np.abs(flow))
    scale = np.where(flow == 0, 1.0, scale)
    omega[i] = -flow * scale
    omega[j] = flow * scale
    return omega


def species_source(rho, theta, omega) -> np.ndarray:
    return rho * theta * np.asarray(omega)


@dataclass
class Admissibility:
    residual: float
    admissible: bool
    singular: bool


def admissibility_field(rho, theta, Y, omega, spec: MixtureSpec):
    """Pointwise sum_k g_k rho omega_k and a mask of singular points.

    A point is singular when some species is absent yet has a nonzero rate;
    its residual is reported as +inf.
    """
    Y = np.asarray(Y, dtype=float)
    omega = np.asarray(omega, dtype=float)
    total = np.zeros(np.broadcast(rho, theta, Y[0]).shape)
    singular = np.zeros(total.shape, dtype=bool)
    c_p = spec.c_p
    for k in range(spec.n):
        active = omega[k] != 0
        present = Y[k] > 0
        singular |= active & ~present
        rhok = np.where(present, rho * Y[k], 1.0)
        s_k = spec.s_st[k] + spec.c_v * np.log(theta) + np.log(spec.m[k] / rhok) / spec.m[k]
        g_k = spec.e_st[k] + c_p[k] * theta - theta * s_k
        total = total + np.where(active & present, g_k * rho * omega[k], 0.0)
    return np.where(singular, np.inf, total), singular


def admissibility_residual(state: ThermoState, spec: MixtureSpec, omega, tol: float = 0.0) -> Admissibility:
    res, sing = admissibility_field(state.rho, state.theta, state.Y, omega, spec)
    res = float(np.max(res))
    singular = bool(np.any(sing))
    return Admissibility(res, (not singular) and res <= tol, singular)
