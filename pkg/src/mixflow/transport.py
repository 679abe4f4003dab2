"""Transport coefficients: viscosities, conductivity, diffusion scalar, BD potential."""
from __future__ import annotations

import csv
from dataclasses import dataclass, field
from typing import Optional

import numpy as np


class TransportDomainError(ValueError):
    pass


def _nonneg(x, name):
    x = np.asarray(x, dtype=float)
    if np.any(x < 0):
        raise TransportDomainError(f"{name} must be nonnegative")
    return x


@dataclass(frozen=True)
class LinearViscosity:
    """mu(rho) = mu0 + mu1 * rho."""

    mu0: float = 0.0
    mu1: float = 1.0
    name = "linear"

    def mu(self, rho):
        return self.mu0 + self.mu1 * rho

    def mu_prime(self, rho):
        return self.mu1 * np.ones_like(rho, dtype=float)

    def mu_second(self, rho):
        return np.zeros_like(rho, dtype=float)

    def bd_potential(self, rho):
        # integral of 2 mu1 / s from 1 to rho
        return 2.0 * self.mu1 * np.log(rho)


VISCOSITY_FAMILIES = {"linear": LinearViscosity}


@dataclass(frozen=True)
class TransportSpec:
    viscosity: LinearViscosity = field(default_factory=LinearViscosity)
    mu_prime_lower: float = 0.5
    kappa0: float = 0.1
    kappa0_lower: float = 0.01
    kappa0_upper: float = 10.0
    alpha: float = 2.0
    d0: float = 0.1
    d0_lower: float = 0.01
    d0_upper: float = 10.0
    # Only for exercising the audit: a constant bulk viscosity that ignores
    # the coupling to mu. None means the coupled value is used.
    nu_constant: Optional[float] = None

    def __post_init__(self):
        for name in ("mu_prime_lower", "kappa0", "kappa0_lower", "kappa0_upper",
                     "d0", "d0_lower", "d0_upper", "alpha"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")


def _nu(rho, spec):
    if spec.nu_constant is not None:
        return np.full_like(rho, spec.nu_constant)
    v = spec.viscosity
    return 2.0 * rho * v.mu_prime(rho) - 2.0 * v.mu(rho)


def _kappa(rho, theta, spec):
    return spec.kappa0 * (1.0 + rho) * (1.0 + theta ** spec.alpha)


def _diffusion_scalar(rho, theta, spec):
    return spec.d0 * rho * (1.0 + theta)


def mu(rho, spec: TransportSpec):
    return spec.viscosity.mu(_nonneg(rho, "density"))


def mu_prime(rho, spec: TransportSpec):
    return spec.viscosity.mu_prime(_nonneg(rho, "density"))


def nu(rho, spec: TransportSpec):
    """Bulk viscosity 2 rho mu'(rho) - 2 mu(rho)."""
    return _nu(_nonneg(rho, "density"), spec)


def nu_prime(rho, spec: TransportSpec):
    rho = _nonneg(rho, "density")
    if spec.nu_constant is not None:
        return np.zeros_like(rho)
    return 2.0 * rho * spec.viscosity.mu_second(rho)


def kappa(rho, theta, spec: TransportSpec):
    rho = _nonneg(rho, "density")
    theta = _nonneg(theta, "temperature")
    return _kappa(rho, theta, spec)


def diffusion_scalar(rho, theta, spec: TransportSpec):
    rho = _nonneg(rho, "density")
    theta = _nonneg(theta, "temperature")
    return _diffusion_scalar(rho, theta, spec)


def bd_potential(rho, spec: TransportSpec):
    rho = np.asarray(rho, dtype=float)
    if np.any(rho <= 0):
        raise TransportDomainError("BD potential needs positive density")
    return spec.viscosity.bd_potential(rho)


def bd_potential_gradient(rho, grad_rho, spec: TransportSpec):
    """2 mu'(rho) grad(rho) / rho, evaluated directly from the density gradient."""
    rho = np.asarray(rho, dtype=float)
    if np.any(rho <= 0):
        raise TransportDomainError("BD potential needs positive density")
    return 2.0 * spec.viscosity.mu_prime(rho) * np.asarray(grad_rho) / rho


@dataclass
class AuditRow:
    rho: float
    check: str
    lhs: float
    rhs: float
    margin: float
    passed: bool


@dataclass
class AuditReport:
    rows: list
    rho_samples: np.ndarray

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.rows)

    def summary(self) -> dict:
        """check id -> (passed, worst margin)."""
        out = {}
        for r in self.rows:
            ok, worst = out.get(r.check, (True, np.inf))
            out[r.check] = (ok and r.passed, min(worst, r.margin))
        return out

    def failures(self) -> list:
        return sorted(k for k, (ok, _) in self.summary().items() if not ok)

    def to_csv(self, path):
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["rho", "inequality", "lhs", "rhs", "margin", "pass"])
            for r in self.rows:
                w.writerow([repr(r.rho), r.check, repr(r.lhs), repr(r.rhs), repr(r.margin), int(r.passed)])


def _row(rho, check, lhs, rhs, tol):
    lhs, rhs = float(lhs), float(rhs)
    margin = rhs - lhs
    scale = max(abs(lhs), abs(rhs), 1.0)
    return AuditRow(float(rho), check, lhs, rhs, margin, margin >= -tol * scale)


def audit_transport(spec: TransportSpec, rho_range=(1e-3, 1e3), samples: int = 100,
                    tol: float = 1e-12) -> AuditReport:
    """Sample every viscosity hypothesis on log-spaced densities.

    Each row reads ``lhs <= rhs``; the margin is ``rhs - lhs``.
    """
    lo, hi = rho_range
    if samples < 2 or not (0 < lo < hi):
        raise ValueError("need samples >= 2 and a positive density range")
    rhos = np.geomspace(lo, hi, samples)
    lower = spec.mu_prime_lower
    rows = [_row(0.0, "mu_at_vacuum", 0.0, mu(0.0, spec), tol)]
    for r in rhos:
        m, mp, n_, npr = mu(r, spec), mu_prime(r, spec), nu(r, spec), nu_prime(r, spec)
        coupled = 2.0 * r * mp - 2.0 * m
        rows += [
            _row(r, "mu_prime_lower", lower, mp, tol),
            _row(r, "mu_prime_upper", mp, 1.0 / lower, tol),
            _row(r, "nu_prime_bound", abs(npr), mp / lower, tol),
            _row(r, "lame_lower", lower * m, 2.0 * m + 3.0 * n_, tol),
            _row(r, "lame_upper", 2.0 * m + 3.0 * n_, m / lower, tol),
            _row(r, "nu_coupling", abs(n_ - coupled), 0.0, tol),
        ]
    return AuditReport(rows, rhos)


def audit_coefficients(spec: TransportSpec, tol: float = 1e-12) -> AuditReport:
    """Scalar hypotheses on the conductivity and diffusion constants."""
    nan = float("nan")
    rows = [
        _row(nan, "alpha_at_least_2", 2.0, spec.alpha, tol),
        _row(nan, "kappa0_lower", spec.kappa0_lower, spec.kappa0, tol),
        _row(nan, "kappa0_upper", spec.kappa0, spec.kappa0_upper, tol),
        _row(nan, "d0_lower", spec.d0_lower, spec.d0, tol),
        _row(nan, "d0_upper", spec.d0, spec.d0_upper, tol),
    ]
    return AuditReport(rows, np.array([]))
