"""Integral balances, entropy production and identity residuals.

Everything here is read-only with respect to the solver state. Integrals
are uniform-grid sums times the cell volume, which for periodic data is
the trapezoidal rule.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass, field, fields
from types import SimpleNamespace

import numpy as np

from . import thermo
from .fields import FieldSet
from .grid import Grid, gradient
from .kinetics import admissibility_field
from .thermo import MixtureSpec
from .transport import TransportSpec, bd_potential_gradient


def conserved_totals(fs: FieldSet, grid: Grid, spec: MixtureSpec = None):
    """(mass, momentum vector, total energy, species masses)."""
    return (
        float(grid.integrate(fs.rho)),
        np.asarray(grid.integrate(fs.mom)),
        float(grid.integrate(fs.rhoE)),
        np.asarray(grid.integrate(fs.rhok)),
    )


def recover_temperature(fs: FieldSet, spec: MixtureSpec) -> np.ndarray:
    """Temperature from the conservative fields, without any positivity check."""
    rho = fs.rho
    u = fs.mom / rho
    e = fs.rhoE / rho - 0.5 * (u * u).sum(axis=0)
    e_form = (fs.rhok / rho * spec.column("e_st", rho.ndim)).sum(axis=0)
    return (e - e_form - thermo.cold_energy(rho, spec.cold)) / spec.c_v


def entropy_total(fs: FieldSet, grid: Grid, spec: MixtureSpec) -> float:
    theta = recover_temperature(fs, spec)
    return float(grid.integrate(thermo.entropy_density(fs.rho, theta, fs.rhok / fs.rho, spec)))


def bd_velocity(fs: FieldSet, grid: Grid, transport: TransportSpec, order: int = 2) -> np.ndarray:
    """u + grad(phi(rho)) with the potential gradient taken from the discrete grad(rho)."""
    grad_rho = gradient(fs.rho, grid, order)
    return fs.mom / fs.rho + bd_potential_gradient(fs.rho, grad_rho, transport)


def bd_functional(fs: FieldSet, grid: Grid, transport: TransportSpec, order: int = 2) -> float:
    w = bd_velocity(fs, grid, transport, order)
    return float(grid.integrate(0.5 * fs.rho * (w * w).sum(axis=0)))


def positivity_report(fs: FieldSet, spec: MixtureSpec) -> dict:
    Y = fs.rhok / fs.rho
    return {
        "min_rho": float(fs.rho.min()),
        "min_theta": float(recover_temperature(fs, spec).min()),
        "min_rhok": float(fs.rhok.min()),
        "max_Y": float(Y.max()),
        "max_Ysum_dev": float(np.abs(Y.sum(axis=0) - 1.0).max()),
    }


def entropy_production(solver, q, ev=None, extended: bool = False) -> SimpleNamespace:
    """Pointwise entropy production split into its four mechanisms.

    The heat and diffusion parts use the rearranged, manifestly
    nonnegative forms kappa |grad theta|^2 / theta^2 and
    sum_k pi_m |F_k|^2 / (C0 theta rho_k). With ``extended`` the raw forms
    -Q.grad(theta)/theta^2 and -sum_k F_k.grad(g_k/theta), and the variant
    weighting each species term by 1/m_k, are returned as well.
    """
    ev = solver.evaluate(q) if ev is None else ev
    grid, spec = solver.grid, solver.mixture
    theta, rho = ev.theta, ev.rho
    visc = (ev.S * ev.grad_u).sum(axis=(0, 1)) / theta
    heat = ev.kappa * (ev.grad_theta ** 2).sum(axis=0) / theta ** 2
    rhok = ev.fs.rhok
    present = rhok > 0
    denom = np.where(present, ev.c0 * theta * rhok, 1.0)
    diff = np.where(present, ev.pi_m * (ev.F ** 2).sum(axis=1) / denom, 0.0).sum(axis=0)
    vacuum = ~present.all(axis=0)
    adm, singular = admissibility_field(rho, theta, ev.Y, ev.omega, spec)
    react = np.where(singular, 0.0, -adm)
    out = SimpleNamespace(
        visc=visc, heat=heat, diff=diff, react=react, vacuum=vacuum,
        singular=singular, admissibility=adm,
    )
    out.total = visc + heat + diff + react
    out.integrals = {name: float(grid.integrate(getattr(out, name)))
                     for name in ("visc", "heat", "diff", "react")}
    if extended:
        safe = np.where(present, rhok, 1.0)
        m_col = spec.column("m", grid.dim)
        s_k = (spec.column("s_st", grid.dim) + spec.c_v * np.log(theta)
               + np.log(m_col / safe) / m_col)
        g_over_theta = ev.h / theta - s_k
        grad_g = gradient(g_over_theta, grid, solver.order)
        flux_dot = np.where(present, (ev.F * grad_g).sum(axis=1), 0.0)
        out.heat_raw = -(ev.Q * ev.grad_theta).sum(axis=0) / theta ** 2
        out.diff_raw = -flux_dot.sum(axis=0)
        out.diff_weighted = -(flux_dot / m_col).sum(axis=0)
        for name in ("heat_raw", "diff_raw", "diff_weighted"):
            out.integrals[name] = float(grid.integrate(getattr(out, name)))
    return out


@dataclass
class DiagnosticsRecord:
    t: float
    total_mass: float
    total_momentum: np.ndarray
    total_energy: float
    species_masses: np.ndarray
    total_entropy: float
    sigma_visc: float
    sigma_heat: float
    sigma_diff: float
    sigma_react: float
    bd_functional: float
    min_rho: float
    min_theta: float
    min_rhok: float
    max_Ysum_dev: float
    admissibility_worst: float
    # integrals feeding the identity residuals
    kinetic_energy: float = 0.0
    # int |rho u|, the scale for momentum drift when the total is near zero
    momentum_l1: float = 0.0
    viscous_work: float = 0.0
    pressure_work: float = 0.0
    rotational_dissipation: float = 0.0
    bd_pressure: float = 0.0
    thermal_energy: float = 0.0
    molecular_work: float = 0.0
    formation_source: float = 0.0
    # pointwise sign audit: most negative value relative to the local scale
    worst_sign_visc: float = 0.0
    worst_sign_heat: float = 0.0
    worst_sign_diff: float = 0.0
    max_Y: float = 0.0
    vacuum_points: int = 0
    singular_points: int = 0
    extended: dict = field(default_factory=dict)


def _worst_sign(values, scale):
    """min(value / scale) over points; negative means a sign violation."""
    scale = np.maximum(scale, np.finfo(float).tiny)
    return float(min(0.0, np.min(values / scale)))


def make_record(solver, q, t: float, extended: bool = False) -> DiagnosticsRecord:
    grid, spec, tr = solver.grid, solver.mixture, solver.transport
    ev = solver.evaluate(q)
    fs = ev.fs
    mass, mom, energy, species = conserved_totals(fs, grid, spec)
    sig = entropy_production(solver, q, ev, extended=extended)
    pos = positivity_report(fs, spec)
    div_u = np.trace(ev.grad_u, axis1=0, axis2=1)
    grad_rho = gradient(fs.rho, grid, solver.order)
    grad_phi = bd_potential_gradient(fs.rho, grad_rho, tr)
    grad_pi = gradient(ev.pi, grid, solver.order)
    w = ev.u + grad_phi
    rot = ev.grad_u - np.swapaxes(ev.grad_u, 0, 1)
    e_form_rate = (spec.column("e_st", grid.dim) * ev.omega).sum(axis=0)
    sdotgrad = (ev.S * ev.grad_u).sum(axis=(0, 1))
    # local scales for the sign audit: the magnitude of each term's factors
    visc_scale = (np.abs(ev.S) * np.abs(ev.grad_u)).sum(axis=(0, 1)) / ev.theta
    adm = sig.admissibility
    rec = DiagnosticsRecord(
        t=float(t),
        total_mass=mass,
        total_momentum=mom,
        total_energy=energy,
        species_masses=species,
        total_entropy=float(grid.integrate(thermo.entropy_density(fs.rho, ev.theta, ev.Y, spec))),
        sigma_visc=sig.integrals["visc"],
        sigma_heat=sig.integrals["heat"],
        sigma_diff=sig.integrals["diff"],
        sigma_react=sig.integrals["react"],
        bd_functional=float(grid.integrate(0.5 * fs.rho * (w * w).sum(axis=0))),
        min_rho=pos["min_rho"],
        min_theta=pos["min_theta"],
        min_rhok=pos["min_rhok"],
        max_Ysum_dev=pos["max_Ysum_dev"],
        admissibility_worst=float(np.max(adm)),
        kinetic_energy=float(grid.integrate(0.5 * fs.rho * (ev.u * ev.u).sum(axis=0))),
        momentum_l1=float(grid.integrate(np.abs(fs.mom).sum(axis=0))),
        viscous_work=float(grid.integrate(sdotgrad)),
        pressure_work=float(grid.integrate(ev.pi * div_u)),
        rotational_dissipation=float(grid.integrate(0.5 * ev.mu * (rot * rot).sum(axis=(0, 1)))),
        bd_pressure=float(grid.integrate((grad_phi * grad_pi).sum(axis=0))),
        thermal_energy=float(grid.integrate(fs.rho * spec.c_v * ev.theta)),
        molecular_work=float(grid.integrate(ev.pi_m * div_u)),
        formation_source=float(grid.integrate(fs.rho * ev.theta * e_form_rate)),
        worst_sign_visc=_worst_sign(sig.visc, visc_scale),
        worst_sign_heat=_worst_sign(sig.heat, sig.heat),
        worst_sign_diff=_worst_sign(sig.diff, sig.diff),
        max_Y=pos["max_Y"],
        vacuum_points=int(sig.vacuum.sum()),
        singular_points=int(sig.singular.sum()),
    )
    if extended:
        rec.extended = {
            "sigma_heat_raw": sig.integrals["heat_raw"],
            "sigma_diff_raw": sig.integrals["diff_raw"],
            "sigma_diff_weighted": sig.integrals["diff_weighted"],
        }
    return rec


# ---------------------------------------------------------------- identities

@dataclass
class IdentityResidual:
    name: str
    t: np.ndarray
    absolute: np.ndarray
    relative: np.ndarray
    scale: np.ndarray

    @property
    def max_abs(self) -> float:
        return float(np.max(np.abs(self.absolute)))

    @property
    def max_rel(self) -> float:
        return float(np.max(np.abs(self.relative)))


def _series(records, name):
    return np.array([getattr(r, name) for r in records], dtype=float)


def _slope(t, x) -> float:
    tc = t - t.mean()
    return float((tc * (x - x.mean())).sum() / (tc * tc).sum())


def identity_residuals(records) -> dict:
    """Centered-in-time residuals of the integral identities.

    kinetic:     d/dt int rho|u|^2/2 + int S:grad u - int pi div u
    bd:          d/dt int rho|u + grad phi|^2/2 + int mu|grad u - grad u^T|^2/2
                 + int grad phi . grad pi - int pi div u
    energy:      least-squares slope of int rho E over the window, the drift
                 rate per unit time; a centered difference at explicit time
                 steps, or a two-point drift over a tiny interval, would only
                 measure summation round-off
    temperature: d/dt int rho c_v theta + int pi_m div u - int S:grad u
                 + int rho theta sum_k e_st_k omega_k
    entropy:     d/dt int rho s - int sigma
    """
    if len(records) < 3:
        raise ValueError("need at least 3 consecutive records")
    t = _series(records, "t")
    steps = np.diff(t)
    if np.any(np.abs(steps - steps[0]) > 1e-9 * abs(steps[0])):
        raise ValueError("identity residuals need uniformly spaced records")

    def ddt(name):
        x = _series(records, name)
        return (x[2:] - x[:-2]) / (t[2:] - t[:-2])

    def mid(name):
        return _series(records, name)[1:-1]

    sigma = mid("sigma_visc") + mid("sigma_heat") + mid("sigma_diff") + mid("sigma_react")
    groups = {
        "kinetic": [ddt("kinetic_energy"), mid("viscous_work"), -mid("pressure_work")],
        "bd": [ddt("bd_functional"), mid("rotational_dissipation"), mid("bd_pressure"),
               -mid("pressure_work")],
        "energy": [np.full(len(t) - 2, _slope(t, _series(records, "total_energy")))],
        "temperature": [ddt("thermal_energy"), mid("molecular_work"), -mid("viscous_work"),
                        mid("formation_source")],
        "entropy": [ddt("total_entropy"), -sigma],
    }
    out = {}
    for name, terms in groups.items():
        terms = np.array(terms)
        res = terms.sum(axis=0)
        if name == "energy":
            # relative to the energy itself, per unit time
            scale = np.full(len(t) - 2, abs(records[0].total_energy))
        else:
            scale = np.abs(terms).max(axis=0)
        rel = res / np.maximum(scale, np.finfo(float).tiny)
        out[name] = IdentityResidual(name, t[1:-1], res, rel, scale)
    return out


# ---------------------------------------------------------------------- CSV

SCALAR_FIELDS = [f.name for f in fields(DiagnosticsRecord) if f.name not in ("extended",)]


def record_columns(dim: int, n: int, extended_keys=()) -> list:
    cols = []
    for name in SCALAR_FIELDS:
        if name == "total_momentum":
            cols += [f"total_momentum_{i}" for i in range(dim)]
        elif name == "species_masses":
            cols += [f"species_mass_{k}" for k in range(n)]
        else:
            cols.append(name)
    return cols + list(extended_keys)


def record_row(rec: DiagnosticsRecord) -> list:
    row = []
    for name in SCALAR_FIELDS:
        v = getattr(rec, name)
        if isinstance(v, np.ndarray):
            row += [repr(float(x)) for x in v.ravel()]
        else:
            row.append(repr(float(v)) if isinstance(v, float) else str(v))
    return row + [repr(float(v)) for v in rec.extended.values()]


class DiagnosticsWriter:
    """CSV time series: a digest comment line, a header row, one row per record."""

    def __init__(self, path, dim: int, n: int, digest: str = "", extended_keys=()):
        self._fh = open(path, "w", newline="")
        self._fh.write(f"# parameter_digest={digest}\n")
        self._w = csv.writer(self._fh)
        self._w.writerow(record_columns(dim, n, extended_keys))

    def write(self, rec: DiagnosticsRecord):
        self._w.writerow(record_row(rec))

    def close(self):
        self._fh.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()


def read_diagnostics(path):
    """Return (digest, list of column dicts) from a diagnostics CSV."""
    with open(path, newline="") as fh:
        first = fh.readline().strip()
        digest = first.split("=", 1)[1] if first.startswith("# parameter_digest=") else ""
        rows = list(csv.DictReader(fh))
    return digest, [{k: float(v) for k, v in r.items()} for r in rows]
