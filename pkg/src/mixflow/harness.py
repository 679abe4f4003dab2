"""Run orchestration, constitutive audit and manufactured-solution studies."""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import mms, thermo
from .config import RunConfig
from .diagnostics import DiagnosticsWriter, identity_residuals, make_record
from .fields import write_snapshot
from .initial import build_solver, check_initial, make_initial_condition
from .kinetics import admissibility_field, production_rates
from .solver import PositivityLossError, Solver
from .transport import audit_coefficients, audit_transport

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_POSITIVITY = 2
EXIT_SIGN = 3
EXIT_AUDIT = 4
EXIT_MMS = 5


# ---------------------------------------------------------------------- run

@dataclass
class RunResult:
    status: str
    exit_code: int
    steps: int
    t: float
    records: list
    summary: dict
    output_dir: Path

    def summary_text(self) -> str:
        return format_summary(self.summary)


def uniform_windows(records, rtol: float = 1e-9) -> list:
    """Split records into maximal runs with uniform time spacing (>= 3 records each)."""
    windows, start = [], 0
    for i in range(2, len(records) + 1):
        if i == len(records) or not _same_step(records, i, start, rtol):
            if i - start >= 3:
                windows.append(records[start:i])
            start = max(start, i - 1)
    return windows


def _same_step(records, i, start, rtol):
    ref = records[start + 1].t - records[start].t
    return abs((records[i].t - records[i - 1].t) - ref) <= rtol * abs(ref)


def _segment_dt(solver: Solver, q, cfl: float, remaining: float) -> float:
    dt = solver.cfl_dt(q, cfl)
    return remaining / math.ceil(remaining / dt - 1e-12)


def run(cfg: RunConfig, output_dir=None, echo=None) -> RunResult:
    """Integrate to t_end, writing the diagnostics CSV, snapshots and a summary.

    dt is fixed within a segment. With ``dt_segment = 0`` a segment lasts
    until the CFL limit, re-checked at every record, drops below the
    current dt; otherwise dt is recomputed every ``dt_segment`` steps.
    Each segment's dt divides the remaining time so the run ends at t_end.
    """
    rc = cfg.run
    out = Path(rc.output_dir if output_dir is None else output_dir)
    out.mkdir(parents=True, exist_ok=True)
    text = cfg.to_text()
    digest = cfg.digest()
    (out / "config.cfg").write_text(text)
    solver = build_solver(cfg)
    grid = solver.grid
    fs0 = make_initial_condition(cfg, grid, solver.mixture)
    init = check_initial(fs0, grid, solver.mixture, cfg)
    write_snapshot(out / "snapshot_000000.mfs", fs0, grid, 0.0, digest, text)

    q, t, step = fs0.q.copy(), 0.0, 0
    records, dts = [], []
    failure = None
    extended_keys = ("sigma_heat_raw", "sigma_diff_raw", "sigma_diff_weighted") if rc.extended else ()
    started = time.perf_counter()
    with DiagnosticsWriter(out / "diagnostics.csv", grid.dim, solver.mixture.n, digest,
                           extended_keys) as writer:
        rec = make_record(solver, q, t, rc.extended)
        writer.write(rec)
        records.append(rec)
        dt = _segment_dt(solver, q, rc.cfl, rc.t_end)
        seg_left = rc.dt_segment
        while t < rc.t_end and not (rc.max_steps and step >= rc.max_steps):
            if rc.dt_segment and seg_left == 0:
                dt = _segment_dt(solver, q, rc.cfl, rc.t_end - t)
                seg_left = rc.dt_segment
            try:
                q_new = solver.step(q, t, dt)
                if not np.all(np.isfinite(q_new)):
                    raise PositivityLossError("state", float("nan"), ())
                step += 1
                seg_left -= 1
                t_new = rc.t_end if abs(rc.t_end - (t + dt)) <= 1e-12 * rc.t_end else t + dt
                last = t_new >= rc.t_end or (rc.max_steps and step >= rc.max_steps)
                if step % rc.cadence == 0 or last:
                    rec = make_record(solver, q_new, t_new, rc.extended)
            except PositivityLossError as exc:
                failure = exc
                break
            q, t = q_new, t_new
            dts.append(dt)
            if step % rc.cadence == 0 or last:
                writer.write(rec)
                records.append(rec)
                if not rc.dt_segment and not last and solver.cfl_dt(q, rc.cfl) < dt * (1 - 1e-12):
                    dt = _segment_dt(solver, q, rc.cfl, rc.t_end - t)
            if rc.snapshot_cadence and step % rc.snapshot_cadence == 0:
                write_snapshot(out / f"snapshot_{step:06d}.mfs", solver.fieldset(q), grid, t, digest, text)
    elapsed = time.perf_counter() - started
    final_path = out / f"snapshot_{step:06d}.mfs"
    write_snapshot(final_path, solver.fieldset(q), grid, t, digest, text)

    summary = {"status": "ok", "digest": digest, "steps": step, "t_final": t,
               "dt_min": min(dts) if dts else 0.0, "dt_max": max(dts) if dts else 0.0,
               "records": len(records), "wall_seconds": round(elapsed, 3)}
    summary.update(init)
    summary.update(_run_checks(records, solver, rc.sign_tol))
    if failure is not None:
        summary.update({"status": "positivity_loss", "failure_quantity": failure.quantity,
                        "failure_value": failure.value, "failure_index": str(failure.index),
                        "failure_step": step + 1, "last_good_snapshot": final_path.name})
        code = EXIT_POSITIVITY
    elif summary["sign_violations"]:
        summary["status"] = "sign_violation"
        code = EXIT_SIGN
    else:
        code = EXIT_OK
    summary["exit_code"] = code
    write_summary(out, summary)
    if echo is not None:
        echo(format_summary(summary))
    return RunResult(summary["status"], code, step, t, records, summary, out)


def _relative_drift(series, scale):
    series = np.asarray(series, dtype=float)
    return float(np.max(np.abs(series - series[0])) / max(scale, np.finfo(float).tiny))


def _run_checks(records, solver: Solver, sign_tol: float) -> dict:
    out = {}
    r0 = records[0]
    mom = np.array([r.total_momentum for r in records])
    # the momentum total often starts at zero, so it is measured against int |rho u|
    mom_scale = max(float(np.max(np.abs(mom[0]))), r0.momentum_l1)
    out["drift_mass"] = _relative_drift([r.total_mass for r in records], abs(r0.total_mass))
    out["drift_momentum"] = _relative_drift(np.max(np.abs(mom - mom[0]), axis=1), mom_scale)
    out["drift_energy"] = _relative_drift([r.total_energy for r in records], abs(r0.total_energy))
    out["max_Ysum_dev"] = max(r.max_Ysum_dev for r in records)
    out["min_rho"] = min(r.min_rho for r in records)
    out["min_theta"] = min(r.min_theta for r in records)
    out["min_rhok"] = min(r.min_rhok for r in records)
    out["max_Y"] = max(r.max_Y for r in records)
    for name in ("visc", "heat", "diff"):
        out[f"worst_sign_{name}"] = min(getattr(r, f"worst_sign_{name}") for r in records)
    out["sign_violations"] = sum(
        1 for r in records for name in ("visc", "heat", "diff")
        if getattr(r, f"worst_sign_{name}") < -sign_tol)
    out["admissibility_worst"] = max(r.admissibility_worst for r in records)
    out["admissibility_violations"] = sum(1 for r in records if r.admissibility_worst > sign_tol)
    ent = np.array([r.total_entropy for r in records])
    out["entropy_min_increment"] = float(np.min(np.diff(ent))) if len(ent) > 1 else 0.0
    windows = uniform_windows(records)
    out["identity_windows"] = len(windows)
    per_window = [identity_residuals(w) for w in windows]
    for name in ("kinetic", "bd", "energy", "temperature", "entropy"):
        if per_window:
            out[f"residual_{name}_abs"] = max(r[name].max_abs for r in per_window)
            out[f"residual_{name}_rel"] = max(r[name].max_rel for r in per_window)
    return out


def format_summary(summary: dict) -> str:
    lines = [f"run status: {summary['status']} (exit {summary.get('exit_code', '?')})",
             f"  steps {summary['steps']}, t = {summary['t_final']:.6g}, "
             f"dt in [{summary['dt_min']:.3e}, {summary['dt_max']:.3e}]"]
    if "drift_mass" in summary:
        lines.append(f"  relative drift: mass {summary['drift_mass']:.2e}, momentum "
                     f"{summary['drift_momentum']:.2e}, energy {summary['drift_energy']:.2e}")
        lines.append(f"  minima: rho {summary['min_rho']:.4g}, theta {summary['min_theta']:.4g}, "
                     f"rho_k {summary['min_rhok']:.4g}; max |sum Y - 1| {summary['max_Ysum_dev']:.2e}")
        lines.append(f"  sign violations {summary['sign_violations']}, admissibility violations "
                     f"{summary['admissibility_violations']} (worst {summary['admissibility_worst']:.3e})")
    for name in ("kinetic", "bd", "energy", "temperature", "entropy"):
        key = f"residual_{name}_rel"
        if key in summary:
            lines.append(f"  identity {name:<11s} abs {summary[f'residual_{name}_abs']:.3e}  "
                         f"rel {summary[key]:.3e}")
    if summary["status"] == "positivity_loss":
        lines.append(f"  FAILURE: {summary['failure_quantity']} = {summary['failure_value']:.6g} "
                     f"at {summary['failure_index']} on step {summary['failure_step']}; "
                     f"last good snapshot {summary['last_good_snapshot']}")
    return "\n".join(lines)


def _kv(v) -> str:
    return repr(v) if isinstance(v, float) else str(v)


def write_summary(out: Path, summary: dict):
    (out / "summary.txt").write_text(format_summary(summary) + "\n")
    (out / "summary.kv").write_text("".join(f"{k}={_kv(v)}\n" for k, v in summary.items()))


def read_summary(path) -> dict:
    out = {}
    for line in Path(path).read_text().splitlines():
        key, _, value = line.partition("=")
        out[key] = value
    return out


# -------------------------------------------------------------------- audit

@dataclass
class AuditCheck:
    group: str
    name: str
    passed: bool
    detail: str = ""


@dataclass
class AuditResult:
    checks: list = field(default_factory=list)

    def add(self, group, name, passed, detail=""):
        self.checks.append(AuditCheck(group, name, bool(passed), detail))

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks if c.group != "admissibility")

    def failures(self) -> list:
        return [f"{c.group}.{c.name}" for c in self.checks if not c.passed]

    def warnings(self) -> list:
        return [f"{c.group}.{c.name}" for c in self.checks
                if not c.passed and c.group == "admissibility"]

    def text(self) -> str:
        lines = []
        for c in self.checks:
            tag = "PASS" if c.passed else ("WARN" if c.group == "admissibility" else "FAIL")
            lines.append(f"{tag}  {c.group}.{c.name}" + (f"  ({c.detail})" if c.detail else ""))
        lines.append("audit: " + ("passed" if self.passed else "FAILED: " + ", ".join(
            f for f in self.failures() if not f.startswith("admissibility."))))
        return "\n".join(lines)


def _simplex_samples(rng, n: int, count: int) -> np.ndarray:
    """Random simplex points plus all vertices and edge midpoints."""
    Y = rng.dirichlet(np.ones(n), size=count)
    extra = [np.eye(n)]
    for i in range(n):
        for j in range(i + 1, n):
            v = np.zeros(n)
            v[i] = v[j] = 0.5
            extra.append(v[None])
    return np.concatenate([Y] + extra).T


def constitutive_audit(cfg: RunConfig) -> AuditResult:
    """Check every structural hypothesis the configuration can violate.

    Admissibility of the kinetics is sampled over the configured (rho,
    theta, Y) box; violations there are warnings, all other failures are
    errors.
    """
    a = cfg.audit
    res = AuditResult()
    spec = cfg.mixture_spec()
    tr = cfg.transport_spec()
    kin = cfg.kinetics_spec()

    rep = audit_transport(tr, (a.rho_min, a.rho_max), a.samples)
    for name, (ok, worst) in rep.summary().items():
        res.add("transport", name, ok, f"worst margin {worst:.3e}")
    rep = audit_coefficients(tr)
    labels = {"alpha_at_least_2": "alpha >= 2"}
    for name, (ok, worst) in rep.summary().items():
        res.add("coefficients", name, ok, labels.get(name, f"margin {worst:.3e}"))

    cold = spec.cold
    res.add("cold", "gamma_minus_gt_1", cold.gamma_minus > 1, f"gamma_minus = {cold.gamma_minus}")
    res.add("cold", "gamma_plus_gt_1", cold.gamma_plus > 1, f"gamma_plus = {cold.gamma_plus}")
    rho = np.geomspace(a.rho_min, a.rho_max, a.samples)
    err = float(np.max(thermo.cold_relation_residual(rho, cold)))
    res.add("cold", "energy_pressure_relation", err <= 1e-10, f"max relative error {err:.2e}")
    res.add("cold", "normalized_at_unit_density",
            thermo.cold_pressure(1.0, cold) == 0 and thermo.cold_energy(1.0, cold) == 0)

    rng = np.random.default_rng(cfg.run.seed)
    Y = _simplex_samples(rng, spec.n, a.admissibility_samples)
    om = production_rates(Y, kin)
    res.add("kinetics", "rates_sum_to_zero", np.max(np.abs(om.sum(axis=0))) <= 1e-15)
    res.add("kinetics", "rates_bounded",
            np.all(om >= -kin.omega_lower) and np.all(om <= kin.omega_upper))
    res.add("kinetics", "nonnegative_when_absent", np.all(om[Y == 0] >= 0))

    rho_s = np.exp(rng.uniform(np.log(a.rho_min), np.log(a.rho_max), Y.shape[1]))
    th_s = np.exp(rng.uniform(np.log(a.theta_min), np.log(a.theta_max), Y.shape[1]))
    adm, singular = admissibility_field(rho_s, th_s, Y, om, spec)
    bad = (adm > 1e-12 * np.maximum(1.0, np.abs(rho_s * th_s))) | singular
    detail = f"{int(bad.sum())} of {bad.size} samples violate"
    if bad.any():
        i = int(np.argmax(np.where(bad, adm, -np.inf)))
        detail += f"; worst at rho={rho_s[i]:.4g}, theta={th_s[i]:.4g}, Y={np.round(Y[:, i], 4).tolist()}"
    res.add("admissibility", "second_law_sampling", not bad.any(), detail)
    return res


# ---------------------------------------------------------------------- mms

@dataclass
class StudyResult:
    spatial: mms.OrderReport
    temporal: mms.OrderReport
    seconds: float

    def text(self) -> str:
        return (f"spatial refinement (min order {self.spatial.min_order:.3f})\n{self.spatial.table()}\n"
                f"temporal refinement (min order {self.temporal.min_order:.3f})\n"
                f"{self.temporal.table()}\nwall time {self.seconds:.1f} s")


def convergence_study(cfg: RunConfig, levels: int | None = None) -> StudyResult:
    m = cfg.mms
    levels = m.levels if levels is None else levels
    if levels < 3:
        raise ValueError("need >= 3 levels")
    grid = cfg.make_grid()
    base = Solver(grid, cfg.mixture_spec(), cfg.transport_spec(), cfg.kinetics_spec(),
                  order=cfg.grid.order, rho_floor=cfg.run.rho_floor)
    mms.check_manufactured(base)
    started = time.perf_counter()
    Ns = [m.N0 * 2 ** i for i in range(levels)]
    spatial = mms.spatial_study(base, Ns, m.t_end, m.cfl)
    h = grid.L[0] / m.time_N
    dt0 = m.time_dt_scale * h * h
    dts = [dt0 / 2 ** i for i in range(m.time_levels + 1)]
    temporal = mms.temporal_study(base, m.time_N, dts, m.t_end)
    return StudyResult(spatial, temporal, time.perf_counter() - started)
