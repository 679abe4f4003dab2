"""Refinement study of the integral identities on the default perturbed run.

Each level integrates to --develop, then records every step over --window
and reports the worst residual of each identity with the observed orders.

    python3 scripts/identity_study.py --levels 128 256 512
"""
import argparse
from dataclasses import replace

import numpy as np

from mixflow.config import RunConfig, load_config, validate_config
from mixflow.diagnostics import identity_residuals, make_record
from mixflow.initial import build_solver, make_initial_condition

NAMES = ("kinetic", "bd", "temperature", "entropy", "energy")


def study(cfg, develop, window, cfl):
    solver = build_solver(cfg)
    q = make_initial_condition(cfg).q
    t = 0.0
    if develop > 0:
        steps = int(np.ceil(develop / solver.cfl_dt(q, cfl)))
        dt = develop / steps
        for i in range(steps):
            q = solver.step(q, i * dt, dt)
        t = develop
    steps = int(np.ceil(window / solver.cfl_dt(q, cfl)))
    dt = window / steps
    recs = [make_record(solver, q, t)]
    for i in range(steps):
        q = solver.step(q, t + i * dt, dt)
        recs.append(make_record(solver, q, t + (i + 1) * dt))
    return identity_residuals(recs)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--config", help="base configuration (grid N is overridden)")
    ap.add_argument("--levels", type=int, nargs="+", default=[128, 256, 512])
    ap.add_argument("--develop", type=float, default=0.02)
    ap.add_argument("--window", type=float, default=0.002)
    ap.add_argument("--cfl", type=float, default=0.9)
    args = ap.parse_args()

    base = load_config(args.config) if args.config else RunConfig()
    rows = []
    for N in args.levels:
        cfg = validate_config(replace(base, grid=replace(base.grid, N=(N,) * len(base.grid.N))))
        res = study(cfg, args.develop, args.window, args.cfl)
        rows.append([res[k].max_abs for k in NAMES])
        print(f"N={N:5d} " + " ".join(f"{k} {res[k].max_abs:.3e} (rel {res[k].max_rel:.1e})"
                                      for k in NAMES), flush=True)
    rows = np.array(rows)
    for i in range(1, len(rows)):
        o = np.log(rows[i - 1] / rows[i]) / np.log(args.levels[i] / args.levels[i - 1])
        print(f"order {args.levels[i - 1]}->{args.levels[i]}: "
              + " ".join(f"{k} {v:.2f}" for k, v in zip(NAMES, o)))


if __name__ == "__main__":
    main()
