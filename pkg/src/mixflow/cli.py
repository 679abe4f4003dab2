"""Command line entry point: ``mixflow run|audit|mms|validate <config>``."""
from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

THREADS_ENV = "MIXFLOW_THREADS"

# numpy sizes its BLAS pools at import, so the thread count is applied first
for _var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
    if THREADS_ENV in os.environ:
        os.environ[_var] = os.environ[THREADS_ENV]
    else:
        os.environ.setdefault(_var, "1")

from . import harness  # noqa: E402
from .config import ConfigError, load_config, validate_config  # noqa: E402
from .initial import InitialConditionError  # noqa: E402


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mixflow", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_):
        p = sub.add_parser(name, help=help_)
        p.add_argument("config", help="configuration file")
        return p

    p = add("run", "integrate a configuration and write diagnostics")
    p.add_argument("--output-dir", help="override run.output_dir")
    p.add_argument("--cadence", type=int, help="steps between diagnostics records")
    p.add_argument("--seed", type=int, help="seed for randomized initial data")
    p.add_argument("--max-steps", type=int, help="stop after this many steps")
    p.add_argument("--quiet", action="store_true", help="do not print the summary")

    p = add("audit", "check the structural hypotheses of a configuration")
    p.add_argument("--output-dir", help="also write audit.txt here")
    p.add_argument("--seed", type=int, help="seed for admissibility sampling")

    p = add("mms", "manufactured-solution convergence study")
    p.add_argument("--levels", type=int, help="number of spatial refinement levels (>= 3)")
    p.add_argument("--output-dir", help="also write mms.txt here")

    add("validate", "parse and validate a configuration, then audit it")
    return parser


def _overrides(cfg, args):
    changes = {}
    for key in ("output_dir", "cadence", "seed", "max_steps"):
        value = getattr(args, key, None)
        if value is not None:
            changes[key] = value
    if changes:
        cfg = validate_config(cfg.with_run(**changes))
    return cfg


def _write(out_dir, name, text):
    if out_dir:
        path = Path(out_dir)
        path.mkdir(parents=True, exist_ok=True)
        (path / name).write_text(text + "\n")


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = _overrides(load_config(args.config), args)
    except (ConfigError, OSError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return harness.EXIT_CONFIG

    if args.command in ("audit", "validate"):
        result = harness.constitutive_audit(cfg)
        text = result.text()
        print(text)
        _write(getattr(args, "output_dir", None), "audit.txt", text)
        return harness.EXIT_OK if result.passed else harness.EXIT_AUDIT

    if args.command == "mms":
        try:
            study = harness.convergence_study(cfg, args.levels)
        except ValueError as exc:
            print(f"mms error: {exc}", file=sys.stderr)
            return harness.EXIT_MMS
        text = study.text()
        print(text)
        _write(args.output_dir, "mms.txt", text)
        return harness.EXIT_OK

    audit = harness.constitutive_audit(cfg)
    if not audit.passed:
        print(audit.text(), file=sys.stderr)
        return harness.EXIT_AUDIT
    try:
        result = harness.run(cfg, echo=None if args.quiet else print)
    except InitialConditionError as exc:
        print(f"initial condition error: {exc}", file=sys.stderr)
        return harness.EXIT_CONFIG
    return result.exit_code


if __name__ == "__main__":
    sys.exit(main())
