"""Manufactured-solution study with a per-field table; same as ``mixflow mms``.

    python3 scripts/convergence_study.py configs/mms.cfg --levels 4
"""
import argparse

from mixflow.config import load_config
from mixflow.harness import convergence_study


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("config")
    ap.add_argument("--levels", type=int)
    args = ap.parse_args()
    print(convergence_study(load_config(args.config), args.levels).text())


if __name__ == "__main__":
    main()
