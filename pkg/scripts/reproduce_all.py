#!/usr/bin/env python3
"""Run every registered reproduction case and collect the reports.

Writes reports/<case>.json (plus coefficient tables for the oscillator
cases) and prints a one-line verdict per case.  Exits nonzero if any
case fails its expected values.
"""

import argparse
import pathlib
import sys

from srpt.cli import CASES, run_case
from srpt.states import (
    eigenstate_table_csv,
    oscillator2d_eigenstates,
    oscillator3d_eigenstates,
)


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out-dir", default="reports")
    args = parser.parse_args()

    out_dir = pathlib.Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    failures = []
    for case_id in CASES:
        path = out_dir / f"{case_id}.json"
        status = run_case(case_id, [], str(path), "json")
        verdict = "ok" if status == 0 else f"FAILED (exit {status})"
        print(f"{case_id:24s} {verdict}   -> {path}")
        if status != 0:
            failures.append(case_id)

    (out_dir / "osc2d_coefficients.csv").write_text(
        eigenstate_table_csv(oscillator2d_eigenstates(2)))
    (out_dir / "osc3d_coefficients.csv").write_text(
        eigenstate_table_csv(oscillator3d_eigenstates(2)))
    print(f"coefficient tables       -> {out_dir}/osc*_coefficients.csv")

    if failures:
        print(f"{len(failures)} case(s) failed: {', '.join(failures)}")
        return 2
    print(f"all {len(CASES)} cases reproduced")
    return 0


if __name__ == "__main__":
    sys.exit(main())
