#!/usr/bin/env python3
"""Reproduce the three dependence/intensity studies and write CSVs (and SVGs).

Usage: python3 scripts/run_experiments.py [outdir]
"""

import pathlib
import sys

from bcva.cli import main

HERE = pathlib.Path(__file__).parent

RUNS = [
    ("fig1_tau_sweep_k1", "sweep"),
    ("fig2_tau_sweep_k08", "sweep"),
    ("fig3_lambda_a_sweep", "sweep"),
    ("zcb_example", "price"),
]


def run(outdir: pathlib.Path) -> int:
    outdir.mkdir(parents=True, exist_ok=True)
    for name, command in RUNS:
        config = HERE / f"{name}.json"
        args = [command, str(config), "--out", str(outdir / f"{name}.csv")]
        if command == "sweep":
            args += ["--svg", str(outdir / f"{name}.svg")]
        status = main(args)
        if status != 0:
            print(f"{name}: exit {status}", file=sys.stderr)
            return status
        print(f"{name}: wrote {outdir / name}.csv")
    return 0


if __name__ == "__main__":
    out = pathlib.Path(sys.argv[1]) if len(sys.argv) > 1 else pathlib.Path("results")
    sys.exit(run(out))
