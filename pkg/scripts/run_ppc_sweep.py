#!/usr/bin/env python3
"""Pair-correlation convergence sweep for the power-pair family:
R2(s) across seeded measure draws, with the per-N median deviation
from the 2s reference."""

import argparse
import pathlib
import sys

from finescale import cli


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="results")
    ap.add_argument("--spec", default="specs/power-pair.json")
    ap.add_argument("--grid", default="100,200,300")
    ap.add_argument("--n-alpha", type=int, default=20)
    ap.add_argument("--seed", type=int, default=777)
    args = ap.parse_args()
    outdir = pathlib.Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)

    out = outdir / "ppc_sweep.json"
    code = cli.run(
        ["sweep", "--spec", args.spec, "--grid", args.grid,
         "--s", "0.5", "--s", "1", "--s", "2",
         "--n-alpha", str(args.n_alpha), "--seed", str(args.seed),
         "--out", str(out)]
    )
    print(f"sweep -> {out}")
    return code


if __name__ == "__main__":
    sys.exit(main())
