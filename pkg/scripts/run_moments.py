#!/usr/bin/env python3
"""Moment experiment: indicator expectation at fixed N plus the
variance of the centered smoothed pair sum along an N-ladder (the
decay that drives the convergence argument at desk scale)."""

import argparse
import json
import pathlib
import sys

from finescale import cli


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="results")
    ap.add_argument("--seed", type=int, default=99)
    ap.add_argument("--samples", type=int, default=100)
    args = ap.parse_args()
    outdir = pathlib.Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)

    codes = [
        cli.run(
            ["expectation", "--spec", "specs/power-pair.json", "--s", "1",
             "--samples", "50", "--seed", str(args.seed),
             "--out", str(outdir / "expectation_power_pair.json")]
        )
    ]

    spec = {"r": 1, "N": 50, "components": [{"kind": "power", "theta": 1.5}]}
    variance_reports = []
    for N in (50, 100, 200):
        spec["N"] = N
        spec_path = outdir / f"power15_N{N}.json"
        spec_path.write_text(json.dumps(spec))
        out = outdir / f"variance_N{N}.json"
        codes.append(
            cli.run(
                ["variance", "--spec", str(spec_path), "--s", "1",
                 "--samples", str(args.samples), "--seed", str(args.seed),
                 "--out", str(out)]
            )
        )
        variance_reports.append(str(out))
        print(f"variance N={N} -> {out}")
    print("expectation ->", outdir / "expectation_power_pair.json")
    return max(codes)


if __name__ == "__main__":
    sys.exit(main())
