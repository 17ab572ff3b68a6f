#!/usr/bin/env python3
"""Energy growth experiment: count tables, fitted exponents, and
threshold verdicts for the bundled sequence families.

Writes one report per family into --out (default results/) via the CLI,
so the files match the report schema the renderer consumes.
"""

import argparse
import pathlib
import sys

from finescale import cli

FAMILIES = {
    "lacunary": "specs/lacunary-pair.json",
    "lacunary_quadratic": "specs/lacunary-quadratic.json",
}


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="results")
    ap.add_argument("--grid", default="100,150,200,250,300,350,400")
    args = ap.parse_args()
    outdir = pathlib.Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)

    codes = []
    for name, spec in FAMILIES.items():
        slope_out = outdir / f"slope_{name}.json"
        codes.append(
            cli.run(
                ["slope", "--spec", spec, "--grid", args.grid,
                 "--out", str(slope_out)]
            )
        )
        verdict_out = outdir / f"verify_t2_{name}.json"
        codes.append(
            cli.run(
                ["verify", "--theorem", "2", "--spec", spec, "--grid", args.grid,
                 "--out", str(verdict_out)]
            )
        )
        print(f"{name}: slope -> {slope_out}, verdict -> {verdict_out}")

    t3_out = outdir / "verify_t3_power.json"
    codes.append(
        cli.run(
            ["verify", "--theorem", "3", "--spec", "specs/power-pair.json",
             "--grid", "128,256,512,1024", "--out", str(t3_out)]
        )
    )
    print(f"power (gamma=1/N): verdict -> {t3_out}")
    return max(codes)


if __name__ == "__main__":
    sys.exit(main())
