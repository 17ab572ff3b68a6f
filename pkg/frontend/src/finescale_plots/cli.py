"""finescale-plots: render <reports...> --kind <k> --out <dir>."""

from __future__ import annotations

import argparse
import sys

from .render import KINDS, EmptyReport, FigureRequest, RenderError, render


def run(argv) -> int:
    parser = argparse.ArgumentParser(
        prog="finescale-plots",
        description="Render figures from finescale JSON reports",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("render", help="render one figure kind from report files")
    p.add_argument("reports", nargs="*", help="report JSON files")
    p.add_argument("--kind", choices=KINDS, required=True)
    p.add_argument("--out", required=True, help="output directory")
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 1 if exc.code not in (0, None) else 0

    try:
        paths = render(FigureRequest(tuple(args.reports), args.out, args.kind))
    except EmptyReport as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except RenderError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    for path in paths:
        print(path)
    return 0


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
