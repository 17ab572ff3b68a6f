"""Command-line entry point.

Every operation is a subcommand emitting a JSON report of the shape
{"manifest": {...}, "results": {...}, "error": null | {...}} (CSV for
the table-shaped results only).  Exit codes: 0 success, 1 usage error,
2 numeric/capacity guard, 3 verification failure.

Reports are byte-identical for identical argv + seed regardless of
--threads; only manifest.timing_ms varies between runs.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

import numpy as np

from . import __version__
from .energy import Thm1Config, additive_energy, energy_table, thm1_count
from .errors import FinescaleError, InvalidSpec
from .experiments import (
    check_hypotheses,
    fit_exponent,
    ppc_sweep,
    sweep_summary,
    verdict_from_table,
)
from .measure_mu import MuSampler, mu_density, sample_alpha_at
from .moments import indicator_expectation, selberg_expectation, variance_estimate
from .parallel import resolve_threads
from .selberg import build_pair, coeffs_to_csv, verify_sandwich
from .sequences import load_spec, materialize_all, spec_to_dict
from .statistics import pair_correlation, project_values

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_GUARD = 2
EXIT_VERIFICATION = 3


class _UsageError(Exception):
    pass


def _manifest(command: str, params: dict, seed) -> dict:
    return {
        "tool_version": __version__,
        "command": command,
        "params": params,
        "seed": seed,
        "timing_ms": 0,
    }


def _emit(report: dict, out: str, fmt: str, csv_text: str | None = None) -> None:
    if fmt == "csv":
        if csv_text is None:
            raise _UsageError("--format csv is only available for table-shaped results")
        payload = csv_text
    else:
        payload = json.dumps(report, sort_keys=True, indent=2) + "\n"
    if out == "-":
        sys.stdout.write(payload)
    else:
        with open(out, "w") as fh:
            fh.write(payload)


def _parse_float_list(text: str) -> list:
    try:
        return [float(x) for x in text.split(",") if x.strip() != ""]
    except ValueError as exc:
        raise _UsageError(f"bad numeric list {text!r}") from exc


def _parse_int_list(text: str) -> list:
    try:
        return [int(x) for x in text.split(",") if x.strip() != ""]
    except ValueError as exc:
        raise _UsageError(f"bad integer list {text!r}") from exc


def _load_table(path: str) -> list:
    """(N, count) rows from a JSON list/object or a CSV with header."""
    with open(path) as fh:
        text = fh.read()
    try:
        data = json.loads(text)
        if isinstance(data, dict):
            data = data.get("table") or data.get("results") or data
        return [(int(row[0]), float(row[1])) if isinstance(row, (list, tuple))
                else (int(row["N"]), float(row["count"]))
                for row in data]
    except (json.JSONDecodeError, TypeError, KeyError, IndexError):
        pass
    rows = []
    for line in text.strip().splitlines():
        parts = [p.strip() for p in line.split(",")]
        if parts[0].lower() in ("n", "#n"):
            continue
        rows.append((int(parts[0]), float(parts[-1])))
    return rows


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="finescale",
        description="Fine-scale statistics of real-valued vector sequences",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, spec=False, seed=False):
        if spec:
            p.add_argument("--spec", required=True, help="sequence spec JSON file")
        if seed:
            p.add_argument("--seed", type=int, default=0)
        p.add_argument("--threads", type=int, default=None,
                       help="worker count; 0 = all cores (default: FINESCALE_THREADS or 1)")
        p.add_argument("--out", default="-", help="output file, - for stdout")
        p.add_argument("--format", choices=("json", "csv"), default="json")

    p = sub.add_parser("materialize", help="evaluate the component generators")
    common(p, spec=True)
    p.add_argument("--N", type=int, default=None, help="override the spec's N")

    p = sub.add_parser("paircorr", help="pair correlation R2 over an s-grid")
    common(p, spec=True, seed=True)
    p.add_argument("--s", action="append", type=float, required=True)
    p.add_argument("--alpha", default=None, help="explicit alpha, comma separated")
    p.add_argument("--draw-index", type=int, default=0)

    p = sub.add_parser("energy", help="additive-energy counts")
    common(p, spec=True)
    p.add_argument("--gamma", type=float, default=1.0)
    p.add_argument("--grid", default=None,
                   help="term-count grid N1,N2,... (table mode)")
    p.add_argument("--gamma-rule", choices=("constant", "inverse"), default="constant")
    p.add_argument("--component", type=int, default=None,
                   help="restrict to one component index")

    p = sub.add_parser("thm1-count", help="two-coefficient inequality count")
    common(p, spec=True)
    p.add_argument("--jmax", type=int, required=True)
    p.add_argument("--budget", type=int, default=None)

    p = sub.add_parser("selberg-check", help="build and verify a majorant/minorant pair")
    common(p)
    p.add_argument("--s", type=float, required=True)
    p.add_argument("--delta", type=float, required=True, help="window denominator")
    p.add_argument("--K", type=int, required=True)
    p.add_argument("--grid", type=int, default=10**5)
    p.add_argument("--coeffs-out", default=None, help="CSV coefficient dump (plus sign)")

    p = sub.add_parser("mu-sample", help="draws from the averaging measure")
    common(p, seed=True)
    p.add_argument("--samples", type=int, required=True)

    p = sub.add_parser("expectation", help="moment estimate of the pair statistic")
    common(p, spec=True, seed=True)
    p.add_argument("--s", type=float, required=True)
    p.add_argument("--samples", type=int, required=True)
    p.add_argument("--kind", choices=("indicator", "selberg"), default="indicator")
    p.add_argument("--t", type=int, default=2)
    p.add_argument("--sign", choices=("plus", "minus"), default="plus")
    p.add_argument("--alpha-mode", choices=("mu", "box", "quadrature"), default="mu")

    p = sub.add_parser("variance", help="variance estimate of the centered pair sum")
    common(p, spec=True, seed=True)
    p.add_argument("--s", type=float, required=True)
    p.add_argument("--samples", type=int, required=True)
    p.add_argument("--t", type=int, default=2)
    p.add_argument("--alpha-mode", choices=("mu", "box", "quadrature"), default="mu")

    p = sub.add_parser("slope", help="log-log exponent fit")
    common(p)
    p.add_argument("--table", default=None, help="precomputed (N,count) table file")
    p.add_argument("--spec", default=None)
    p.add_argument("--grid", default=None)
    p.add_argument("--gamma", type=float, default=1.0)
    p.add_argument("--gamma-rule", choices=("constant", "inverse"), default="constant")
    p.add_argument("--component", type=int, default=0)

    p = sub.add_parser("verify", help="growth-hypothesis verdict (exit 3 on fail)")
    common(p, spec=False)
    p.add_argument("--theorem", choices=("1", "2", "3"), required=True)
    p.add_argument("--spec", default=None)
    p.add_argument("--table", default=None)
    p.add_argument("--r", type=int, default=None, help="rank (required with --table)")
    p.add_argument("--grid", default=None)
    p.add_argument("--delta-margin", type=float, default=0.05)
    p.add_argument("--eta", type=float, default=0.1)
    p.add_argument("--delta", type=float, default=0.1)
    p.add_argument("--gamma", type=float, default=1.0)

    p = sub.add_parser("sweep", help="PPC reports over an N-grid of draws")
    common(p, spec=True, seed=True)
    p.add_argument("--grid", required=True)
    p.add_argument("--s", action="append", type=float, required=True)
    p.add_argument("--n-alpha", type=int, required=True)

    return parser


def _cmd_materialize(args, params):
    spec = load_spec(args.spec)
    if args.N is not None:
        import dataclasses

        spec = dataclasses.replace(spec, N=args.N)
    comps = materialize_all(spec)
    results = {
        "spec": spec_to_dict(spec),
        "components": [
            {
                "index": i,
                "values": cv.values.tolist(),
                "min_gap": cv.min_gap,
                "magnitude_max": cv.magnitude_max,
            }
            for i, cv in enumerate(comps)
        ],
    }
    return results, None, EXIT_OK


def _cmd_paircorr(args, params):
    spec = load_spec(args.spec)
    if args.alpha is not None:
        alpha = np.asarray(_parse_float_list(args.alpha))
        seed = None
    else:
        sampler = MuSampler(args.seed)
        alpha = sample_alpha_at(sampler, args.draw_index, spec.r)
        seed = args.seed
    proj = project_values(spec, alpha)
    rep = pair_correlation(proj, spec.N, spec.r, sorted(args.s))
    import dataclasses

    rep = dataclasses.replace(
        rep, alpha=tuple(alpha.tolist()), seed=seed, draw_index=args.draw_index
    )
    return rep.to_dict(), None, EXIT_OK


def _cmd_energy(args, params):
    spec = load_spec(args.spec)
    comps = list(enumerate(spec.components))
    if args.component is not None:
        comps = [(args.component, spec.components[args.component])]
    if args.grid is not None:
        grid = _parse_int_list(args.grid)
        rows = []
        for idx, comp in comps:
            for rep in energy_table(comp, grid, args.gamma_rule, args.gamma):
                d = rep.to_dict()
                d["component"] = idx
                rows.append(d)
        csv_lines = ["N,gamma,count"] + [
            f"{d['N']},{d['gamma']!r},{d['count']}" for d in rows
        ]
        return {"table": rows}, "\n".join(csv_lines) + "\n", EXIT_OK
    reports = []
    values = materialize_all(spec)
    for idx, comp in comps:
        rep = additive_energy(values[idx].values, args.gamma, component_index=idx)
        reports.append(rep.to_dict())
    results = {"reports": reports}
    if len(reports) == 1:
        results["count"] = reports[0]["count"]
    return results, None, EXIT_OK


def _cmd_thm1(args, params):
    spec = load_spec(args.spec)
    cfg = Thm1Config(args.jmax) if args.budget is None else Thm1Config(args.jmax, args.budget)
    count = thm1_count(spec, cfg)
    return {"count": count, "jmax": args.jmax}, None, EXIT_OK


def _cmd_selberg(args, params):
    minus, plus = build_pair(args.s, args.delta, args.K)
    report = verify_sandwich(minus, plus, args.grid)
    if args.coeffs_out:
        with open(args.coeffs_out, "w") as fh:
            fh.write(coeffs_to_csv(plus))
    w = plus.half_width
    results = {
        "half_width": w,
        "K": args.K,
        "c0_plus": plus.coeffs[plus.K].real,
        "c0_minus": minus.coeffs[minus.K].real,
        "c0_plus_target": 2 * w + 1.0 / (args.K + 1),
        "c0_minus_target": 2 * w - 1.0 / (args.K + 1),
        "sandwich": report.to_dict(),
    }
    code = EXIT_OK if report.passed else EXIT_VERIFICATION
    return results, None, code


def _cmd_mu_sample(args, params):
    sampler = MuSampler(args.seed)
    draws = sampler.draw(args.samples)
    csv_lines = ["index,value"] + [f"{i},{v!r}" for i, v in enumerate(draws.tolist())]
    results = {
        "samples": draws.tolist(),
        "density_at_zero": mu_density(0.0),
    }
    return results, "\n".join(csv_lines) + "\n", EXIT_OK


def _cmd_expectation(args, params):
    spec = load_spec(args.spec)
    sampler = MuSampler(args.seed)
    threads = args.threads
    if args.kind == "indicator":
        rep = indicator_expectation(
            spec, args.s, args.samples, sampler, threads=threads,
            alpha_mode=args.alpha_mode,
        )
    else:
        rep = selberg_expectation(
            spec, args.s, args.t, args.samples, sampler, sign=args.sign,
            threads=threads, alpha_mode=args.alpha_mode,
        )
    return rep.to_dict(), None, EXIT_OK


def _cmd_variance(args, params):
    spec = load_spec(args.spec)
    sampler = MuSampler(args.seed)
    rep = variance_estimate(
        spec, args.s, args.t, args.samples, sampler, threads=args.threads,
        alpha_mode=args.alpha_mode,
    )
    return rep.to_dict(), None, EXIT_OK


def _cmd_slope(args, params):
    if args.table is not None:
        table = _load_table(args.table)
    elif args.spec is not None and args.grid is not None:
        spec = load_spec(args.spec)
        comp = spec.components[args.component]
        reports = energy_table(comp, _parse_int_list(args.grid), args.gamma_rule, args.gamma)
        table = [(rep.N, rep.count) for rep in reports]
    else:
        raise _UsageError("slope needs --table or (--spec and --grid)")
    fit = fit_exponent(table)
    return {"fit": fit.to_dict(), "table": [list(p) for p in table]}, None, EXIT_OK


def _cmd_verify(args, params):
    theorem = f"T{args.theorem}"
    if args.table is not None:
        if args.r is None:
            raise _UsageError("--table verification needs --r")
        verdict = verdict_from_table(
            theorem, args.r, _load_table(args.table),
            delta_margin=args.delta_margin, eta=args.eta, delta=args.delta,
        )
    elif args.spec is not None:
        if args.grid is None:
            raise _UsageError("--spec verification needs --grid")
        spec = load_spec(args.spec)
        verdict = check_hypotheses(
            spec, theorem, _parse_int_list(args.grid),
            delta_margin=args.delta_margin, eta=args.eta, delta=args.delta,
            gamma=args.gamma,
        )
    else:
        raise _UsageError("verify needs --spec or --table")
    code = EXIT_OK if verdict.passed else EXIT_VERIFICATION
    return verdict.to_dict(), None, code


def _cmd_sweep(args, params):
    spec = load_spec(args.spec)
    sampler = MuSampler(args.seed)
    reports = ppc_sweep(
        spec, _parse_int_list(args.grid), sorted(args.s), args.n_alpha,
        sampler, threads=args.threads,
    )
    return {
        "reports": [rep.to_dict() for rep in reports],
        "summary": sweep_summary(reports),
    }, None, EXIT_OK


_HANDLERS = {
    "materialize": _cmd_materialize,
    "paircorr": _cmd_paircorr,
    "energy": _cmd_energy,
    "thm1-count": _cmd_thm1,
    "selberg-check": _cmd_selberg,
    "mu-sample": _cmd_mu_sample,
    "expectation": _cmd_expectation,
    "variance": _cmd_variance,
    "slope": _cmd_slope,
    "verify": _cmd_verify,
    "sweep": _cmd_sweep,
}


def run(argv) -> int:
    """Parse argv, run the subcommand, emit the report, return the exit
    code."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK

    # resolved worker count is logged, not embedded in the report, so
    # identical argv + seed stays byte-identical across --threads
    workers = resolve_threads(getattr(args, "threads", 1))
    print(f"finescale {args.command}: {workers} worker(s)", file=sys.stderr)

    params = {
        k: v
        for k, v in sorted(vars(args).items())
        if k not in ("command", "out", "format", "threads") and v is not None
    }
    manifest = _manifest(args.command, params, getattr(args, "seed", None))
    started = time.perf_counter()
    try:
        results, csv_text, code = _HANDLERS[args.command](args, params)
        error = None
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FinescaleError as exc:
        results, csv_text = None, None
        error = {"type": type(exc).__name__, "message": str(exc)}
        code = EXIT_GUARD
    manifest["timing_ms"] = int(round((time.perf_counter() - started) * 1000))
    report = {"manifest": manifest, "results": results, "error": error}
    try:
        _emit(report, args.out, args.format, csv_text)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return code


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
