"""Render PPC curves, log-log slope fits, and variance decay from
finescale report files.

Reports follow the CLI schema {"manifest": ..., "results": ..., "error":
...}.  Output files are named <kind>_<hash>.<ext>, where the hash digests
the manifests with timing stripped, so re-rendering identical reports
reuses the same names.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

KINDS = ("ppc", "slope", "variance")


class RenderError(Exception):
    pass


class SchemaMismatch(RenderError):
    """Report file does not follow the CLI report schema."""


class EmptyReport(RenderError):
    """No reports were supplied."""


@dataclass(frozen=True)
class FigureRequest:
    report_paths: tuple
    out_dir: str
    kind: str


def load_report(path) -> dict:
    try:
        with open(path) as fh:
            report = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise SchemaMismatch(f"{path}: {exc}") from exc
    if not isinstance(report, dict) or "manifest" not in report or "results" not in report:
        raise SchemaMismatch(f"{path}: missing manifest/results keys")
    if report.get("error"):
        raise SchemaMismatch(f"{path}: report carries an error payload")
    if not isinstance(report["results"], dict):
        raise SchemaMismatch(f"{path}: results is not an object")
    return report


def manifest_hash(reports) -> str:
    digest = hashlib.sha256()
    for report in reports:
        manifest = dict(report["manifest"])
        manifest.pop("timing_ms", None)
        digest.update(json.dumps(manifest, sort_keys=True).encode())
    return digest.hexdigest()[:12]


def _ppc_rows(results: dict) -> list:
    if "reports" in results:  # sweep-shaped
        return list(results["reports"])
    if "r2" in results:  # single paircorr report
        return [results]
    raise SchemaMismatch("ppc report carries neither 'reports' nor 'r2'")


def build_figure(kind: str, reports: list):
    """Figure plus the annotation strings drawn onto it (annotations
    quote report fields; nothing is recomputed)."""
    annotations = []
    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    if kind == "ppc":
        rows = [row for rep in reports for row in _ppc_rows(rep["results"])]
        if not rows:
            raise SchemaMismatch("no PPC rows in the given reports")
        s_all = sorted({float(s) for row in rows for s in row["s"]})
        for row in rows:
            ax.plot(row["s"], row["r2"], "o-", alpha=0.35, lw=0.9, color="tab:blue")
        ax.plot(s_all, [2 * s for s in s_all], "k--", lw=1.6, label="reference 2s")
        worst = max(rows, key=lambda row: row["deviation"])
        annotations.append(f"max deviation = {worst['deviation']:.4f}")
        ax.set_xlabel("s")
        ax.set_ylabel("R2(s)")
        ax.set_title(f"pair correlation, {len(rows)} draw(s)")
        ax.legend()
    elif kind == "slope":
        for rep in reports:
            results = rep["results"]
            fit = results.get("fit") or results.get("details", {}).get("fit")
            if fit is None:
                raise SchemaMismatch("slope report carries no fit object")
            pts = fit["points"]
            ax.plot([p[0] for p in pts], [p[1] for p in pts], "o", color="tab:blue")
            xs = [min(p[0] for p in pts), max(p[0] for p in pts)]
            ax.plot(
                xs,
                [fit["exponent"] * x + fit["intercept"] for x in xs],
                "-",
                color="tab:orange",
            )
            annotations.append(f"exponent = {fit['exponent']:.2f}")
            if "threshold" in results:
                annotations.append(f"threshold = {results['threshold']:.2f}")
        ax.set_xlabel("log N")
        ax.set_ylabel("log count")
        ax.set_title("energy growth")
    elif kind == "variance":
        rows = sorted(
            (rep["results"] for rep in reports), key=lambda row: row["N"]
        )
        if any("estimate" not in row for row in rows):
            raise SchemaMismatch("variance report lacks an estimate field")
        ax.errorbar(
            [row["N"] for row in rows],
            [row["estimate"] for row in rows],
            yerr=[row["std_error"] for row in rows],
            fmt="o-",
            capsize=3,
        )
        ax.set_xscale("log")
        ax.set_yscale("log")
        annotations.append(f"final estimate = {rows[-1]['estimate']:.4g}")
        ax.set_xlabel("N")
        ax.set_ylabel("variance estimate")
        ax.set_title("variance decay")
    else:
        raise SchemaMismatch(f"unknown figure kind {kind!r} (use one of {KINDS})")
    for i, text in enumerate(annotations):
        ax.text(
            0.02,
            0.95 - 0.07 * i,
            text,
            transform=ax.transAxes,
            fontsize=9,
            va="top",
        )
    fig.tight_layout()
    return fig, annotations


def render(request: FigureRequest) -> list:
    """Write <kind>_<hash>.png and .svg; returns the written paths."""
    if not request.report_paths:
        raise EmptyReport("no report files given")
    reports = [load_report(p) for p in request.report_paths]
    fig, _ = build_figure(request.kind, reports)
    out_dir = Path(request.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    stem = f"{request.kind}_{manifest_hash(reports)}"
    paths = []
    for ext in ("png", "svg"):
        target = out_dir / f"{stem}.{ext}"
        fig.savefig(target)
        paths.append(target)
    plt.close(fig)
    return paths
