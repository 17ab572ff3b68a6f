"""Pair correlation of projected lattice values on the unit torus.

Every lattice point x in {0..N}^r is sent to the fractional part of
alpha . a(x); the statistic R2(s) counts ordered pairs whose torus
distance falls inside the closed window [-s/N^r, s/N^r], normalized by
N^r.  Counting walks the sorted fractional parts once per window, with
the head of the array duplicated at +1 to absorb the wraparound.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .compensated import fold_unit, fractional_product, precision_bound
from .errors import CapacityGuard, InvalidSpec, WindowTooWide
from .sequences import VectorSequenceSpec, materialize_all

# (N+1)^r fractional parts are materialized in memory; 2^24 doubles
# (128 MiB) is the desk-scale ceiling.
PROJECTION_CAP = 2**24


@dataclass(frozen=True)
class ProjectedValues:
    """Sorted fractional parts of alpha . a(x) over the lattice box."""

    fracs: np.ndarray
    count: int
    precision_bound: float


@dataclass(frozen=True)
class PPCReport:
    """R2 values over an s-grid for one projection draw."""

    N: int
    r: int
    s_grid: tuple
    r2_values: tuple
    deviation: float
    alpha: tuple
    seed: int | None = None
    draw_index: int | None = None

    def to_dict(self) -> dict:
        return {
            "N": self.N,
            "r": self.r,
            "s": list(self.s_grid),
            "r2": list(self.r2_values),
            "deviation": self.deviation,
            "alpha": list(self.alpha),
            "seed": self.seed,
            "draw_index": self.draw_index,
        }


def torus_distance(t):
    """Distance from t to the nearest integer, in [0, 1/2]."""
    t = np.asarray(t, dtype=np.float64)
    d = np.abs(t - np.round(t))
    return float(d) if d.ndim == 0 else d


def project_values(spec: VectorSequenceSpec, alpha) -> ProjectedValues:
    """Fractional parts of alpha . a(x) for every x in {0..N}^r, sorted.

    Per-component products go through the compensated kernel, so each
    fractional part is accurate to ~2^-52 even at the 2^45 magnitude cap.
    """
    alpha = np.asarray(alpha, dtype=np.float64).ravel()
    if alpha.size != spec.r:
        raise InvalidSpec(f"alpha has {alpha.size} coordinates, spec has r={spec.r}")
    count = (spec.N + 1) ** spec.r
    if count > PROJECTION_CAP:
        raise CapacityGuard(f"(N+1)^r = {count} exceeds projection cap {PROJECTION_CAP}")

    comps = materialize_all(spec)
    per_comp = [
        fractional_product(float(a), cv.values) for a, cv in zip(alpha, comps)
    ]
    acc = per_comp[0]
    for g in per_comp[1:]:
        acc = acc[..., None] + g  # broadcast to the next lattice axis
    fracs = fold_unit(acc.ravel())
    fracs.sort(kind="stable")
    return ProjectedValues(
        fracs=fracs, count=count, precision_bound=precision_bound(spec.r)
    )


def _window_counts(fracs: np.ndarray, w: float) -> int:
    """Ordered pairs (u != v) with torus_distance(fracs[u]-fracs[v]) <= w.

    For w < 1/2 exactly one of the two circular arcs of an unordered
    pair fits the window, so the ordered count is twice the number of
    forward-arc hits.  The head of the sorted array is replayed at +1
    so forward arcs can cross the wrap point.
    """
    n = fracs.size
    ext = np.concatenate([fracs, fracs + 1.0])
    # first extended position whose value exceeds fracs[i] + w; closed
    # window, so boundary ties stay inside (side="right")
    hi = np.searchsorted(ext, fracs + w, side="right")
    forward = hi - np.arange(1, n + 1)
    return 2 * int(forward.sum())


def pair_correlation(
    proj: ProjectedValues, N: int, r: int, s_grid
) -> PPCReport:
    """R2 over an ascending grid of window parameters s.

    R2(s) = (1/N^r) * #{ordered pairs at torus distance <= s/N^r}.
    The divisor is N^r even though the box holds (N+1)^r points.
    """
    s_grid = [float(s) for s in s_grid]
    if not s_grid:
        raise InvalidSpec("s grid is empty")
    if any(s <= 0 for s in s_grid):
        raise InvalidSpec("s values must be positive")
    if any(b < a for a, b in zip(s_grid, s_grid[1:])):
        raise InvalidSpec("s grid must be ascending")
    norm = float(N) ** r
    r2 = []
    for s in s_grid:
        w = s / norm
        if w >= 0.5:
            raise WindowTooWide(f"window s/N^r = {w} >= 1/2 (s={s}, N={N}, r={r})")
        r2.append(_window_counts(proj.fracs, w) / norm)
    deviation = max(abs(v - 2 * s) for v, s in zip(r2, s_grid))
    return PPCReport(
        N=N,
        r=r,
        s_grid=tuple(s_grid),
        r2_values=tuple(r2),
        deviation=deviation,
        alpha=(),
    )
