"""Additive-energy and two-coefficient Diophantine solution counters.

The additive energy of v[1..N] at threshold gamma is the number of
ordered index quadruples (n1, n2, n3, n4) with
|v[n1] - v[n2] + v[n3] - v[n4]| < gamma (strict).  Rewriting the
expression as (v[n1] + v[n3]) - (v[n2] + v[n4]) turns the count into
"ordered pairs of pair-sums at distance < gamma", which a single sort
of the N^2 pair-sums and one sweep resolve in O(N^2 log N).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    BudgetExceeded,
    CapacityGuard,
    InvalidSpec,
    TooLarge,
    ZeroDifference,
)
from .sequences import ComponentSpec, VectorSequenceSpec, materialize, materialize_all

# N^2 pair-sums are materialized; 2^26 doubles (512 MiB) caps N at 8192.
PAIR_SUM_CAP = 2**26

BRUTE_FORCE_MAX_N = 64

THM1_DEFAULT_BUDGET = 10**8


@dataclass(frozen=True)
class EnergyReport:
    N: int
    gamma: float
    count: int
    component_index: int = 0
    method: str = "fast"

    def to_dict(self) -> dict:
        return {
            "N": self.N,
            "gamma": self.gamma,
            "count": self.count,
            "component": self.component_index,
            "method": self.method,
        }


@dataclass(frozen=True)
class Thm1Config:
    """Coefficient cap and probe budget for the two-coefficient count."""

    Jmax: int
    budget: int = THM1_DEFAULT_BUDGET

    def __post_init__(self):
        if self.Jmax < 1:
            raise InvalidSpec("Jmax must be >= 1")


def _check_gamma(gamma: float) -> float:
    gamma = float(gamma)
    if not (0.0 < gamma <= 1.0):
        raise InvalidSpec(f"gamma must lie in (0, 1], got {gamma}")
    return gamma


def additive_energy(
    values, gamma: float, component_index: int = 0, cap: int = PAIR_SUM_CAP
) -> EnergyReport:
    """Ordered quadruples with |v[n1]-v[n2]+v[n3]-v[n4]| < gamma.

    Sorts the N^2 pair-sums once; per pair-sum the partners inside the
    open window are located by bisection, which is the sorted-sweep
    count without materializing matches.
    """
    gamma = _check_gamma(gamma)
    v = np.asarray(values, dtype=np.float64).ravel()
    n = v.size
    if n < 1:
        raise InvalidSpec("empty value list")
    if n * n > cap:
        raise CapacityGuard(f"N^2 = {n * n} pair-sums exceed cap {cap}")
    sums = np.sort((v[:, None] + v[None, :]).ravel(), kind="stable")
    lo = np.searchsorted(sums, sums - gamma, side="right")
    hi = np.searchsorted(sums, sums + gamma, side="left")
    count = int(np.sum(hi - lo))
    return EnergyReport(
        N=n, gamma=gamma, count=count, component_index=component_index, method="fast"
    )


def additive_energy_bruteforce(
    values, gamma: float, component_index: int = 0
) -> EnergyReport:
    """Independent oracle: direct enumeration of all N^4 quadruples."""
    gamma = _check_gamma(gamma)
    v = np.asarray(values, dtype=np.float64).ravel()
    n = v.size
    if n > BRUTE_FORCE_MAX_N:
        raise TooLarge(f"brute force capped at N={BRUTE_FORCE_MAX_N}, got {n}")
    if n < 1:
        raise InvalidSpec("empty value list")
    count = 0
    for n1 in range(n):
        expr = (
            v[n1]
            - v[:, None, None]
            + v[None, :, None]
            - v[None, None, :]
        )
        count += int(np.count_nonzero(np.abs(expr) < gamma))
    return EnergyReport(
        N=n, gamma=gamma, count=count, component_index=component_index, method="brute"
    )


def energy_table(
    spec: ComponentSpec, N_grid, gamma_rule="constant", gamma: float = 1.0
) -> list:
    """One fast EnergyReport per N; N counts sequence terms (indices
    0..N-1 of the materialized component).

    gamma_rule "constant" uses the fixed gamma; "inverse" sets
    gamma = 1/N per grid point.
    """
    N_grid = [int(N) for N in N_grid]
    if any(b <= a for a, b in zip(N_grid, N_grid[1:])):
        raise InvalidSpec("N grid must be strictly ascending")
    if gamma_rule not in ("constant", "inverse"):
        raise InvalidSpec(f"unknown gamma rule {gamma_rule!r}")
    out = []
    for N in N_grid:
        g = gamma if gamma_rule == "constant" else 1.0 / N
        vals = materialize(spec, N - 1).values if N >= 2 else materialize(spec, 1).values[:1]
        out.append(additive_energy(vals, g))
    return out


def _pair_differences(spec: VectorSequenceSpec):
    """Per-component differences a_i(x_i) - a_i(y_i) for every ordered
    pair of distinct lattice points, as an array of shape (P, r).

    Components where the two points share a coordinate contribute an
    exact zero; a zero from distinct coordinates would contradict
    strict monotonicity and raises ZeroDifference.
    """
    comps = materialize_all(spec)
    M = (spec.N + 1) ** spec.r
    idx = np.indices((spec.N + 1,) * spec.r).reshape(spec.r, M)
    x = np.repeat(np.arange(M), M)
    y = np.tile(np.arange(M), M)
    keep = x != y
    x, y = x[keep], y[keep]
    rho = np.empty((x.size, spec.r), dtype=np.float64)
    same = np.empty((x.size, spec.r), dtype=bool)
    for i, cv in enumerate(comps):
        xi, yi = idx[i][x], idx[i][y]
        rho[:, i] = cv.values[xi] - cv.values[yi]
        same[:, i] = xi == yi
    if np.any((rho == 0.0) & ~same):
        raise ZeroDifference("zero pair difference at distinct coordinates")
    return rho


def thm1_count(spec: VectorSequenceSpec, config: Thm1Config) -> int:
    """Solutions (j1, j2, x, y, z, w) of
    max_i |j1*(a_i(x_i)-a_i(y_i)) - j2*(a_i(z_i)-a_i(w_i))| < 1
    with 1 <= j1, j2 <= Jmax and x != y, z != w in the lattice box.

    For each (z, w) pair and each j2, the admissible j1 form an open
    interval per component; the count is the number of integers in the
    intersection, accumulated over all (x, y) difference tuples.
    """
    rho = _pair_differences(spec)
    P = rho.shape[0]
    if P * P * config.Jmax > config.budget:
        raise BudgetExceeded(
            f"P^2 * Jmax = {P * P * config.Jmax} exceeds budget {config.budget}"
        )
    jmax = config.Jmax
    total = 0
    # rho_u: divisor side (j1 coefficient); rho_v: target side.
    with np.errstate(divide="ignore", invalid="ignore"):
        for j2 in range(1, jmax + 1):
            target_lo = j2 * rho - 1.0  # (P, r)
            target_hi = j2 * rho + 1.0
            for u in range(P):
                ru = rho[u]  # (r,)
                lo = np.full(P, -np.inf)
                hi = np.full(P, np.inf)
                feasible = np.ones(P, dtype=bool)
                for i in range(spec.r):
                    if ru[i] == 0.0:
                        # j1-free constraint |j2 * rho_v_i| < 1
                        feasible &= np.abs(j2 * rho[:, i]) < 1.0
                        continue
                    a = target_lo[:, i] / ru[i]
                    b = target_hi[:, i] / ru[i]
                    if ru[i] < 0.0:
                        a, b = b, a
                    np.maximum(lo, a, out=lo)
                    np.minimum(hi, b, out=hi)
                # integers strictly inside (lo, hi), clamped to [1, jmax];
                # floor(lo)+1 and ceil(hi)-1 exclude integral endpoints
                first = np.floor(lo) + 1.0
                last = np.ceil(hi) - 1.0
                first = np.maximum(first, 1.0)
                last = np.minimum(last, float(jmax))
                n_int = np.maximum(last - first + 1.0, 0.0)
                total += int(n_int[feasible].sum())
    return total


def ordered_distinct_pairs(spec: VectorSequenceSpec) -> int:
    """Number P of ordered pairs of distinct lattice points; the
    diagonal solutions give thm1_count >= Jmax * P."""
    M = (spec.N + 1) ** spec.r
    return M * (M - 1)
