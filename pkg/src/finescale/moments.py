"""Monte Carlo moments of the pair statistic over the averaging measure.

Three estimators share one shape: draw alpha, evaluate a per-draw
functional of the projected pair differences, and average.

* indicator_expectation  mean of R2(s) over draws
* selberg_expectation    mean of the smoothed pair sum
                         (1/N^r) sum_{x != y} f(alpha.(a(x)-a(y)))
* variance_estimate      mean of D(alpha)^2 with the centered kernel
                         h = f - c_0 in place of f

The smoothed pair sum never enumerates pairs: with T_j = sum_x e(j
theta_x) and P lattice points, sum_{x != y} f(theta_x - theta_y)
= sum_j c_j (|T_j|^2 - P), and the T_j come from iterated products of
e(theta_x).

A deterministic "quadrature" alpha mode replaces the draws with
density-weighted midpoint nodes on a truncated axis (tensorized for
r > 1); it is the oracle mode for tiny instances.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .compensated import fold_unit, fractional_product
from .errors import BudgetExceeded, InvalidSpec
from .measure_mu import MuSampler, quadrature_nodes, sample_alpha_at, sample_box_at
from .parallel import parallel_map
from .selberg import DEGREE_CAP, SelbergPolynomial, build_selberg
from .sequences import VectorSequenceSpec, materialize_all
from .statistics import pair_correlation, project_values

PAIR_EVAL_BUDGET = 5 * 10**7  # lattice points x polynomial degree

QUAD_NODES_1D = 10**4
QUAD_NODES_2D = 200
QUAD_BOX = 50.0


@dataclass(frozen=True)
class MomentReport:
    kind: str  # expectation_indicator | expectation_selberg | variance
    estimate: float
    std_error: float
    n_samples: int
    N: int
    r: int
    s: float
    t: int | None
    seed: int | None
    alpha_mode: str = "mu"
    c0_target: float | None = None  # N^r * c_0, the smoothed-sum reference
    c_empirical: float | None = None  # N * |estimate - c0_target|

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "estimate": self.estimate,
            "std_error": self.std_error,
            "n_samples": self.n_samples,
            "N": self.N,
            "r": self.r,
            "s": self.s,
            "t": self.t,
            "seed": self.seed,
            "alpha_mode": self.alpha_mode,
            "c0_target": self.c0_target,
            "c_empirical": self.c_empirical,
        }


def _alpha_plan(spec, sampler, n_samples, alpha_mode, quad_nodes):
    """List of (alpha, weight) pairs; weights sum to 1."""
    if alpha_mode == "mu":
        if n_samples < 2:
            raise InvalidSpec("need n_samples >= 2 for a standard error")
        alphas = [sample_alpha_at(sampler, k, spec.r) for k in range(n_samples)]
        return [(a, 1.0 / n_samples) for a in alphas]
    if alpha_mode == "box":
        if n_samples < 2:
            raise InvalidSpec("need n_samples >= 2 for a standard error")
        alphas = [sample_box_at(sampler, k, spec.r) for k in range(n_samples)]
        return [(a, 1.0 / n_samples) for a in alphas]
    if alpha_mode == "quadrature":
        per_axis = quad_nodes or (QUAD_NODES_1D if spec.r == 1 else QUAD_NODES_2D)
        nodes, weights = quadrature_nodes(per_axis, QUAD_BOX)
        plan = []
        for combo in itertools.product(range(per_axis), repeat=spec.r):
            a = np.array([nodes[i] for i in combo])
            wgt = float(np.prod([weights[i] for i in combo]))
            plan.append((a, wgt))
        total = sum(w for _, w in plan)
        return [(a, w / total) for a, w in plan]
    raise InvalidSpec(f"unknown alpha mode {alpha_mode!r}")


def _combine(values, plan, square=False):
    """Weighted mean and (for equal-weight draws) its standard error."""
    vals = np.asarray(values, dtype=np.float64)
    if square:
        vals = vals * vals
    weights = np.asarray([w for _, w in plan], dtype=np.float64)
    mean = float(np.sum(weights * vals))
    if np.allclose(weights, weights[0]) and vals.size >= 2:
        se = float(np.std(vals, ddof=1) / np.sqrt(vals.size))
    else:
        se = 0.0
    return mean, se


def indicator_expectation(
    spec: VectorSequenceSpec,
    s: float,
    n_samples: int,
    sampler: MuSampler,
    threads: int | None = 1,
    alpha_mode: str = "mu",
    quad_nodes: int | None = None,
) -> MomentReport:
    """Mean over alpha draws of R2(s)."""
    plan = _alpha_plan(spec, sampler, n_samples, alpha_mode, quad_nodes)

    def one(item):
        alpha, _ = item
        proj = project_values(spec, alpha)
        rep = pair_correlation(proj, spec.N, spec.r, [s])
        return rep.r2_values[0]

    vals = parallel_map(one, plan, threads)
    est, se = _combine(vals, plan)
    return MomentReport(
        kind="expectation_indicator",
        estimate=est,
        std_error=se,
        n_samples=len(plan) if alpha_mode != "mu" else n_samples,
        N=spec.N,
        r=spec.r,
        s=float(s),
        t=None,
        seed=sampler.seed,
        alpha_mode=alpha_mode,
    )


def _projected_theta(spec: VectorSequenceSpec, alpha: np.ndarray) -> np.ndarray:
    """Unsorted fractional parts of alpha . a(x) over the lattice box."""
    comps = materialize_all(spec)
    per_comp = [
        fractional_product(float(a), cv.values) for a, cv in zip(alpha, comps)
    ]
    acc = per_comp[0]
    for g in per_comp[1:]:
        acc = acc[..., None] + g
    return fold_unit(acc.ravel())


def _smoothed_pair_sum(
    poly: SelbergPolynomial, theta: np.ndarray, norm: float, drop_c0: bool
) -> float:
    """(1/norm) sum_{x != y} f(theta_x - theta_y) via |T_j|^2."""
    P = theta.size
    z = np.exp(2j * np.pi * theta)
    cj = poly.coeffs[poly.K + 1 :].real  # c_1..c_K (real symmetric)
    acc = 0.0
    cur = z.copy()
    for j in range(poly.K):
        Tj = cur.sum()
        acc += cj[j] * ((Tj.real * Tj.real + Tj.imag * Tj.imag) - P)
        cur *= z
    total = 2.0 * acc
    if not drop_c0:
        c0 = poly.coeffs[poly.K].real
        total += c0 * (P * P - P)
    return total / norm


def _selberg_setup(spec, t):
    K = t * spec.N**spec.r
    if K > DEGREE_CAP:
        raise BudgetExceeded(f"degree t*N^r = {K} exceeds cap {DEGREE_CAP}")
    P = (spec.N + 1) ** spec.r
    if P * K > PAIR_EVAL_BUDGET:
        raise BudgetExceeded(
            f"lattice points x degree = {P * K} exceeds budget {PAIR_EVAL_BUDGET}"
        )
    norm = float(spec.N) ** spec.r
    return K, norm


def selberg_expectation(
    spec: VectorSequenceSpec,
    s: float,
    t: int,
    n_samples: int,
    sampler: MuSampler,
    sign: str = "plus",
    threads: int | None = 1,
    alpha_mode: str = "mu",
    quad_nodes: int | None = None,
    poly: SelbergPolynomial | None = None,
) -> MomentReport:
    """Mean over alpha draws of the smoothed pair sum; the reference
    value N^r * c_0 and the implied O(1/N) constant are reported."""
    K, norm = _selberg_setup(spec, t)
    if poly is None:
        poly = build_selberg(s, norm, K, sign)
    plan = _alpha_plan(spec, sampler, n_samples, alpha_mode, quad_nodes)

    def one(item):
        alpha, _ = item
        return _smoothed_pair_sum(poly, _projected_theta(spec, alpha), norm, False)

    vals = parallel_map(one, plan, threads)
    est, se = _combine(vals, plan)
    c0_target = norm * poly.coeffs[poly.K].real
    return MomentReport(
        kind="expectation_selberg",
        estimate=est,
        std_error=se,
        n_samples=len(plan) if alpha_mode != "mu" else n_samples,
        N=spec.N,
        r=spec.r,
        s=float(s),
        t=t,
        seed=sampler.seed,
        alpha_mode=alpha_mode,
        c0_target=c0_target,
        c_empirical=spec.N * abs(est - c0_target),
    )


def variance_estimate(
    spec: VectorSequenceSpec,
    s: float,
    t: int,
    n_samples: int,
    sampler: MuSampler,
    sign: str = "plus",
    threads: int | None = 1,
    alpha_mode: str = "mu",
    quad_nodes: int | None = None,
) -> MomentReport:
    """Mean over alpha draws of D(alpha)^2, where D is the centered
    smoothed pair sum (constant term removed)."""
    K, norm = _selberg_setup(spec, t)
    poly = build_selberg(s, norm, K, sign)
    plan = _alpha_plan(spec, sampler, n_samples, alpha_mode, quad_nodes)

    def one(item):
        alpha, _ = item
        return _smoothed_pair_sum(poly, _projected_theta(spec, alpha), norm, True)

    vals = parallel_map(one, plan, threads)
    est, se = _combine(vals, plan, square=True)
    return MomentReport(
        kind="variance",
        estimate=est,
        std_error=se,
        n_samples=len(plan) if alpha_mode != "mu" else n_samples,
        N=spec.N,
        r=spec.r,
        s=float(s),
        t=t,
        seed=sampler.seed,
        alpha_mode=alpha_mode,
    )
