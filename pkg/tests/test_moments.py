import numpy as np
import pytest

from finescale.compensated import fold_unit
from finescale.errors import BudgetExceeded, InvalidSpec
from finescale.measure_mu import MuSampler, quadrature_nodes
from finescale.moments import (
    MomentReport,
    QUAD_BOX,
    indicator_expectation,
    selberg_expectation,
    variance_estimate,
)
from finescale.selberg import SelbergPolynomial, build_selberg, eval_trig
from finescale.sequences import Explicit, Power, VectorSequenceSpec, materialize_all
from finescale.statistics import torus_distance

PHI = (np.sqrt(5.0) - 1.0) / 2.0  # 0.618...


def lattice_theta(spec, alpha):
    """Plain-double reference projection (no compensation; fine for the
    tiny magnitudes used here)."""
    comps = [cv.values for cv in materialize_all(spec)]
    acc = np.zeros((1,) * spec.r)
    for axis, (a, vals) in enumerate(zip(alpha, comps)):
        shape = [1] * spec.r
        shape[axis] = vals.size
        acc = acc + (a * vals).reshape(shape)
    return fold_unit(acc.ravel())


def indicator_expectation_oracle(spec, s, n_nodes):
    """Deterministic oracle: density-weighted quadrature of a direct
    O(P^2) pair count per node."""
    nodes, weights = quadrature_nodes(n_nodes, QUAD_BOX)
    norm = float(spec.N) ** spec.r
    w = s / norm
    total, wsum = 0.0, 0.0
    for a, wt in zip(nodes, weights):
        th = lattice_theta(spec, [a])
        d = th[:, None] - th[None, :]
        td = np.abs(d - np.round(d))
        count = int(np.count_nonzero(td <= w)) - th.size
        total += wt * (count / norm)
        wsum += wt
    return total / wsum


def selberg_expectation_oracle(spec, s, t, n_nodes, sign="plus"):
    """Deterministic oracle: per-node direct double loop over ordered
    pairs with pointwise polynomial evaluation."""
    norm = float(spec.N) ** spec.r
    K = t * spec.N**spec.r
    poly = build_selberg(s, norm, K, sign)
    nodes, weights = quadrature_nodes(n_nodes, QUAD_BOX)
    total, wsum = 0.0, 0.0
    for a, wt in zip(nodes, weights):
        th = lattice_theta(spec, [a])
        acc = 0.0
        for i in range(th.size):
            for j in range(th.size):
                if i != j:
                    acc += eval_trig(poly, th[i] - th[j])
        total += wt * (acc / norm)
        wsum += wt
    return total / wsum


def tiny_spec():
    return VectorSequenceSpec(1, 2, (Explicit((0.0, PHI, 2.0 * PHI)),))


def test_indicator_zero_when_window_below_min_gap():
    spec = tiny_spec()
    rep = indicator_expectation(spec, 1e-7, 4, MuSampler(1))
    assert rep.estimate == 0.0
    assert rep.std_error == 0.0


def test_indicator_expectation_matches_quadrature_oracle():
    spec = tiny_spec()
    est = indicator_expectation(
        spec, 0.3, 0, MuSampler(0), alpha_mode="quadrature", quad_nodes=2000
    )
    oracle = indicator_expectation_oracle(spec, 0.3, 2000)
    assert est.estimate == pytest.approx(oracle, abs=1e-3)
    assert est.std_error == 0.0
    assert est.alpha_mode == "quadrature"


def test_selberg_expectation_matches_quadrature_oracle():
    spec = VectorSequenceSpec(1, 4, (Power(1.5),))
    est = selberg_expectation(
        spec, 1.0, 1, 0, MuSampler(0), alpha_mode="quadrature", quad_nodes=400
    )
    oracle = selberg_expectation_oracle(spec, 1.0, 1, 400)
    assert est.estimate == pytest.approx(oracle, abs=1e-3)


def test_variance_matches_quadrature_oracle():
    spec = VectorSequenceSpec(1, 3, (Power(1.5),))
    est = variance_estimate(
        spec, 0.8, 1, 0, MuSampler(0), alpha_mode="quadrature", quad_nodes=400
    )
    # independent path: E[D^2] with D the centered direct pair sum
    norm = float(spec.N) ** spec.r
    K = spec.N
    poly = build_selberg(0.8, norm, K, "plus")
    c0 = poly.coeffs[poly.K].real
    nodes, weights = quadrature_nodes(400, QUAD_BOX)
    total, wsum = 0.0, 0.0
    for a, wt in zip(nodes, weights):
        th = lattice_theta(spec, [a])
        acc = 0.0
        for i in range(th.size):
            for j in range(th.size):
                if i != j:
                    acc += eval_trig(poly, th[i] - th[j]) - c0
        total += wt * (acc / norm) ** 2
        wsum += wt
    assert est.estimate == pytest.approx(total / wsum, abs=1e-3)


def test_constant_polynomial_gives_exact_pair_count():
    spec = VectorSequenceSpec(1, 3, (Power(1.5),))
    v = 0.375
    K = 2 * spec.N
    coeffs = np.zeros(2 * K + 1, dtype=np.complex128)
    coeffs[K] = v
    poly = SelbergPolynomial("plus", K, 0.1, coeffs)
    rep = selberg_expectation(
        spec, 1.0, 2, 5, MuSampler(11), poly=poly
    )
    P = spec.N + 1
    assert rep.estimate == pytest.approx(P * (P - 1) * v / spec.N, abs=1e-12)
    assert rep.std_error == pytest.approx(0.0, abs=1e-13)


def test_majorant_dominates_minorant_estimate():
    spec = VectorSequenceSpec(1, 6, (Power(1.5),))
    plus = selberg_expectation(spec, 1.0, 2, 8, MuSampler(21), sign="plus")
    minus = selberg_expectation(spec, 1.0, 2, 8, MuSampler(21), sign="minus")
    assert plus.estimate >= minus.estimate


def test_selberg_reports_reference_and_constant():
    spec = VectorSequenceSpec(1, 8, (Power(1.5),))
    rep = selberg_expectation(spec, 1.0, 2, 16, MuSampler(3))
    K = 2 * spec.N
    c0 = 2.0 * (1.0 / spec.N) + 1.0 / (K + 1)
    assert rep.c0_target == pytest.approx(spec.N * c0)
    assert rep.c_empirical == pytest.approx(spec.N * abs(rep.estimate - rep.c0_target))
    # the smoothed-sum mean tracks N^r c_0 within noise plus O(1/N)
    assert abs(rep.estimate - rep.c0_target) <= 3 * rep.std_error + max(
        10.0 * rep.c_empirical / spec.N, 1.0
    )


def test_variance_nonnegative_and_deterministic():
    spec = VectorSequenceSpec(1, 10, (Power(1.3),))
    a = variance_estimate(spec, 1.0, 2, 12, MuSampler(5))
    b = variance_estimate(spec, 1.0, 2, 12, MuSampler(5))
    assert a == b  # bit-identical dataclasses, including estimate
    assert a.estimate >= -3.0 * a.std_error
    assert a.estimate >= 0.0  # mean of squares


def test_variance_decreases_along_N():
    results = []
    for N in (50, 100, 200):
        spec = VectorSequenceSpec(1, N, (Power(1.5),))
        results.append(variance_estimate(spec, 1.0, 2, 60, MuSampler(99)))
    for prev, cur in zip(results, results[1:]):
        shrank = cur.estimate < prev.estimate
        overlap = (
            cur.estimate - 2 * cur.std_error
            <= prev.estimate + 2 * prev.std_error
        )
        assert shrank or overlap


def test_budget_guards():
    spec = VectorSequenceSpec(2, 80, (Power(1.5), Power(1.3)))
    with pytest.raises(BudgetExceeded):
        selberg_expectation(spec, 1.0, 2, 4, MuSampler(0))
    with pytest.raises(InvalidSpec):
        indicator_expectation(tiny_spec(), 0.3, 1, MuSampler(0))  # needs >= 2


def test_report_serialization():
    rep = MomentReport(
        kind="variance", estimate=0.5, std_error=0.1, n_samples=4,
        N=10, r=1, s=1.0, t=2, seed=7,
    )
    d = rep.to_dict()
    assert d["kind"] == "variance" and d["seed"] == 7 and d["alpha_mode"] == "mu"
