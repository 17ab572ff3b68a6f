import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from finescale.energy import (
    Thm1Config,
    additive_energy,
    additive_energy_bruteforce,
    energy_table,
    ordered_distinct_pairs,
    thm1_count,
)
from finescale.errors import (
    BudgetExceeded,
    CapacityGuard,
    InvalidSpec,
    TooLarge,
)
from finescale.sequences import Explicit, Power, VectorSequenceSpec


@pytest.mark.parametrize(
    "values,gamma,expected",
    [
        ([1.0, 2.0], 1.0, 6),
        ([1.0, 2.0, 3.0], 1.0, 19),
        ([0.0, 0.5, 1.0], 0.6, 51),
    ],
)
def test_known_counts(values, gamma, expected):
    assert additive_energy(values, gamma).count == expected
    assert additive_energy_bruteforce(values, gamma).count == expected


def test_constant_sequence_saturates():
    # strict inequality: every quadruple gives exactly 0 < gamma
    vals = [3.25] * 5
    assert additive_energy(vals, 0.5).count == 5**4


def test_trivial_floor():
    rng = np.random.default_rng(0)
    for _ in range(20):
        n = int(rng.integers(2, 20))
        vals = np.cumsum(rng.uniform(1.0, 5.0, n))
        c = additive_energy(vals, 1e-9).count
        assert c >= 2 * n * n - n


def test_gamma_validation():
    with pytest.raises(InvalidSpec):
        additive_energy([1.0, 2.0], 0.0)
    with pytest.raises(InvalidSpec):
        additive_energy([1.0, 2.0], 1.5)


def test_capacity_and_size_guards():
    with pytest.raises(CapacityGuard):
        additive_energy(np.arange(100.0), 1.0, cap=99)
    with pytest.raises(TooLarge):
        additive_energy_bruteforce(np.arange(65.0), 1.0)


def _random_increasing(rng, n):
    # dyadic grid keeps shifts and scalings exact in float arithmetic
    steps = rng.integers(1, 2**10, size=n).astype(np.float64) / 2.0**10
    return np.cumsum(steps)


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 24), st.sampled_from([1.0, 0.3, 0.05]), st.integers(0, 2**31))
def test_fast_equals_bruteforce(n, gamma, seed):
    vals = _random_increasing(np.random.default_rng(seed), n)
    assert additive_energy(vals, gamma).count == additive_energy_bruteforce(vals, gamma).count


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 16), st.integers(0, 2**31))
def test_monotone_in_gamma(n, seed):
    vals = _random_increasing(np.random.default_rng(seed), n)
    counts = [additive_energy(vals, g).count for g in (0.05, 0.3, 1.0)]
    assert counts == sorted(counts)


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 16), st.integers(0, 2**31), st.integers(-2**18, 2**18))
def test_shift_invariance(n, seed, shift_num):
    vals = _random_increasing(np.random.default_rng(seed), n)
    shift = shift_num / 2.0**6  # dyadic: v + shift is exact
    a = additive_energy(vals, 0.3).count
    b = additive_energy(vals + shift, 0.3).count
    assert a == b


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 16), st.integers(0, 2**31), st.sampled_from([2.0, 4.0, 8.0]))
def test_scale_covariance(n, seed, lam):
    vals = _random_increasing(np.random.default_rng(seed), n)
    gamma = 0.8
    # |lam*expr| < gamma  <=>  |expr| < gamma/lam; powers of two scale exactly
    a = additive_energy(vals, gamma / lam).count
    b = additive_energy(vals * lam, gamma).count
    assert a == b


def test_integer_sequences_count_exact_zeros():
    vals = np.array([1.0, 2.0, 4.0, 7.0, 11.0])
    sums = (vals[:, None] + vals[None, :]).ravel()
    _, mult = np.unique(sums, return_counts=True)
    zero_quadruples = int(np.sum(mult**2))
    for gamma in (0.05, 0.5, 1.0):
        assert additive_energy(vals, gamma).count == zero_quadruples


def test_arithmetic_progression_closed_form():
    # AP pair-sums have multiplicities 1,2,...,n,...,2,1
    n = 7
    vals = np.arange(1.0, n + 1.0)
    mult = np.concatenate([np.arange(1, n + 1), np.arange(n - 1, 0, -1)])
    assert additive_energy(vals, 1.0).count == int(np.sum(mult**2))


def test_energy_table_known_values():
    reports = energy_table(Power(1.0), [2, 3])
    assert [(r.N, r.count) for r in reports] == [(2, 6), (3, 19)]


def test_energy_table_empty_grid():
    assert energy_table(Power(1.5), []) == []


def test_energy_table_inverse_gamma():
    reports = energy_table(Power(1.5), [8, 16], gamma_rule="inverse")
    assert [r.gamma for r in reports] == [1.0 / 8.0, 1.0 / 16.0]


def test_energy_table_grid_must_ascend():
    with pytest.raises(InvalidSpec):
        energy_table(Power(1.5), [16, 8])


# -- two-coefficient inequality count ---------------------------------------


def thm1_enumerate(vals, jmax):
    """Independent oracle: direct enumeration of every
    (j1, j2, x, y, z, w) tuple, r = 1."""
    vals = np.asarray(vals, dtype=np.float64)
    n = vals.size
    d = (vals[:, None] - vals[None, :])[~np.eye(n, dtype=bool)]
    total = 0
    for j1 in range(1, jmax + 1):
        for j2 in range(1, jmax + 1):
            total += int(np.count_nonzero(np.abs(j1 * d[:, None] - j2 * d[None, :]) < 1.0))
    return total


def thm1_sixloop(vals, jmax):
    """Pure-Python six-deep loop; anchors the vectorized oracle."""
    n = len(vals)
    total = 0
    for j1 in range(1, jmax + 1):
        for j2 in range(1, jmax + 1):
            for x in range(n):
                for y in range(n):
                    if x == y:
                        continue
                    for z in range(n):
                        for w in range(n):
                            if z == w:
                                continue
                            if abs(j1 * (vals[x] - vals[y]) - j2 * (vals[z] - vals[w])) < 1:
                                total += 1
    return total


def test_thm1_spec_example():
    spec = VectorSequenceSpec(1, 2, (Explicit((0.0, 10.0, 20.0)),))
    assert thm1_count(spec, Thm1Config(1)) == 10


def test_oracles_agree_with_each_other():
    vals = [0.0, 1.4, 3.1, 5.9]
    assert thm1_enumerate(vals, 2) == thm1_sixloop(vals, 2)


@settings(max_examples=25, deadline=None)
@given(st.integers(2, 6), st.integers(1, 8), st.integers(0, 2**31))
def test_thm1_equals_enumeration(N, jmax, seed):
    rng = np.random.default_rng(seed)
    vals = np.cumsum(rng.uniform(0.3, 3.0, N + 1))
    spec = VectorSequenceSpec(1, N, (Explicit(tuple(vals)),))
    fast = thm1_count(spec, Thm1Config(jmax))
    assert fast == thm1_enumerate(vals, jmax)
    assert fast >= jmax * ordered_distinct_pairs(spec)


def test_thm1_r2_shared_coordinates():
    """Pairs sharing a coordinate give a zero difference in that
    component; the count must still match direct enumeration."""
    spec = VectorSequenceSpec(2, 1, (Explicit((0.0, 0.3)), Explicit((0.0, 0.4))))
    jmax = 2
    pts = [(i, j) for i in range(2) for j in range(2)]
    a = {0: (0.0, 0.3), 1: (0.0, 0.4)}
    total = 0
    for j1 in range(1, jmax + 1):
        for j2 in range(1, jmax + 1):
            for x in pts:
                for y in pts:
                    if x == y:
                        continue
                    for z in pts:
                        for w in pts:
                            if z == w:
                                continue
                            m = max(
                                abs(
                                    j1 * (a[i][x[i]] - a[i][y[i]])
                                    - j2 * (a[i][z[i]] - a[i][w[i]])
                                )
                                for i in range(2)
                            )
                            if m < 1.0:
                                total += 1
    assert thm1_count(spec, Thm1Config(jmax)) == total


def test_thm1_budget_guard():
    spec = VectorSequenceSpec(1, 6, (Power(1.5),))
    with pytest.raises(BudgetExceeded):
        thm1_count(spec, Thm1Config(Jmax=8, budget=10))


def test_thm1_config_validation():
    with pytest.raises(InvalidSpec):
        Thm1Config(0)
