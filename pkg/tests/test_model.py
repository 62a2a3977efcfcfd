import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lowdisc.model import (
    GEOMETRIC_TAIL,
    HypothesisViolation,
    InputMatrix,
    ReducedInstance,
    SignVector,
    bucket_threshold,
    compute_parameters,
    discrepancy,
    floor_neg_log2,
    floor_neg_log2_array,
    row_threshold_budget,
    stratify,
)
from lowdisc.generate import random_reduced


# --- derived constants ---------------------------------------------------

def test_parameters_quarter_one():
    p = compute_parameters(0.25, 1.0)
    assert p.level_floor == 2
    assert p.alpha == 2.0
    assert p.eps == 8.0
    assert p.bound == 16.0


def test_parameters_tiny_beta():
    p = compute_parameters(2.0**-20, 2.0**-10)
    assert p.level_floor == 20
    assert p.alpha == pytest.approx(math.sqrt(30.0), rel=1e-15)
    assert p.eps == pytest.approx(8.0 * math.sqrt(30.0) * 2.0**-10, rel=1e-15)
    assert p.bound == pytest.approx(16.0 * math.sqrt(30.0) * 2.0**-10, rel=1e-15)
    assert p.bound == pytest.approx(0.0856, abs=2e-4)
    assert p.bound < 1.0  # nontrivial for tiny entries


@pytest.mark.parametrize("beta,delta,needle", [
    (0.3, 1.0, "beta > 1/4"),
    (0.2, 0.3, "beta > delta/2"),
    (0.25, 1.5, "delta > 1"),
    (0.0, 1.0, "positive"),
    (0.25, -1.0, "positive"),
])
def test_parameters_reject_named(beta, delta, needle):
    with pytest.raises(HypothesisViolation) as err:
        compute_parameters(beta, delta)
    assert needle in str(err.value)


def test_parameters_reject_collects_everything():
    with pytest.raises(HypothesisViolation) as err:
        compute_parameters(0.3, 1.5)
    msgs = err.value.violations
    assert any("beta > 1/4" in v for v in msgs)
    assert any("delta > 1" in v for v in msgs)


def test_parameters_eps_exceeds_8_sqrt_beta():
    for beta, delta in [(0.25, 1.0), (0.25, 0.5), (2.0**-12, 1.0), (0.01, 0.3)]:
        p = compute_parameters(beta, delta)
        assert p.eps > 8.0 * math.sqrt(beta)
        assert p.alpha >= math.sqrt(2.0)


def test_bound_monotone_in_inverse_beta():
    # for fixed delta/beta^2 the bound shrinks as beta does; feasibility
    # pins beta between 2^-(r-1) and 2^-max(2, r/2) when the ratio is 2^r
    for r in (6.0, 10.0, 16.0, 24.0):
        bounds = []
        for ulog in np.linspace(max(2.0, r / 2.0 + 0.01), r - 1.0, 8):
            beta = 2.0**-ulog
            delta = 2.0 ** (r - 2.0 * ulog)
            assert 2 * beta <= delta <= 1.0
            bounds.append(compute_parameters(beta, delta).bound)
        assert len(bounds) >= 3
        assert all(b1 >= b2 - 1e-15 for b1, b2 in zip(bounds, bounds[1:]))


# --- exact binary levels --------------------------------------------------

@given(st.integers(min_value=0, max_value=1070))
@settings(deadline=None)
def test_floor_neg_log2_exact_powers(k):
    assert floor_neg_log2(2.0**-k) == k


@given(st.floats(min_value=1e-300, max_value=1.0, exclude_min=True))
@settings(max_examples=300, deadline=None)
def test_floor_neg_log2_bracket(x):
    k = floor_neg_log2(x)
    assert 2.0 ** -(k + 1) < x <= 2.0**-k


def test_floor_neg_log2_examples():
    assert floor_neg_log2(0.25) == 2  # exact power lands on its own level
    assert floor_neg_log2(0.2) == 2   # 0.2 in (1/8, 1/4]
    assert floor_neg_log2(1.0) == 0
    assert floor_neg_log2(0.5) == 1


def test_floor_neg_log2_rejects():
    for bad in (0.0, -1.0, math.inf):
        with pytest.raises(ValueError):
            floor_neg_log2(bad)


def test_floor_neg_log2_array_matches_scalar():
    xs = np.array([0.25, 0.2, 1.0, 0.5, 3.0, 2.0**-40, 0.7])
    assert list(floor_neg_log2_array(xs)) == [floor_neg_log2(x) for x in xs]


# --- stratification -------------------------------------------------------

def _instance(entries, n, m, beta, delta):
    rows = [e[0] for e in entries]
    cols = [e[1] for e in entries]
    vals = [e[2] for e in entries]
    return ReducedInstance(n, m, np.array(rows), np.array(cols), np.array(vals),
                           beta, delta)


def test_stratify_levels():
    A = _instance([(0, 0, 0.25), (0, 1, 0.2), (1, 2, 0.0)], 2, 3, 0.25, 1.0)
    params = compute_parameters(0.25, 1.0)
    strata = stratify(A, params)
    d = strata.as_dict()
    assert set(d) == {(0, 2)}  # both nonzeros at level 2; the zero is excluded
    cols, vals, total = d[(0, 2)]
    assert list(cols) == [0, 1]
    assert total == pytest.approx(0.45, rel=1e-15)


def test_stratify_rejects_entry_above_beta():
    A = _instance([(0, 0, 0.3)], 1, 1, 0.25, 1.0)
    params = compute_parameters(0.25, 1.0)
    with pytest.raises(HypothesisViolation) as err:
        stratify(A, params)
    assert "corrupt" in str(err.value)


@pytest.mark.parametrize("seed", range(8))
def test_stratify_partition_properties(seed):
    rng = np.random.default_rng(seed)
    beta = float(2.0 ** -rng.integers(4, 16))
    delta = min(1.0, beta * 2.0 ** float(rng.integers(1, 10)))
    A = random_reduced(8, 30, beta, delta, density=0.4, seed=seed)
    params = compute_parameters(beta, delta)
    strata = stratify(A, params)

    # partition: every stored entry in exactly one bucket
    assert strata.cols.size == A.nnz
    total_by_row = np.zeros(A.n)
    for b in range(len(strata)):
        k = int(strata.level[b])
        assert k >= params.level_floor
        vals = strata.values(b)
        assert ((2.0 ** -(k + 1) < vals) & (vals <= 2.0**-k)).all()
        assert strata.sums[b] == pytest.approx(vals.sum(), rel=1e-12)
        # cached sum is at least 2^-(k+1) * bucket size
        assert strata.sums[b] >= 2.0 ** -(k + 1) * vals.size
        total_by_row[strata.row[b]] += strata.sums[b]
    np.testing.assert_allclose(total_by_row, A.row_l1(), rtol=1e-12)
    assert (total_by_row <= 1.0 + 1e-12).all()

    # buckets are disjoint: (row, level) keys unique
    keys = list(zip(strata.row.tolist(), strata.level.tolist()))
    assert len(keys) == len(set(keys))


# --- thresholds ------------------------------------------------------------

def test_threshold_values():
    p = compute_parameters(0.25, 1.0)  # alpha=2, eps=8
    assert bucket_threshold(0.0, 2, p) == 1.0
    assert bucket_threshold(0.5, 2, p) == 5.0
    p2 = compute_parameters(2.0**-20, 2.0**-10)
    got = bucket_threshold(1.0, 20, p2)
    assert got == pytest.approx(9.0 * math.sqrt(30.0) / 1024.0, rel=1e-14)


def test_threshold_rejects_below_floor():
    p = compute_parameters(0.25, 1.0)
    with pytest.raises(HypothesisViolation):
        bucket_threshold(0.1, 1, p)
    with pytest.raises(ValueError):
        bucket_threshold(-0.1, 2, p)


@pytest.mark.parametrize("seed", range(6))
def test_threshold_tail_sum_within_bound(seed):
    # summed over all levels, one row's thresholds stay below the bound
    rng = np.random.default_rng(100 + seed)
    beta = float(2.0 ** -rng.integers(4, 20))
    delta = min(1.0, beta * 2.0 ** float(rng.integers(1, 12)))
    params = compute_parameters(beta, delta)
    A = random_reduced(6, 40, beta, delta, density=0.5, seed=seed)
    strata = stratify(A, params)
    occupied = np.zeros(A.n)
    for b in range(len(strata)):
        occupied[strata.row[b]] += bucket_threshold(
            float(strata.sums[b]), int(strata.level[b]), params)
    full = row_threshold_budget(params)  # geometric tail over every level
    assert occupied.max(initial=0.0) <= full + 1e-12
    assert full <= params.bound + 1e-12


def test_row_threshold_budget_formula():
    p = compute_parameters(0.25, 1.0)
    expect = p.eps + p.alpha * 2.0**-1 * GEOMETRIC_TAIL
    assert row_threshold_budget(p) == pytest.approx(expect, rel=1e-15)


# --- discrepancy evaluation -------------------------------------------------

def test_discrepancy_two_entries():
    V = InputMatrix.from_dense([[0.1, 0.3]], 4.0, 2.0)
    per_row, worst = discrepancy(V, SignVector([1, -1]))
    assert worst == pytest.approx(0.2, rel=1e-12)
    assert per_row[0] == worst


def test_discrepancy_sign_symmetric():
    rng = np.random.default_rng(3)
    V = InputMatrix.from_dense(rng.uniform(-1, 1, size=(5, 9)), 16.0, 8.0)
    y = rng.choice([-1, 1], size=9)
    a = discrepancy(V, y)
    b = discrepancy(V, -y)
    np.testing.assert_array_equal(a[0], b[0])
    assert a[1] == b[1]


def test_discrepancy_scaled_identity():
    A = ReducedInstance.from_dense(0.25 * np.eye(2), 0.25, 1.0)
    _, worst = discrepancy(A, SignVector([1, 1]))
    assert worst == 0.25


def test_discrepancy_dimension_mismatch():
    V = InputMatrix.from_dense([[0.1, 0.3]], 4.0, 2.0)
    with pytest.raises(ValueError):
        discrepancy(V, SignVector([1, -1, 1]))


# --- structural types -------------------------------------------------------

def test_sign_vector_validation():
    with pytest.raises(ValueError):
        SignVector([1, 0, -1])
    v = SignVector([1, -1, 1, -1, 1, -1, 1])
    assert len(v) == 7
    assert set(np.asarray(v).tolist()) <= {-1, 1}


def test_coo_rejects_duplicates_and_nonfinite():
    with pytest.raises(ValueError):
        InputMatrix.from_entries(2, 2, [(0, 0, 0.5), (0, 0, 0.25)], 4.0, 2.0)
    with pytest.raises(ValueError):
        InputMatrix.from_entries(2, 2, [(0, 0, math.nan)], 4.0, 2.0)
    with pytest.raises(ValueError):
        InputMatrix.from_entries(0, 2, [], 4.0, 2.0)


def test_reduced_instance_rejects_negative():
    with pytest.raises(ValueError):
        ReducedInstance.from_dense([[-0.1]], 0.25, 1.0)


def test_hypothesis_violations_reported_with_witnesses():
    A = _instance([(0, 0, 0.3), (1, 0, 0.9)], 2, 1, 0.25, 0.5)
    probs = A.hypothesis_violations()
    assert any("exceeds the entry bound" in p for p in probs)
    assert any("column 0" in p for p in probs)
    assert random_reduced(5, 20, 0.25, 1.0, 0.3, seed=0).hypothesis_violations() == []
