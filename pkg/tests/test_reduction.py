import math

import numpy as np
import pytest

from lowdisc.model import (
    HypothesisViolation,
    InputMatrix,
    InternalInconsistency,
    SignVector,
    compute_parameters,
    discrepancy,
)
from lowdisc.generate import random_hypergraph, random_matrix
from lowdisc.reduction import (
    HypergraphInstance,
    hypergraph_bounds,
    hypergraph_incidence,
    lift_assignment,
    reduce_matrix,
    validate_matrix,
)


def _half_matrix():
    # 4x8 of +-1/2 entries: row L1 = 4 = R, column L1 = 2 = Delta
    dense = 0.5 * np.fromfunction(lambda i, j: (-1.0) ** (i + j), (4, 8))
    return InputMatrix.from_dense(dense, 4.0, 2.0)


# --- validation -------------------------------------------------------------

def test_validate_accepts_half_matrix():
    V = _half_matrix()
    assert validate_matrix(V) is V


def test_validate_rejects_small_R():
    V = InputMatrix.from_dense(0.5 * np.ones((2, 4)), 3.0, 2.0)
    with pytest.raises(HypothesisViolation) as err:
        validate_matrix(V)
    assert "R = 3.0 < 4" in str(err.value)


def test_validate_rejects_overweight_row_with_witness():
    dense = np.zeros((3, 8))
    dense[1, :] = 0.6  # L1 = 4.8 > R = 4.5 declared below
    V = InputMatrix.from_dense(dense, 4.5, 2.0)
    with pytest.raises(HypothesisViolation) as err:
        validate_matrix(V)
    assert "row 1" in str(err.value)


def test_validate_collects_all_violations():
    dense = np.zeros((2, 2))
    dense[0, 0] = 1.0
    V = InputMatrix.from_dense(dense, 3.0, 1.0)
    with pytest.raises(HypothesisViolation) as err:
        validate_matrix(V)
    msgs = err.value.violations
    assert any("< 4" in v for v in msgs)
    assert any("Delta" in v and "< 2" in v for v in msgs)


def test_validate_rejects_entry_above_one():
    V = InputMatrix.from_entries(1, 4, [(0, 0, 1.0), (0, 1, -1.0)], 4.0, 2.0)
    validate_matrix(V)  # magnitude exactly 1 is fine
    W = InputMatrix.from_entries(1, 4, [(0, 0, 1.5)], 4.0, 2.0)
    with pytest.raises(HypothesisViolation) as err:
        validate_matrix(W)
    assert "magnitude above 1" in str(err.value)


# --- reduction ---------------------------------------------------------------

def test_reduce_splits_and_scales():
    dense = np.array([[1.0, -1.0, 1.0, -1.0],
                      [1.0, -1.0, 1.0, -1.0]])
    V = InputMatrix.from_dense(dense, 4.0, 2.0)
    A = reduce_matrix(validate_matrix(V))
    assert (A.n, A.m) == (4, 4)
    assert A.beta == 0.25 and A.delta == 0.5
    got = A.to_dense()
    np.testing.assert_array_equal(got[0], [0.25, 0.0, 0.25, 0.0])   # positive part
    np.testing.assert_array_equal(got[2], [0.0, 0.25, 0.0, 0.25])   # negative part
    assert A.hypothesis_violations() == []


def test_reduce_nonnegative_matrix_has_empty_negative_rows():
    V = InputMatrix.from_dense(0.5 * np.ones((3, 8)), 4.0, 2.0)
    A = reduce_matrix(V)
    dense = A.to_dense()
    assert (dense[3:] == 0.0).all()
    assert (dense[:3] == 0.125).all()


@pytest.mark.parametrize("seed", range(4))
def test_reduce_roundtrip_identity(seed):
    V = random_matrix(8, 30, 8.0, 4.0, 0.4, seed=seed)
    A = reduce_matrix(validate_matrix(V))
    R = V.row_bound
    dense = A.to_dense()
    recon = R * (dense[:V.n] - dense[V.n:])
    np.testing.assert_allclose(recon, V.to_dense(), rtol=1e-12, atol=1e-15)
    # and therefore (Vy)_i = R ((A+ y)_i - (A- y)_i)
    rng = np.random.default_rng(seed)
    y = rng.choice([-1, 1], size=V.m)
    vy = V.to_dense() @ y
    ay = dense @ y
    np.testing.assert_allclose(vy, R * (ay[:V.n] - ay[V.n:]), rtol=1e-10, atol=1e-12)
    _, ay_max = discrepancy(A, y)
    assert np.abs(vy).max() <= 2.0 * R * ay_max + 1e-12


def test_reduce_parameter_identity():
    # alpha of the reduced instance equals sqrt(log2(R * Delta))
    for R, D in [(4.0, 2.0), (16.0, 4.0), (64.0, 8.0), (1024.0, 32.0)]:
        params = compute_parameters(1.0 / R, D / R)
        assert params.alpha == pytest.approx(math.sqrt(math.log2(R * D)), rel=1e-12)


def test_reduced_instances_always_satisfy_hypotheses():
    rng = np.random.default_rng(0)
    for trial in range(1000):
        n = int(rng.integers(1, 7))
        m = int(rng.integers(1, 13))
        D = float(rng.integers(2, 5))
        R = float(rng.integers(int(max(D, 4)), 10))
        V = random_matrix(n, m, R, D, float(rng.uniform(0, 0.8)), seed=trial)
        A = reduce_matrix(validate_matrix(V))
        assert A.beta == 1.0 / R and A.delta == D / R
        assert A.hypothesis_violations() == []


# --- lifting -----------------------------------------------------------------

def test_lift_zero_matrix():
    V = InputMatrix.from_dense(np.zeros((2, 4)), 4.0, 2.0)
    A = reduce_matrix(V)
    rep = lift_assignment(V, A, SignVector([1, 1, -1, -1]), ay_max=0.0)
    assert rep.max_disc == 0.0
    assert rep.proven_bound == 0.0


def test_lift_bound_numbers():
    # R=1024, Delta=32: certified reduced discrepancy 16*sqrt(15)*2^-5
    R, D = 1024.0, 32.0
    ay_max = 16.0 * math.sqrt(15.0) * 2.0**-5
    V = InputMatrix.from_entries(1, 2, [(0, 0, 1.0), (0, 1, -1.0)], R, D)
    A = reduce_matrix(V)
    rep = lift_assignment(V, A, SignVector([1, 1]), ay_max=ay_max)
    assert rep.proven_bound == pytest.approx(1024.0 * math.sqrt(15.0), rel=1e-12)
    assert rep.proven_bound == pytest.approx(rep.apriori_bound, rel=1e-12)
    assert rep.effective_bound == min(rep.proven_bound, R)
    assert rep.max_disc == 0.0  # +1 and -1 cancel


def test_lift_flags_inconsistent_certificate():
    V = InputMatrix.from_entries(1, 4, [(0, 0, 1.0)], 4.0, 2.0)
    A = reduce_matrix(V)
    with pytest.raises(InternalInconsistency):
        lift_assignment(V, A, SignVector([1, 1, 1, 1]), ay_max=0.0)


def test_lift_single_entry_rows_forced():
    V = InputMatrix.from_dense(np.eye(3), 4.0, 2.0)
    A = reduce_matrix(V)
    y = SignVector([-1, 1, -1])
    _, ay_max = discrepancy(A, y)
    rep = lift_assignment(V, A, y, ay_max)
    assert rep.max_disc == 1.0  # one entry per row, value 1, any signs


# --- hypergraph front-end ------------------------------------------------------

def test_incidence_single_edge():
    H = HypergraphInstance(2, ((0, 1),), 2, 1)
    V = hypergraph_incidence(H)
    np.testing.assert_array_equal(V.to_dense(), [[1.0, 1.0]])
    assert V.row_bound == 2.0 and V.col_bound == 1.0


def test_incidence_disjoint_edges_block_diagonal():
    H = HypergraphInstance(4, ((0, 1), (2, 3)), 2, 1)
    V = hypergraph_incidence(H)
    np.testing.assert_array_equal(
        V.to_dense(), [[1.0, 1.0, 0.0, 0.0], [0.0, 0.0, 1.0, 1.0]])


def test_incidence_of_generated_hypergraph_validates():
    H = random_hypergraph(512, 64, 4, seed=3)
    V = hypergraph_incidence(H)
    assert validate_matrix(V) is V


def test_incidence_imbalance_is_red_blue_count():
    H = random_hypergraph(40, 6, 3, seed=5)
    V = hypergraph_incidence(H)
    rng = np.random.default_rng(5)
    y = rng.choice([-1, 1], size=H.n_vertices)
    per_row, _ = discrepancy(V, y)
    for i, edge in enumerate(H.edges):
        red = sum(1 for v in edge if y[v] == 1)
        blue = len(edge) - red
        assert per_row[i] == abs(red - blue)


def test_hypergraph_rejects_own_declaration_violations():
    with pytest.raises(HypothesisViolation):
        HypergraphInstance(4, ((0, 1, 2),), 2, 2)   # edge bigger than declared R
    with pytest.raises(HypothesisViolation):
        HypergraphInstance(4, ((0, 1), (0, 2)), 2, 1)  # vertex 0 above declared degree
    with pytest.raises(HypothesisViolation):
        HypergraphInstance(4, ((0, 1), ()), 2, 2)   # empty edge


def test_hypergraph_bounds_labeled():
    b = hypergraph_bounds(64, 4)
    assert b["direct"] == pytest.approx(2.0 * math.sqrt(64.0 * math.log(256.0)), rel=1e-15)
    assert b["reduced"] == pytest.approx(32.0 * math.sqrt(64.0 * math.log2(256.0)), rel=1e-15)
