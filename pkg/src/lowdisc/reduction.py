"""Front-ends: hypergraphs and general matrices reduced to the solver's form.

A general bounded matrix is split into positive and negative parts and
rescaled by its row budget; a hypergraph becomes a 0/1 incidence matrix.
Solutions of the reduced instance lift back with an explicit constant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import (
    HypothesisViolation,
    InternalInconsistency,
    InputMatrix,
    ReducedInstance,
    SignVector,
    discrepancy,
)

__all__ = [
    "HypergraphInstance",
    "LiftedReport",
    "validate_matrix",
    "reduce_matrix",
    "lift_assignment",
    "hypergraph_incidence",
    "hypergraph_bounds",
]


@dataclass(frozen=True, eq=False)
class HypergraphInstance:
    """A hypergraph with declared maximum edge size and vertex degree.

    Edges are tuples of 0-based vertex ids, sorted ascending.  Construction
    rejects a hypergraph that violates its own declarations.
    """

    n_vertices: int
    edges: tuple
    max_edge_size: int
    max_degree: int

    def __post_init__(self):
        if self.n_vertices < 1:
            raise ValueError("hypergraph needs at least one vertex")
        if self.max_edge_size < 1 or self.max_degree < 1:
            raise HypothesisViolation(
                [f"declared bounds must be >= 1 (edge size {self.max_edge_size}, degree {self.max_degree})"]
            )
        norm = []
        degree = np.zeros(self.n_vertices, dtype=np.int64)
        problems = []
        for idx, edge in enumerate(self.edges):
            vs = tuple(sorted(int(v) for v in edge))
            if len(vs) == 0:
                problems.append(f"edge {idx} is empty")
                continue
            if len(set(vs)) != len(vs):
                raise ValueError(f"edge {idx} repeats a vertex")
            if vs[0] < 0 or vs[-1] >= self.n_vertices:
                raise ValueError(f"edge {idx} has a vertex outside [0, {self.n_vertices})")
            if len(vs) > self.max_edge_size:
                problems.append(
                    f"edge {idx} has size {len(vs)} > declared maximum {self.max_edge_size}"
                )
            degree[list(vs)] += 1
            norm.append(vs)
        over = np.flatnonzero(degree > self.max_degree)
        if over.size:
            problems.append(
                f"vertex {int(over[0])} has degree {int(degree[over[0]])} > declared maximum "
                f"{self.max_degree} ({over.size} vertices in violation)"
            )
        if problems:
            raise HypothesisViolation(problems)
        object.__setattr__(self, "edges", tuple(norm))

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def degrees(self) -> np.ndarray:
        degree = np.zeros(self.n_vertices, dtype=np.int64)
        for edge in self.edges:
            degree[list(edge)] += 1
        return degree


@dataclass(frozen=True, eq=False)
class LiftedReport:
    """Discrepancy of the original matrix under a solved sign vector.

    ``proven_bound`` is 2 * row_bound * (certified reduced discrepancy);
    ``apriori_bound`` the instance-independent 32 * sqrt(R * log2(R * Delta));
    ``effective_bound`` folds in the trivial per-row bound R, which is
    smaller for moderate R.
    """

    y: SignVector
    row_disc: np.ndarray
    max_disc: float
    proven_bound: float
    apriori_bound: float
    effective_bound: float


def validate_matrix(V: InputMatrix) -> InputMatrix:
    """Check every hypothesis of the general-matrix front-end.

    Collects all violations (entry magnitudes, row/column L1 norms against
    the declared budgets, and the budget inequalities R >= max(Delta, 4),
    Delta >= 2) instead of failing on the first.
    """
    problems = []
    if V.vals.size:
        mags = np.abs(V.vals)
        bad = np.flatnonzero(mags > 1.0)
        if bad.size:
            j = int(bad[0])
            problems.append(
                f"entry ({int(V.rows[j])}, {int(V.cols[j])}) = {float(V.vals[j])!r} has "
                f"magnitude above 1 ({bad.size} entries in violation)"
            )
    row = V.row_l1()
    bad = np.flatnonzero(row > V.row_bound * (1.0 + 1e-9))
    if bad.size:
        i = int(bad[0])
        problems.append(
            f"row {i} L1 norm {float(row[i])!r} exceeds declared bound {V.row_bound!r}"
            f" ({bad.size} rows in violation)"
        )
    col = V.col_l1()
    bad = np.flatnonzero(col > V.col_bound * (1.0 + 1e-9))
    if bad.size:
        j = int(bad[0])
        problems.append(
            f"column {j} L1 norm {float(col[j])!r} exceeds declared bound {V.col_bound!r}"
            f" ({bad.size} columns in violation)"
        )
    if V.row_bound < 4.0:
        problems.append(f"row bound R = {V.row_bound!r} < 4")
    if V.row_bound < V.col_bound:
        problems.append(
            f"row bound R = {V.row_bound!r} < column bound Delta = {V.col_bound!r}"
        )
    if V.col_bound < 2.0:
        problems.append(f"column bound Delta = {V.col_bound!r} < 2")
    if problems:
        raise HypothesisViolation(problems)
    return V


def reduce_matrix(V: InputMatrix) -> ReducedInstance:
    """Split into positive/negative parts, scale by 1/R, stack to 2n rows.

    Row i of the result holds max(V[i], 0)/R, row n+i holds max(-V[i], 0)/R;
    the entry bound becomes 1/R and the column-sum bound Delta/R.  Call
    :func:`validate_matrix` first.
    """
    R = V.row_bound
    pos = V.vals > 0
    neg = ~pos  # zeros are never stored
    rows = np.concatenate([V.rows[pos], V.rows[neg] + V.n])
    cols = np.concatenate([V.cols[pos], V.cols[neg]])
    vals = np.concatenate([V.vals[pos] / R, -V.vals[neg] / R])
    return ReducedInstance(2 * V.n, V.m, rows, cols, vals,
                           beta=1.0 / R, delta=V.col_bound / R)


def lift_assignment(V: InputMatrix, A: ReducedInstance, y: SignVector,
                    ay_max: float) -> LiftedReport:
    """Evaluate the sign vector on the original matrix and report its bounds.

    ``ay_max`` must be the certified max row discrepancy of ``A`` under the
    same ``y``; the direct value of the lifted matrix can never exceed
    2 * R * ay_max, and a breach is reported as an internal inconsistency.
    """
    if A.m != V.m or A.n != 2 * V.n:
        raise ValueError(
            f"reduced instance shape {A.n}x{A.m} does not match matrix {V.n}x{V.m}"
        )
    row_disc, max_disc = discrepancy(V, y)
    row_disc.setflags(write=False)
    R, D = V.row_bound, V.col_bound
    proven = 2.0 * R * ay_max
    apriori = 32.0 * math.sqrt(R * math.log2(R * D))
    if max_disc > proven * (1.0 + 1e-9) + 1e-12:
        raise InternalInconsistency(
            f"lifted discrepancy {max_disc!r} exceeds 2*R*ay_max = {proven!r}; "
            "the reduced solve result is inconsistent"
        )
    return LiftedReport(y=y, row_disc=row_disc, max_disc=max_disc,
                        proven_bound=proven, apriori_bound=apriori,
                        effective_bound=min(proven, R))


def hypergraph_incidence(H: HypergraphInstance) -> InputMatrix:
    """0/1 incidence matrix: one row per edge, one column per vertex.

    Under red = +1 and blue = -1, a row's discrepancy equals the edge's
    color imbalance |#red - #blue|.
    """
    sizes = [len(e) for e in H.edges]
    rows = np.repeat(np.arange(H.n_edges, dtype=np.int64), sizes)
    cols = np.concatenate([np.asarray(e, dtype=np.int64) for e in H.edges]) \
        if H.n_edges else np.zeros(0, dtype=np.int64)
    vals = np.ones(rows.size)
    if H.n_edges < 1:
        raise ValueError("hypergraph has no edges; nothing to color")
    return InputMatrix(H.n_edges, H.n_vertices, rows, cols, vals,
                       row_bound=float(H.max_edge_size), col_bound=float(H.max_degree))


def hypergraph_bounds(max_edge_size: int, max_degree: int) -> dict:
    """Both edge-imbalance guarantees available for a hypergraph, labeled.

    ``direct`` is the natural-log bound 2*sqrt(R*ln(R*Delta)) of the
    one-event-per-edge mode; ``reduced`` the base-2 bound
    32*sqrt(R*log2(R*Delta)) obtained through the matrix reduction.
    """
    R, D = max_edge_size, max_degree
    if R < 1 or D < 1:
        raise ValueError("edge size and degree bounds must be >= 1")
    if R * D < 2:
        raise ValueError("R * Delta must be at least 2 for either bound")
    return {
        "direct": 2.0 * math.sqrt(R * math.log(R * D)),
        "reduced": 32.0 * math.sqrt(R * math.log2(R * D)),
    }
