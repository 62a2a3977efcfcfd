"""Core types: bounded sparse matrices, derived constants, magnitude strata.

An instance is a real matrix with declared L1 budgets on rows and columns.
The solving machinery works on a non-negative rescaled form whose entries
are partitioned, per row, into binary-magnitude buckets.  Each bucket gets
a discrepancy allowance from :func:`bucket_threshold`; the allowances of a
whole row sum to at most ``Parameters.bound``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "HypothesisViolation",
    "InternalInconsistency",
    "InputMatrix",
    "ReducedInstance",
    "Parameters",
    "Strata",
    "SignVector",
    "floor_neg_log2",
    "floor_neg_log2_array",
    "compute_parameters",
    "stratify",
    "bucket_threshold",
    "row_threshold_budget",
    "discrepancy",
]

# sum_{i >= 0} 2^(-i/2) = 1 / (1 - 2^(-1/2))
GEOMETRIC_TAIL = 2.0 + math.sqrt(2.0)

# relative slack for L1-norm comparisons; absorbs summation roundoff only
REL_TOL = 1e-9


class HypothesisViolation(ValueError):
    """An input breaks a stated precondition.

    Carries every violated condition, not just the first one found.
    """

    def __init__(self, violations):
        if isinstance(violations, str):
            violations = [violations]
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


class InternalInconsistency(RuntimeError):
    """A quantity the mathematics guarantees failed to hold; indicates a bug."""


def floor_neg_log2(x: float) -> int:
    """Exact floor(-log2(x)) for a positive float, via exponent extraction.

    Exact powers of two land deterministically on their own level
    (0.25 -> 2, not 1), immune to log rounding.
    """
    if not (x > 0.0) or math.isinf(x):
        raise ValueError(f"positive finite value required, got {x!r}")
    mant, exp = math.frexp(x)  # x = mant * 2**exp with mant in [0.5, 1)
    return 1 - exp if mant == 0.5 else -exp


def floor_neg_log2_array(x: np.ndarray) -> np.ndarray:
    """Vectorized :func:`floor_neg_log2` for arrays of positive floats."""
    mant, exp = np.frexp(x)
    return np.where(mant == 0.5, 1 - exp, -exp).astype(np.int64)


def _as_coo(n, m, rows, cols, vals, *, allow_negative):
    """Normalize coordinate data: sorted by (row, col), no zeros, no duplicates."""
    if n < 1 or m < 1:
        raise ValueError(f"matrix shape must be at least 1x1, got {n}x{m}")
    rows = np.asarray(rows, dtype=np.int64)
    cols = np.asarray(cols, dtype=np.int64)
    vals = np.asarray(vals, dtype=np.float64)
    if not (rows.shape == cols.shape == vals.shape) or rows.ndim != 1:
        raise ValueError("rows, cols and vals must be 1-d arrays of equal length")
    if vals.size:
        if not np.isfinite(vals).all():
            raise ValueError("non-finite entry value")
        if rows.min(initial=0) < 0 or rows.max(initial=0) >= n:
            raise ValueError("row index out of range")
        if cols.min(initial=0) < 0 or cols.max(initial=0) >= m:
            raise ValueError("column index out of range")
        if not allow_negative and (vals < 0).any():
            j = int(np.argmax(vals < 0))
            raise ValueError(
                f"negative entry {float(vals[j])!r} at ({int(rows[j])}, {int(cols[j])})"
            )
    keep = vals != 0.0
    rows, cols, vals = rows[keep], cols[keep], vals[keep]
    order = np.lexsort((cols, rows))
    rows, cols, vals = rows[order], cols[order], vals[order]
    if rows.size > 1:
        dup = (rows[1:] == rows[:-1]) & (cols[1:] == cols[:-1])
        if dup.any():
            j = int(np.argmax(dup))
            raise ValueError(f"duplicate entry at ({rows[j]}, {cols[j]})")
    for a in (rows, cols, vals):
        a.setflags(write=False)
    return rows, cols, vals


def _l1_by(index, vals, size):
    return np.bincount(index, weights=np.abs(vals), minlength=size)


@dataclass(frozen=True, eq=False)
class InputMatrix:
    """Sparse real matrix with declared row/column L1 budgets.

    Entries live in coordinate form, sorted by (row, col), explicit zeros
    dropped.  ``row_bound`` and ``col_bound`` are declarations; use
    ``lowdisc.reduction.validate_matrix`` to check them against the data.
    """

    n: int
    m: int
    rows: np.ndarray
    cols: np.ndarray
    vals: np.ndarray
    row_bound: float
    col_bound: float

    def __post_init__(self):
        rows, cols, vals = _as_coo(
            self.n, self.m, self.rows, self.cols, self.vals, allow_negative=True
        )
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "vals", vals)
        for name in ("row_bound", "col_bound"):
            b = float(getattr(self, name))
            if not math.isfinite(b) or b <= 0:
                raise ValueError(f"{name} must be positive and finite, got {b!r}")
            object.__setattr__(self, name, b)

    @classmethod
    def from_entries(cls, n, m, entries, row_bound, col_bound):
        """Build from an iterable of (row, col, value) triples."""
        entries = list(entries)
        rows = [e[0] for e in entries]
        cols = [e[1] for e in entries]
        vals = [e[2] for e in entries]
        return cls(n, m, np.array(rows, dtype=np.int64), np.array(cols, dtype=np.int64),
                   np.array(vals, dtype=np.float64), row_bound, col_bound)

    @classmethod
    def from_dense(cls, array, row_bound, col_bound):
        array = np.asarray(array, dtype=np.float64)
        if array.ndim != 2:
            raise ValueError("dense input must be two-dimensional")
        r, c = np.nonzero(array)
        return cls(array.shape[0], array.shape[1], r, c, array[r, c], row_bound, col_bound)

    @property
    def nnz(self) -> int:
        return int(self.vals.size)

    def to_dense(self) -> np.ndarray:
        out = np.zeros((self.n, self.m))
        out[self.rows, self.cols] = self.vals
        return out

    def row_l1(self) -> np.ndarray:
        return _l1_by(self.rows, self.vals, self.n)

    def col_l1(self) -> np.ndarray:
        return _l1_by(self.cols, self.vals, self.m)


def _parameter_problems(beta: float, delta: float) -> list[str]:
    problems = []
    if not (beta > 0.0 and math.isfinite(beta)):
        problems.append(f"beta = {beta!r} is not a positive finite real")
    if not (delta > 0.0 and math.isfinite(delta)):
        problems.append(f"delta = {delta!r} is not a positive finite real")
    if problems:
        return problems
    if beta > 0.25:
        problems.append(f"beta > 1/4 (beta = {beta!r})")
    if delta > 1.0:
        problems.append(f"delta > 1 (delta = {delta!r})")
    if beta > delta / 2.0:
        problems.append(f"beta > delta/2 (beta = {beta!r}, delta = {delta!r})")
    return problems


@dataclass(frozen=True, eq=False)
class ReducedInstance:
    """Non-negative sparse matrix with an entry bound and a column-sum bound.

    This is the form the certifier and the resampling solver operate on:
    every entry is at most ``beta``, every column L1 sum at most ``delta``,
    every row L1 sum at most 1.  Construction enforces only structural
    sanity; :meth:`hypothesis_violations` checks the numeric hypotheses.
    """

    n: int
    m: int
    rows: np.ndarray
    cols: np.ndarray
    vals: np.ndarray
    beta: float
    delta: float

    def __post_init__(self):
        rows, cols, vals = _as_coo(
            self.n, self.m, self.rows, self.cols, self.vals, allow_negative=False
        )
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "vals", vals)
        for name in ("beta", "delta"):
            b = float(getattr(self, name))
            if not math.isfinite(b) or b <= 0:
                raise ValueError(f"{name} must be positive and finite, got {b!r}")
            object.__setattr__(self, name, b)

    @classmethod
    def from_dense(cls, array, beta, delta):
        array = np.asarray(array, dtype=np.float64)
        r, c = np.nonzero(array)
        return cls(array.shape[0], array.shape[1], r, c, array[r, c], beta, delta)

    @property
    def nnz(self) -> int:
        return int(self.vals.size)

    def to_dense(self) -> np.ndarray:
        out = np.zeros((self.n, self.m))
        out[self.rows, self.cols] = self.vals
        return out

    def row_l1(self) -> np.ndarray:
        return _l1_by(self.rows, self.vals, self.n)

    def col_l1(self) -> np.ndarray:
        return _l1_by(self.cols, self.vals, self.m)

    def hypothesis_violations(self) -> list[str]:
        """Every violated hypothesis, with a witness index; empty when valid."""
        problems = _parameter_problems(self.beta, self.delta)
        if self.vals.size:
            worst = int(np.argmax(self.vals))
            if self.vals[worst] > self.beta:
                problems.append(
                    f"entry ({int(self.rows[worst])}, {int(self.cols[worst])}) = "
                    f"{float(self.vals[worst])!r} exceeds the entry bound {self.beta!r}"
                )
        col = self.col_l1()
        bad = np.flatnonzero(col > self.delta * (1.0 + REL_TOL))
        if bad.size:
            j = int(bad[0])
            problems.append(
                f"column {j} L1 sum {float(col[j])!r} exceeds {self.delta!r}"
                f" ({bad.size} columns in violation)"
            )
        row = self.row_l1()
        bad = np.flatnonzero(row > 1.0 + REL_TOL)
        if bad.size:
            i = int(bad[0])
            problems.append(
                f"row {i} L1 sum {float(row[i])!r} exceeds 1 ({bad.size} rows in violation)"
            )
        return problems


@dataclass(frozen=True)
class Parameters:
    """Derived solver constants for a (beta, delta) instance.

    ``level_floor`` is the smallest magnitude level any entry can occupy,
    ``bound`` the guaranteed maximum row discrepancy 16 * alpha * sqrt(beta).
    """

    beta: float
    delta: float
    level_floor: int
    alpha: float
    eps: float
    bound: float


def compute_parameters(beta: float, delta: float) -> Parameters:
    """Derive the solver constants from the entry and column-sum bounds.

    Requires beta <= min(delta/2, 1/4) and delta <= 1; raises
    :class:`HypothesisViolation` naming every failed inequality otherwise.
    """
    problems = _parameter_problems(beta, delta)
    if problems:
        raise HypothesisViolation(problems)
    level_floor = floor_neg_log2(beta)
    alpha = math.sqrt(math.log2(delta) - 2.0 * math.log2(beta))
    eps = 8.0 * alpha * math.sqrt(beta)
    bound = 16.0 * alpha * math.sqrt(beta)
    if level_floor < 2 or alpha < math.sqrt(2.0) - 1e-12:
        raise InternalInconsistency(
            f"derived constants out of range: level_floor={level_floor}, alpha={alpha!r}"
        )
    return Parameters(beta=float(beta), delta=float(delta), level_floor=level_floor,
                      alpha=alpha, eps=eps, bound=bound)


@dataclass(frozen=True, eq=False)
class Strata:
    """Per-row magnitude buckets of a reduced instance.

    Bucket ``idx`` covers the entries of row ``row[idx]`` whose magnitude
    level is ``level[idx]``, i.e. values in (2^-(k+1), 2^-k].  Supports are
    stored concatenated: columns ``cols[ptr[idx]:ptr[idx+1]]`` (ascending)
    with matching entry values and the cached partial sum ``sums[idx]``.
    """

    n: int
    m: int
    level_floor: int
    row: np.ndarray
    level: np.ndarray
    ptr: np.ndarray
    cols: np.ndarray
    vals: np.ndarray
    sums: np.ndarray

    def __len__(self) -> int:
        return int(self.row.size)

    def support(self, idx: int) -> np.ndarray:
        return self.cols[self.ptr[idx]:self.ptr[idx + 1]]

    def values(self, idx: int) -> np.ndarray:
        return self.vals[self.ptr[idx]:self.ptr[idx + 1]]

    def as_dict(self) -> dict:
        """{(row, level): (support, values, sum)} view, for inspection and tests."""
        return {
            (int(self.row[b]), int(self.level[b])): (self.support(b), self.values(b), float(self.sums[b]))
            for b in range(len(self))
        }


def stratify(A: ReducedInstance, params: Parameters) -> Strata:
    """Partition every stored entry of ``A`` into per-row magnitude buckets.

    Zero entries are never stored, so every entry lands in exactly one
    bucket.  An entry above ``params.beta`` means the instance is corrupt.
    """
    if A.vals.size and float(A.vals.max()) > params.beta:
        j = int(np.argmax(A.vals))
        raise HypothesisViolation([
            f"corrupt instance: entry ({int(A.rows[j])}, {int(A.cols[j])}) = "
            f"{float(A.vals[j])!r} exceeds beta = {params.beta!r}"
        ])
    if A.vals.size == 0:
        empty_i = np.zeros(0, dtype=np.int64)
        return Strata(n=A.n, m=A.m, level_floor=params.level_floor,
                      row=empty_i, level=empty_i, ptr=np.zeros(1, dtype=np.int64),
                      cols=empty_i, vals=np.zeros(0), sums=np.zeros(0))
    levels = floor_neg_log2_array(A.vals)
    order = np.lexsort((A.cols, levels, A.rows))
    r, k, c, v = A.rows[order], levels[order], A.cols[order], A.vals[order]
    change = np.empty(r.size, dtype=bool)
    change[0] = True
    change[1:] = (r[1:] != r[:-1]) | (k[1:] != k[:-1])
    starts = np.flatnonzero(change)
    ptr = np.append(starts, r.size).astype(np.int64)
    sums = np.add.reduceat(v, starts)
    if int(k[starts].min()) < params.level_floor:
        raise InternalInconsistency("bucket below the level floor despite entries <= beta")
    row, level = r[starts], k[starts]
    for a in (c, v, ptr, sums, row, level):
        a.setflags(write=False)
    return Strata(n=A.n, m=A.m, level_floor=params.level_floor,
                  row=row, level=level, ptr=ptr, cols=c, vals=v, sums=sums)


def bucket_threshold(bucket_sum: float, level: int, params: Parameters) -> float:
    """Tolerated discrepancy of one bucket: eps * sum + alpha * 2^(-level/2)."""
    if level < params.level_floor:
        raise HypothesisViolation([
            f"level {level} is below the floor {params.level_floor}"
        ])
    if bucket_sum < 0:
        raise ValueError(f"bucket sum must be non-negative, got {bucket_sum!r}")
    return params.eps * bucket_sum + params.alpha * 2.0 ** (-level / 2.0)


def row_threshold_budget(params: Parameters, row_sum: float = 1.0) -> float:
    """Sum of bucket thresholds over all levels >= the floor, for one row.

    The alpha terms form a geometric series; with row_sum <= 1 the total
    stays below ``params.bound``.
    """
    return params.eps * row_sum + params.alpha * 2.0 ** (-params.level_floor / 2.0) * GEOMETRIC_TAIL


@dataclass(frozen=True, eq=False)
class SignVector:
    """A +-1 assignment, one sign per column."""

    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values)
        if v.ndim != 1 or v.size < 1:
            raise ValueError("sign vector must be a non-empty 1-d sequence")
        v = v.astype(np.int8)
        if not np.isin(v, (-1, 1)).all():
            raise ValueError("sign vector entries must be -1 or +1")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    def __len__(self) -> int:
        return int(self.values.size)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SignVector):
            return NotImplemented
        return self.values.shape == other.values.shape and bool(
            (self.values == other.values).all()
        )

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.values, dtype=dtype)


def discrepancy(M, y) -> tuple[np.ndarray, float]:
    """Per-row |M @ y| and its maximum.

    Accepts any coordinate matrix (:class:`InputMatrix` or
    :class:`ReducedInstance`) and a sign vector of matching length.
    """
    yv = np.asarray(getattr(y, "values", y), dtype=np.float64)
    if yv.shape != (M.m,):
        raise ValueError(
            f"sign vector length {yv.size} does not match column count {M.m}"
        )
    if M.vals.size:
        per_row = np.bincount(M.rows, weights=M.vals * yv[M.cols], minlength=M.n)
    else:
        per_row = np.zeros(M.n)
    per_row = np.abs(per_row)
    return per_row, float(per_row.max())
