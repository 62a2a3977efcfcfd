"""Instance file formats and report rendering.

Matrices travel as Matrix Market coordinate-real files carrying a mandatory
``%%disc R=<num> Delta=<num>`` comment with the declared budgets; hypergraphs
as plain edge lists, one ``e v1 v2 ...`` line per edge with 1-based vertex
ids.  Emission is canonical (sorted coordinates, 17-significant-digit
floats) so that parse and emit round-trip bit-identically.
"""

from __future__ import annotations

import math
import re
from pathlib import Path

import numpy as np

from .model import InputMatrix
from .reduction import HypergraphInstance

__all__ = [
    "ParseError",
    "parse_matrix_text",
    "format_matrix",
    "parse_hypergraph_text",
    "format_hypergraph",
    "parse_instance",
    "write_instance",
    "format_certificate",
]

_DISC_RE = re.compile(r"^%%disc\s+R=(\S+)\s+Delta=(\S+)\s*$")


class ParseError(ValueError):
    """Malformed instance file; the message carries a line diagnostic."""


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _parse_float(token: str, ln: int, what: str) -> float:
    try:
        v = float(token)
    except ValueError:
        raise ParseError(f"line {ln}: {what} {token!r} is not a real number") from None
    if not math.isfinite(v):
        raise ParseError(f"line {ln}: {what} {token!r} is not finite")
    return v


def _parse_int(token: str, ln: int, what: str) -> int:
    try:
        return int(token)
    except ValueError:
        raise ParseError(f"line {ln}: {what} {token!r} is not an integer") from None


def parse_matrix_text(text: str) -> InputMatrix:
    """Parse a Matrix Market coordinate-real file with a %%disc header."""
    lines = text.splitlines()
    if not lines:
        raise ParseError("line 1: empty input")
    banner = lines[0].split()
    if not lines[0].startswith("%%MatrixMarket"):
        raise ParseError("line 1: missing %%MatrixMarket banner")
    fields = {t.lower() for t in banner[1:]}
    if not {"matrix", "coordinate", "real"} <= fields:
        raise ParseError("line 1: only 'matrix coordinate real' files are supported")
    if fields - {"matrix", "coordinate", "real", "general"}:
        raise ParseError("line 1: only general symmetry is supported")
    declared = None
    size = None
    entries = []
    expected = None
    for ln, raw in enumerate(lines[1:], start=2):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("%"):
            m = _DISC_RE.match(line)
            if m:
                if declared is not None:
                    raise ParseError(f"line {ln}: duplicate %%disc header")
                declared = (_parse_float(m.group(1), ln, "declared R"),
                            _parse_float(m.group(2), ln, "declared Delta"))
            continue
        tokens = line.split()
        if size is None:
            if len(tokens) != 3:
                raise ParseError(f"line {ln}: size line needs 'rows cols nnz'")
            size = tuple(_parse_int(t, ln, "size field") for t in tokens)
            expected = size[2]
            continue
        if len(tokens) != 3:
            raise ParseError(f"line {ln}: entry needs 'row col value' (3 tokens, got {len(tokens)})")
        i = _parse_int(tokens[0], ln, "row index")
        j = _parse_int(tokens[1], ln, "column index")
        v = _parse_float(tokens[2], ln, "entry value")
        if not (1 <= i <= size[0]):
            raise ParseError(f"line {ln}: row index {i} outside [1, {size[0]}]")
        if not (1 <= j <= size[1]):
            raise ParseError(f"line {ln}: column index {j} outside [1, {size[1]}]")
        if abs(v) > 1.0:
            raise ParseError(f"line {ln}: entry magnitude {v!r} exceeds 1")
        entries.append((i - 1, j - 1, v, ln))
    if size is None:
        raise ParseError(f"line {len(lines)}: missing size line")
    if declared is None:
        raise ParseError(f"line {len(lines)}: missing '%%disc R=<num> Delta=<num>' header")
    if len(entries) != expected:
        raise ParseError(
            f"line {len(lines)}: expected {expected} entries, found {len(entries)}"
        )
    seen = {}
    for i, j, _, ln in entries:
        if (i, j) in seen:
            raise ParseError(f"line {ln}: duplicate entry ({i + 1}, {j + 1})")
        seen[(i, j)] = ln
    V = InputMatrix.from_entries(size[0], size[1], [(i, j, v) for i, j, v, _ in entries],
                                 declared[0], declared[1])
    row = V.row_l1()
    bad = np.flatnonzero(row > declared[0] * (1.0 + 1e-9))
    if bad.size:
        i = int(bad[0])
        raise ParseError(
            f"row {i + 1} L1 norm {float(row[i])!r} exceeds the declared R={_fmt(declared[0])}"
        )
    col = V.col_l1()
    bad = np.flatnonzero(col > declared[1] * (1.0 + 1e-9))
    if bad.size:
        j = int(bad[0])
        raise ParseError(
            f"column {j + 1} L1 norm {float(col[j])!r} exceeds the declared Delta={_fmt(declared[1])}"
        )
    return V


def format_matrix(V: InputMatrix) -> str:
    lines = [
        "%%MatrixMarket matrix coordinate real general",
        f"%%disc R={_fmt(V.row_bound)} Delta={_fmt(V.col_bound)}",
        f"{V.n} {V.m} {V.nnz}",
    ]
    for i, j, v in zip(V.rows, V.cols, V.vals):
        lines.append(f"{int(i) + 1} {int(j) + 1} {_fmt(v)}")
    return "\n".join(lines) + "\n"


def parse_hypergraph_text(text: str) -> HypergraphInstance:
    """Parse an edge list: one 'e v1 v2 ...' line per edge, 1-based ids.

    Edge-size and degree bounds are computed from the data, so they are
    tight by construction.
    """
    edges = []
    max_vertex = 0
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line[0] in "#%":
            continue
        tokens = line.split()
        if tokens[0] != "e":
            raise ParseError(f"line {ln}: expected an 'e v1 v2 ...' edge line")
        if len(tokens) < 2:
            raise ParseError(f"line {ln}: edge has no vertices")
        vs = []
        for t in tokens[1:]:
            v = _parse_int(t, ln, "vertex id")
            if v < 1:
                raise ParseError(f"line {ln}: vertex ids are 1-based, got {v}")
            vs.append(v - 1)
        if len(set(vs)) != len(vs):
            raise ParseError(f"line {ln}: edge repeats a vertex")
        max_vertex = max(max_vertex, max(vs) + 1)
        edges.append(tuple(sorted(vs)))
    if not edges:
        raise ParseError("line 1: no edges found")
    degree = np.zeros(max_vertex, dtype=np.int64)
    for e in edges:
        degree[list(e)] += 1
    return HypergraphInstance(n_vertices=max_vertex, edges=tuple(edges),
                              max_edge_size=max(len(e) for e in edges),
                              max_degree=int(degree.max()))


def format_hypergraph(H: HypergraphInstance) -> str:
    lines = ["e " + " ".join(str(v + 1) for v in edge) for edge in H.edges]
    return "\n".join(lines) + "\n"


def _sniff(text: str) -> str:
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line[0] == "#":
            continue
        if line.startswith("%"):
            return "matrix"
        return "hypergraph" if line.split()[0] == "e" else "matrix"
    raise ParseError("line 1: empty input")


def parse_instance(path, fmt: str | None = None):
    """Read an instance file; ``fmt`` is 'matrix', 'hypergraph' or None to sniff."""
    text = Path(path).read_text()
    kind = fmt or _sniff(text)
    if kind == "matrix":
        return parse_matrix_text(text)
    if kind == "hypergraph":
        return parse_hypergraph_text(text)
    raise ParseError(f"unknown format {kind!r} (expected 'matrix' or 'hypergraph')")


def write_instance(instance, path) -> None:
    if isinstance(instance, InputMatrix):
        Path(path).write_text(format_matrix(instance))
    elif isinstance(instance, HypergraphInstance):
        Path(path).write_text(format_hypergraph(instance))
    else:
        raise TypeError(f"cannot serialize {type(instance).__name__}")


def format_certificate(report, params) -> str:
    """Render a certificate report as machine-parseable key = value lines."""
    max_col = float(report.column_weight_sums.max()) if report.column_weight_sums.size else 0.0
    lines = [
        "kind = lll-certificate",
        f"passed = {str(report.passed).lower()}",
        f"events = {report.n_events}",
        f"min_margin = {report.min_margin!r}",
        f"resample_budget = {report.resample_budget!r}",
        f"column_weight_ok = {str(report.column_weight_ok).lower()}",
        f"max_column_weight = {max_col!r}",
        f"beta = {params.beta!r}",
        f"delta = {params.delta!r}",
        f"alpha = {params.alpha!r}",
        f"eps = {params.eps!r}",
        f"level_floor = {params.level_floor}",
        f"bound = {params.bound!r}",
    ]
    for k in sorted(report.level_slacks):
        lines.append(f"level_slack_{k} = {report.level_slacks[k]!r}")
    if report.failure:
        lines.append(f"failure = {report.failure}")
    return "\n".join(lines) + "\n"
