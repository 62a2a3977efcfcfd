"""Seeded benchmark campaigns over generated instance grids.

Each (size, seed, mode) triple yields one report row; failures are recorded
in their row and never abort the campaign.  Rows are computed on an
optional thread pool (``LOWDISC_THREADS``) and sorted by key before
emission, so the report is independent of scheduling.
"""

from __future__ import annotations

import csv
import io
import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from .model import HypothesisViolation, discrepancy
from .generate import random_hypergraph, random_matrix
from .pipeline import solve_hypergraph, solve_matrix
from .reduction import hypergraph_incidence
from .solver import brute_force_optimum, random_coloring

__all__ = ["BenchConfig", "BenchReport", "run_benchmark", "format_bench_report"]

MODES = ("reduce", "direct", "baseline", "oracle")

ROW_FIELDS = ("size", "seed", "mode", "ok", "certified", "achieved", "bound",
              "optimum", "resamples", "wall", "error")


@dataclass(frozen=True)
class BenchConfig:
    """A benchmark campaign: instance family, size grid, seeds and modes.

    Matrix sizes are (n, m, R, Delta) tuples, hypergraph sizes
    (vertices, R, Delta).  The exhaustive oracle mode is allowed only when
    every instance has at most ``oracle_cap`` sign variables.
    """

    family: str
    sizes: tuple
    seeds: tuple
    modes: tuple
    density: float = 0.2
    max_rounds: int = 10**6
    oracle_cap: int = 24
    output: str | None = None
    csv_output: str | None = None

    def __post_init__(self):
        if self.family not in ("matrix", "hypergraph"):
            raise HypothesisViolation([f"unknown family {self.family!r}"])
        object.__setattr__(self, "sizes", tuple(tuple(int(x) for x in s) for s in self.sizes))
        object.__setattr__(self, "seeds", tuple(int(s) for s in self.seeds))
        object.__setattr__(self, "modes", tuple(self.modes))
        problems = []
        if not self.sizes:
            problems.append("size grid is empty")
        if not self.seeds:
            problems.append("seed list is empty")
        if not self.modes:
            problems.append("mode list is empty")
        want = 4 if self.family == "matrix" else 3
        for s in self.sizes:
            if len(s) != want:
                problems.append(
                    f"size {s!r} needs {want} fields for family {self.family!r}"
                )
        for mode in self.modes:
            if mode not in MODES:
                problems.append(f"unknown mode {mode!r}")
        if "direct" in self.modes and self.family != "hypergraph":
            problems.append("direct mode applies only to the hypergraph family")
        if "oracle" in self.modes:
            for s in self.sizes:
                n_vars = s[1] if self.family == "matrix" else s[0]
                if n_vars > self.oracle_cap:
                    problems.append(
                        f"oracle mode needs at most {self.oracle_cap} sign variables, "
                        f"size {s!r} has {n_vars}"
                    )
        if problems:
            raise HypothesisViolation(problems)


@dataclass(frozen=True)
class BenchReport:
    config: BenchConfig
    rows: tuple
    aggregates: dict
    wall: float


def _size_token(family, size):
    if family == "matrix":
        return f"n={size[0]},m={size[1]},R={size[2]},Delta={size[3]}"
    return f"vertices={size[0]},R={size[1]},Delta={size[2]}"


def _make_instance(config, size, seed):
    if config.family == "matrix":
        n, m, R, D = size
        return random_matrix(n, m, float(R), float(D), config.density, seed)
    v, R, D = size
    return random_hypergraph(v, R, D, seed)


def _run_row(config: BenchConfig, size, seed: int, mode: str) -> dict:
    row = {k: "-" for k in ROW_FIELDS}
    row.update(size=_size_token(config.family, size), seed=seed, mode=mode, ok=True)
    t0 = time.perf_counter()
    try:
        inst = _make_instance(config, size, seed)
        matrix = inst if config.family == "matrix" else hypergraph_incidence(inst)
        if mode == "baseline":
            y = random_coloring(matrix.m, seed)
            row["achieved"] = discrepancy(matrix, y)[1]
        elif mode == "oracle":
            _, opt = brute_force_optimum(matrix, cap=config.oracle_cap)
            row["achieved"] = opt
            row["optimum"] = opt
        elif mode == "direct":
            out = solve_hypergraph(inst, mode="direct", seed=seed,
                                   max_rounds=config.max_rounds)
            row["achieved"] = out.result.achieved
            row["bound"] = out.result.bound
            row["certified"] = out.result.certified
            row["resamples"] = out.result.total_resamples
        else:  # reduce
            out = solve_matrix(matrix, seed=seed, max_rounds=config.max_rounds)
            row["achieved"] = out.lifted.max_disc
            row["bound"] = out.lifted.proven_bound
            row["certified"] = out.result.certified
            row["resamples"] = out.result.total_resamples
    except Exception as exc:  # recorded per row; the campaign continues
        row["ok"] = False
        row["error"] = f"{type(exc).__name__}: {exc}"
    row["wall"] = time.perf_counter() - t0
    return row


def run_benchmark(config: BenchConfig) -> BenchReport:
    t0 = time.perf_counter()
    tasks = [(si, size, seed, mode)
             for si, size in enumerate(config.sizes)
             for seed in config.seeds
             for mode in config.modes]
    workers = int(os.environ.get("LOWDISC_THREADS", "1"))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(lambda t: _run_row(config, t[1], t[2], t[3]), tasks))
    else:
        rows = [_run_row(config, size, seed, mode) for _, size, seed, mode in tasks]
    rows.sort(key=lambda r: (r["size"], r["seed"], MODES.index(r["mode"])))
    agg = {
        "rows": len(rows),
        "failed": sum(1 for r in rows if r["ok"] is not True),
        "certified": sum(1 for r in rows if r["certified"] is True),
        "uncertified": sum(1 for r in rows if r["certified"] is False),
    }
    ratios = [r["achieved"] / r["bound"] for r in rows
              if isinstance(r["achieved"], float) and isinstance(r["bound"], float)
              and r["bound"] > 0]
    if ratios:
        agg["max_achieved_over_bound"] = max(ratios)
    if "oracle" in config.modes:
        probe = [r["optimum"] / math.sqrt(_row_R(config, r)) for r in rows
                 if r["mode"] == "oracle" and isinstance(r["optimum"], float)]
        if probe:
            # a measurement only: worst observed optimum / sqrt(R)
            agg["probe_max_optimum_over_sqrtR"] = max(probe)
    report = BenchReport(config=config, rows=tuple(rows), aggregates=agg,
                         wall=time.perf_counter() - t0)
    if config.output:
        Path(config.output).write_text(format_bench_report(report))
    if config.csv_output:
        Path(config.csv_output).write_text(_format_csv(report))
    return report


def _row_R(config, row):
    token = dict(kv.split("=") for kv in row["size"].split(","))
    return float(token["R"])


def _render(value) -> str:
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float):
        return repr(value)
    return str(value)


def format_bench_report(report: BenchReport) -> str:
    """Key/value header, one key=value row line per (size, seed, mode)."""
    cfg = report.config
    lines = [
        "kind = benchmark-report",
        f"family = {cfg.family}",
        f"sizes = {';'.join(_size_token(cfg.family, s) for s in cfg.sizes)}",
        f"seeds = {','.join(str(s) for s in cfg.seeds)}",
        f"modes = {','.join(cfg.modes)}",
        f"density = {cfg.density!r}",
        f"max_rounds = {cfg.max_rounds}",
        f"wall = {report.wall!r}",
    ]
    for key in sorted(report.aggregates):
        lines.append(f"{key} = {_render(report.aggregates[key])}")
    lines.append("")
    for row in report.rows:
        parts = [f"{k}={_render(row[k])}" for k in ROW_FIELDS if k != "error"]
        if row["error"] != "-":
            parts.append(f'error="{row["error"]}"')
        lines.append("row " + " ".join(parts))
    return "\n".join(lines) + "\n"


def _format_csv(report: BenchReport) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=ROW_FIELDS)
    writer.writeheader()
    for row in report.rows:
        writer.writerow({k: _render(row[k]) for k in ROW_FIELDS})
    return buf.getvalue()
