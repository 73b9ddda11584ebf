"""Experiment execution and CSV reporting."""
from __future__ import annotations

import csv
import logging
import statistics
import time
from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path

from ..continuous import accelerated_continuous_greedy, swap_round
from ..core import AlgoParams, QueryLedger, ValidationError, greedy_rank
from ..functions import EXACT_CAP
from ..matroids import IntersectionConstraint
from ..maximize import (BRUTE_CAP, adaptive_sequencing, adaptive_sequencing_pp, brute_force, greedy,
                        lazy_greedy, max_feasible_size)

log = logging.getLogger(__name__)

ALGOS = ("aseq", "aseq-pp", "acg", "greedy", "lazy", "brute")


@dataclass
class ResultRow:
    algo: str
    n: int
    k: int
    epsilon: float
    lambda_: float
    rho: int
    seed: int
    value: float
    opt: float | None = None
    ratio: float | None = None
    f_rounds: float = 0
    f_queries: int = 0
    m_steps: int = 0
    m_queries: int = 0
    wall_ms: float = 0.0
    value_std: float | None = None
    f_rounds_std: float | None = None


COLUMNS = [("lambda" if f.name == "lambda_" else f.name) for f in fields(ResultRow)]


def row_dict(row: ResultRow) -> dict:
    d = asdict(row)
    d["lambda"] = d.pop("lambda_")
    return {c: ("" if d[c] is None else d[c]) for c in COLUMNS}


def write_rows(path, rows) -> None:
    """Append rows; the header is written only when the file is new or empty."""
    path = Path(path)
    new = not path.exists() or path.stat().st_size == 0
    with path.open("a", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=COLUMNS)
        if new:
            w.writeheader()
        for row in rows:
            w.writerow(row_dict(row))


def read_rows(path) -> list:
    with Path(path).open(newline="") as fh:
        return list(csv.DictReader(fh))


def constraint_size(constraint) -> int:
    """rank(N); for intersections exact up to n <= 20, else a greedy lower bound (logged)."""
    if constraint.has_rank:
        return constraint.rank()
    if constraint.n <= EXACT_CAP:
        return max_feasible_size(constraint)
    log.warning("k for %r is a greedy lower bound (n > %d)", constraint, EXACT_CAP)
    return greedy_rank(constraint, range(constraint.n), QueryLedger())


def _run_once(f, constraint, algo, params, surrogate):
    if algo == "aseq":
        return adaptive_sequencing(f, constraint, params)
    if algo == "aseq-pp":
        return adaptive_sequencing_pp(f, constraint, params)
    if algo == "greedy":
        return greedy(f, constraint)
    if algo == "lazy":
        return lazy_greedy(f, constraint)
    if algo == "brute":
        return brute_force(f, constraint)
    state = accelerated_continuous_greedy(f, constraint, params, surrogate=surrogate)
    S = swap_round(state.x, constraint, (params.seed, 1), state.ledger)
    state.value = float(f(S))
    return state


def run_experiment(f, constraint, algo: str, params: AlgoParams, trials: int = 1, opt: float | None = None,
                   with_opt: bool = False, surrogate: str = "mc") -> list:
    """Run ``trials`` seeds (params.seed, params.seed + 1, ...) and return result rows.

    With more than one trial a summary row (algo + "+summary") is appended
    carrying mean/std of value and f_rounds.
    """
    if algo not in ALGOS:
        raise ValidationError(f"unknown algorithm {algo!r}; choose from {ALGOS}")
    if algo == "acg" and isinstance(constraint, IntersectionConstraint):
        raise ValidationError("acg refuses intersection constraints: its guarantee needs a single "
                              "matroid's exchange property; use aseq-pp instead")
    if algo == "brute" and f.n > BRUTE_CAP:
        raise ValidationError(f"brute force is capped at n <= {BRUTE_CAP}, got n={f.n}")
    if trials < 1:
        raise ValidationError("trials must be >= 1")
    if opt is None and with_opt:
        if f.n > BRUTE_CAP:
            raise ValidationError(f"cannot compute OPT by brute force for n={f.n} > {BRUTE_CAP}")
        opt = brute_force(f, constraint).value
    k = constraint_size(constraint)
    rows = []
    for trial in range(trials):
        p = replace(params, seed=params.seed + trial)
        start = time.perf_counter()
        res = _run_once(f, constraint, algo, p, surrogate)
        wall = (time.perf_counter() - start) * 1000.0
        c = res.ledger.counters()
        rows.append(ResultRow(algo, f.n, k, p.epsilon, p.step_size, p.rho, p.seed, res.value, opt,
                              (res.value / opt) if opt else None, c["f_rounds"], c["f_queries"],
                              c["m_steps"], c["m_queries"], round(wall, 3)))
    if trials > 1:
        vals = [r.value for r in rows]
        fr = [r.f_rounds for r in rows]
        mean_v = statistics.fmean(vals)
        rows.append(ResultRow(
            algo + "+summary", f.n, k, params.epsilon, params.step_size, params.rho, params.seed, mean_v, opt,
            (mean_v / opt) if opt else None, statistics.fmean(fr),
            round(statistics.fmean(r.f_queries for r in rows)), round(statistics.fmean(r.m_steps for r in rows)),
            round(statistics.fmean(r.m_queries for r in rows)), round(sum(r.wall_ms for r in rows), 3),
            statistics.pstdev(vals), statistics.pstdev(fr)))
    return rows

