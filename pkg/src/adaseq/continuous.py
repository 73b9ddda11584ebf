"""Accelerated continuous greedy over the multilinear surrogate, and swap rounding."""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction

import numpy as np

from .core import (AlgoParams, Matroid, QueryLedger, SetFunction, ValidationError, batch_independent,
                   default_mc_samples, default_outer_iterations)
from .functions import ExactSurrogate, FractionalPoint, SubsetTable, SurrogateFunction, exact_F
from .matroids import IntersectionConstraint
from .maximize import _sequencing, constraint_rank

__all__ = ["AcgState", "accelerated_continuous_greedy", "swap_round", "exact_F"]


@dataclass
class AcgState:
    x: FractionalPoint
    ledger: QueryLedger
    chosen: list = field(default_factory=list)
    gains: list = field(default_factory=list)
    F_estimates: list = field(default_factory=list)
    reports: list = field(default_factory=list)
    value: float | None = None  # f of a rounded set, filled in by callers that round

    @property
    def iterations(self):
        return len(self.chosen)

    def trace_rows(self):
        return [{"iteration": i + 1, "gain": g, "F_estimate": F}
                for i, (g, F) in enumerate(zip(self.gains, self.F_estimates))]


def accelerated_continuous_greedy(f: SetFunction, matroid: Matroid, params: AlgoParams | None = None, *,
                                  surrogate: str = "mc", generator: str = "independence",
                                  instrument: bool = False, rng=None) -> AcgState:
    """1/step_size rounds of x <- x + step * 1_S, with S from adaptive sequencing on
    the surrogate g(T) = F(x + step*1_T) - F(x).

    ``surrogate="mc"`` samples g with ``params.mc_samples`` coupled draws per
    round; ``surrogate="exact"`` enumerates F (n <= 20, testing only).  The
    threshold schedule restarts in every round.
    """
    params = AlgoParams() if params is None else params
    if isinstance(matroid, IntersectionConstraint):
        raise ValidationError("continuous greedy needs a single matroid (exchange property); "
                              "use adaptive sequencing++ for intersections")
    if f.n != matroid.n:
        raise ValidationError(f"function has n={f.n} but matroid has n={matroid.n}")
    if surrogate not in ("mc", "exact"):
        raise ValidationError(f"surrogate must be 'mc' or 'exact', got {surrogate!r}")
    n = f.n
    eps = params.epsilon
    step = params.step_fraction
    rng = np.random.default_rng(params.seed) if rng is None else rng
    ledger = QueryLedger()
    k = constraint_rank(matroid, ledger)
    inner = replace(params, outer_iterations=params.outer_iterations
                    or default_outer_iterations(eps, k, float(step)))
    m = params.mc_samples or default_mc_samples(eps, n)
    table = SubsetTable(f) if surrogate == "exact" else None
    state = AcgState(FractionalPoint.zeros(n), ledger)
    base = table.F(state.x.coords) if table is not None else f(frozenset())
    running = base
    for it in range(params.n_steps):
        x = state.x
        if table is not None:
            g = ExactSurrogate(table, x, float(step))
        else:
            g = SurrogateFunction(f, x, float(step), m, seed=params.seed, stream=(it,))
        rep = _sequencing(g, matroid, inner, 1, generator, "linear", instrument, rng, "aseq")
        ledger.absorb(rep.ledger)
        state.x = x.add(step, rep.solution)
        state.chosen.append(rep.solution)
        state.gains.append(rep.value)
        state.reports.append(rep)
        running += rep.value
        state.F_estimates.append(table.F(state.x.coords) if table is not None else running)
    return state


def swap_round(x: FractionalPoint, matroid: Matroid, rng=None, ledger: QueryLedger | None = None) -> frozenset:
    """Round a convex combination of independent sets to one independent set.

    Sets are padded with dummy elements to a common size q (the largest set
    size) so all are bases of the truncation of M plus q free elements;
    missing mass 1 - sum(weights) becomes an all-dummy base.  Bases are then
    merged pairwise by random exchanges that keep each element's inclusion
    probability equal to x_i.  No value queries are made.
    """
    if x.combo is None:
        raise ValidationError("swap rounding needs a convex-combination witness")
    rng = np.random.default_rng(rng) if not isinstance(rng, np.random.Generator) else rng
    ledger = QueryLedger() if ledger is None else ledger
    n = x.n
    pieces = [(w, S) for w, S in x.combo if w > 0]
    if pieces:
        ok = batch_independent(matroid, [S for _, S in pieces], ledger)
        if not all(ok):
            bad = [sorted(S) for (_, S), g in zip(pieces, ok) if not g]
            raise ValidationError(f"combination sets are not independent: {bad}")
    total = sum((w for w, _ in pieces), Fraction(0))
    if total < 1:
        pieces.append((1 - total, frozenset()))
    q = max(len(S) for _, S in pieces)
    if q == 0:
        return frozenset()
    dummies = list(range(n, n + q))
    bases = [(w, frozenset(S) | frozenset(dummies[: q - len(S)])) for w, S in pieces]

    def real(T):
        return frozenset(a for a in T if a < n)

    beta, B = bases[0]
    for gamma, C in bases[1:]:
        while B != C:
            e = min(B - C)
            cands = sorted(C - B)
            queries = []
            for e2 in cands:
                queries.append(real((B - {e}) | {e2}))
                queries.append(real((C - {e2}) | {e}))
            ok = batch_independent(matroid, list(dict.fromkeys(queries)), ledger)
            verdict = dict(zip(dict.fromkeys(queries), ok))
            partner = next((e2 for e2 in cands
                            if verdict[real((B - {e}) | {e2})] and verdict[real((C - {e2}) | {e})]), None)
            if partner is None:
                raise ValidationError("no symmetric exchange found; the constraint is not a matroid")
            if rng.random() < float(beta / (beta + gamma)):
                C = (C - {partner}) | {e}
            else:
                B = (B - {e}) | {partner}
        beta += gamma
    return real(B)
