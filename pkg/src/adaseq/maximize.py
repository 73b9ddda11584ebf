"""Combinatorial maximizers: adaptive sequencing (plain, ++ and binary-search i*), greedy, lazy greedy, brute force."""
from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass, field

import numpy as np

from .core import (AlgoParams, Matroid, OracleError, QueryLedger, SetFunction, ValidationError,
                   batch_eval, batch_independent, batch_rank, default_outer_iterations, greedy_rank)
from .matroids import ContractedMatroid
from .sequencing import GENERATORS, random_sequence

BRUTE_CAP = 24


@dataclass
class IterationRecord:
    outer: int
    t: float
    x_size: int
    istar: int
    added: tuple
    trial: int = 0


@dataclass
class SolutionReport:
    algo: str
    solution: frozenset
    value: float
    ledger: QueryLedger
    trace: list = field(default_factory=list)
    checks: dict | None = None
    outer_iterations: int = 0

    @property
    def size(self):
        return len(self.solution)


def _check_inputs(f: SetFunction, constraint: Matroid):
    if f.n != constraint.n:
        raise ValidationError(f"function has n={f.n} but constraint has n={constraint.n}")


def constraint_rank(constraint: Matroid, ledger: QueryLedger) -> int:
    """rank(N) in one step when native, else the sequential greedy scan."""
    full = frozenset(range(constraint.n))
    if constraint.has_rank:
        return batch_rank(constraint, [full], ledger)[0]
    return greedy_rank(constraint, full, ledger)


def find_istar_linear(sizes, x_size: int, epsilon: float, start: int = 0) -> int:
    """Smallest i with sizes[i - start] <= (1 - eps) * x_size."""
    bound = (1.0 - epsilon) * x_size
    for pos, s in enumerate(sizes):
        if s <= bound:
            return start + pos
    raise OracleError("no position satisfies the i* condition; the chain never empties")


def find_istar_binary(size_at, lo: int, hi: int, x_size: int, epsilon: float) -> int:
    """Smallest i in [lo, hi] with size_at(i) <= (1 - eps) * x_size.

    Assumes size_at is non-increasing on [lo, hi] and that hi qualifies;
    size_at(hi) is never called.
    """
    bound = (1.0 - epsilon) * x_size
    while lo < hi:
        mid = (lo + hi) // 2
        if size_at(mid) <= bound:
            hi = mid
        else:
            lo = mid + 1
    return lo


class _Instrument:
    """Exact, uncharged checks of the threshold invariant, chain property and prefix quality."""

    def __init__(self, f, constraint, epsilon):
        self.f = f
        self.m = constraint
        self.epsilon = epsilon
        self.threshold = []
        self.chain_violations = 0
        self.chain_checks = 0
        self.prefix_quality = []

    def max_marginal(self, S):
        fS = self.f(S)
        best = 0.0
        for a in range(self.f.n):
            if a not in S and self.m._independent(S | {a}):
                best = max(best, self.f(S | {a}) - fS)
        return best

    def after_t_update(self, t, S):
        best = self.max_marginal(S)
        self.threshold.append((t, best, t >= (1.0 - self.epsilon) * best))

    def chain(self, levels):
        for A, B in zip(levels, levels[1:]):
            self.chain_checks += 1
            if not B <= A:
                self.chain_violations += 1

    def prefix(self, S, order, istar):
        for ell in range(istar):
            before = S | frozenset(order[:ell])
            gain = self.f(before | {order[ell]}) - self.f(before)
            self.prefix_quality.append((gain, self.max_marginal(before)))

    def as_dict(self):
        return {
            "threshold": self.threshold,
            "threshold_violations": sum(1 for *_, ok in self.threshold if not ok),
            "chain_checks": self.chain_checks,
            "chain_violations": self.chain_violations,
            "prefix_quality": self.prefix_quality,
        }


def _sequencing(f, constraint, params, rho, generator, istar_search, instrument, rng, algo):
    _check_inputs(f, constraint)
    if generator not in GENERATORS:
        raise ValidationError(f"unknown sequence generator {generator!r}")
    if istar_search not in ("linear", "binary"):
        raise ValidationError(f"istar_search must be 'linear' or 'binary', got {istar_search!r}")
    if istar_search == "binary" and rho != 1:
        raise ValidationError("binary-search i* is only defined for a single trial (rho=1)")
    eps = params.epsilon
    n = f.n
    N = frozenset(range(n))
    rng = np.random.default_rng(params.seed) if rng is None else rng
    ledger = QueryLedger()
    k = constraint_rank(constraint, ledger)
    delta = params.outer_iterations or default_outer_iterations(eps, k)
    inst = _Instrument(f, constraint, eps) if instrument else None
    state = {"t": None, "t_min": None, "fS": None}
    trace = []
    S = frozenset()

    def run_batch(queries):
        # the first value round also carries the singleton queries that fix t
        extra = []
        if state["t"] is None:
            extra = [frozenset((a,)) for a in range(n)] + [frozenset()]
        if state["fS"] is None:
            extra.append(S)
        distinct = list(dict.fromkeys(list(queries) + extra))
        if not distinct:
            return {}
        vals = dict(zip(distinct, batch_eval(f, distinct, ledger)))
        if state["t"] is None:
            t0 = max(vals[frozenset((a,))] for a in range(n))
            state["t"] = t0
            state["t_min"] = eps * t0 / max(k, 1)
            ledger.t_history.append(t0)
        if state["fS"] is None:
            state["fS"] = vals[S]
        return vals

    outer_done = 0
    maximal = False
    for outer in range(delta):
        if state["t"] is not None and state["t"] < state["t_min"]:
            break
        outer_done += 1
        X = sorted(N - S)
        while X:
            Xset = frozenset(X)
            contracted = ContractedMatroid(constraint, S, Xset)
            seqs = [random_sequence(contracted, rng, ledger, generator).order for _ in range(rho)]
            if len(Xset) == n - len(S) and not any(seqs):
                maximal = True
                break
            if istar_search == "binary":
                istar, level_next, order = _binary_iteration(
                    constraint, S, X, seqs[0], eps, ledger, run_batch, state, inst)
                j = 0
            else:
                istar, level_next, order, j = _parallel_iteration(
                    constraint, S, X, seqs, eps, ledger, run_batch, state, inst)
            if inst is not None and istar > 0:
                inst.prefix(S, order, istar)
            added = tuple(order[:istar])
            S = S | frozenset(added)
            trace.append(IterationRecord(outer, state["t"], len(X), istar, added, j))
            X = sorted(level_next)
        if maximal:
            break
        if state["t"] is not None:
            state["t"] *= 1.0 - eps
            ledger.t_history.append(state["t"])
            if inst is not None:
                inst.after_t_update(state["t"], S)

    if state["fS"] is None:
        state["fS"] = f(S)
    return SolutionReport(algo, S, float(state["fS"]), ledger, trace,
                          inst.as_dict() if inst else None, outer_done)


def _parallel_iteration(constraint, S, X, seqs, eps, ledger, run_batch, state, inst):
    """All X_i of all trials in one matroid step and one value round."""
    plans = []
    mqueries = []
    for order in seqs:
        levels = []
        for i in range(len(order) + 1):
            P = S.union(order[:i])
            cands = [a for a in X if a not in P]
            levels.append((P, cands))
            mqueries.extend(P | {a} for a in cands)
        mqueries.append(S.union(order))
        plans.append(levels)
    mqueries = list(dict.fromkeys(mqueries))
    feas = dict(zip(mqueries, batch_independent(constraint, mqueries, ledger)))
    fqueries = []
    for order, levels in zip(seqs, plans):
        if not feas[S.union(order)]:
            raise OracleError("a generated sequence is infeasible; the matroid oracle is inconsistent")
        for i, (P, cands) in enumerate(levels):
            good = [a for a in cands if feas[P | {a}]]
            if i > 0:
                fqueries.append(P)
            fqueries.extend(P | {a} for a in good)
    vals = run_batch(fqueries)
    t = state["t"]
    fS = state["fS"]
    best = None
    for j, (order, levels) in enumerate(zip(seqs, plans)):
        sets = []
        for P, cands in levels:
            if not cands:
                sets.append(frozenset())
                continue
            fP = fS if P == S else vals[P]
            sets.append(frozenset(a for a in cands if feas[P | {a}] and vals[P | {a}] - fP >= t))
        if sets[-1]:
            raise OracleError("the last survivor set is non-empty; the sequence is not a base")
        if inst is not None:
            inst.chain(sets)
        istar = find_istar_linear([len(s) for s in sets], len(X), eps)
        fP = fS if istar == 0 else vals[S.union(order[:istar])]
        score = (fP - fS) / istar if istar else 0.0
        if best is None or score > best[0]:
            best = (score, j, istar, sets[istar], order, fP)
    _, j, istar, level, order, fP = best
    state["fS"] = fP
    return istar, level, order, j


def _binary_iteration(constraint, S, X, order, eps, ledger, run_batch, state, inst):
    """Binary search for i*: each probe of X_i is its own matroid step and value round."""
    cache = {}

    def level(i):
        if i in cache:
            return cache[i]
        P = S.union(order[:i])
        cands = [a for a in X if a not in P]
        if not cands:
            cache[i] = (frozenset(), None)
            return cache[i]
        ok = batch_independent(constraint, [P | {a} for a in cands], ledger)
        good = [a for a, g in zip(cands, ok) if g]
        vals = run_batch(([P] if i > 0 else []) + [P | {a} for a in good])
        fP = state["fS"] if i == 0 else vals[P]
        t = state["t"]
        cache[i] = (frozenset(a for a in good if vals[P | {a}] - fP >= t), fP)
        return cache[i]

    r = len(order)
    istar = find_istar_binary(lambda i: len(level(i)[0]), 0, r, len(X), eps)
    if inst is not None:
        probed = [cache[i][0] for i in sorted(cache)]
        inst.chain(probed)
    if istar in cache:
        nxt, fP = cache[istar]
        state["fS"] = fP
    else:
        nxt = frozenset()
        if istar > 0:
            state["fS"] = None
    return istar, nxt, order


def adaptive_sequencing(f: SetFunction, constraint: Matroid, params: AlgoParams | None = None, *,
                        generator: str = "independence", istar_search: str = "linear",
                        instrument: bool = False, rng=None) -> SolutionReport:
    """Single-trial adaptive sequencing."""
    params = AlgoParams() if params is None else params
    return _sequencing(f, constraint, params, 1, generator, istar_search, instrument, rng,
                       "aseq" if istar_search == "linear" else "aseq-binary")


def adaptive_sequencing_pp(f: SetFunction, constraint: Matroid, params: AlgoParams | None = None, *,
                           rho: int | None = None, generator: str = "independence",
                           instrument: bool = False, rng=None) -> SolutionReport:
    """rho parallel sequence trials per while-iteration; the trial with the best
    mean prefix marginal is committed (lowest trial index on ties)."""
    params = AlgoParams() if params is None else params
    rho = params.rho if rho is None else rho
    if rho < 1:
        raise ValidationError("rho must be >= 1")
    return _sequencing(f, constraint, params, rho, generator, "linear", instrument, rng, "aseq-pp")


def greedy(f: SetFunction, constraint: Matroid, ledger: QueryLedger | None = None) -> SolutionReport:
    """Add the feasible element of largest marginal (lowest index on ties) until maximal."""
    _check_inputs(f, constraint)
    ledger = QueryLedger() if ledger is None else ledger
    S = frozenset()
    fS = None
    cand = list(range(f.n))
    trace = []
    while cand:
        ok = batch_independent(constraint, [S | {a} for a in cand], ledger)
        feasible = [a for a, g in zip(cand, ok) if g]
        if not feasible:
            break
        queries = [S | {a} for a in feasible] + ([S] if fS is None else [])
        vals = batch_eval(f, queries, ledger)
        if fS is None:
            fS = vals[-1]
        gains = [v - fS for v in vals[: len(feasible)]]
        pos = int(np.argmax(gains))
        a = feasible[pos]
        S = S | {a}
        fS = vals[pos]
        trace.append(a)
        cand = [b for b in feasible if b != a]
    if fS is None:
        fS = f(S)
    return SolutionReport("greedy", S, float(fS), ledger, trace)


def lazy_greedy(f: SetFunction, constraint: Matroid, ledger: QueryLedger | None = None) -> SolutionReport:
    """Greedy with stale upper bounds in a heap; same output as :func:`greedy`."""
    _check_inputs(f, constraint)
    ledger = QueryLedger() if ledger is None else ledger
    S = frozenset()
    trace = []
    cand = list(range(f.n))
    ok = batch_independent(constraint, [frozenset((a,)) for a in cand], ledger)
    feasible = [a for a, g in zip(cand, ok) if g]
    if not feasible:
        return SolutionReport("lazy", S, float(f(S)), ledger, trace)
    vals = batch_eval(f, [frozenset((a,)) for a in feasible] + [S], ledger)
    fS = vals[-1]
    # entries: (-gain bound, element, iteration the bound was computed in, f(S+a))
    heap = [(-(v - fS), a, 0, v) for a, v in zip(feasible, vals)]
    heapq.heapify(heap)
    it = 0
    while heap:
        neg, a, stamp, v = heapq.heappop(heap)
        if stamp == it:
            S = S | {a}
            fS = v
            trace.append(a)
            it += 1
            continue
        if not batch_independent(constraint, [S | {a}], ledger)[0]:
            continue
        v = batch_eval(f, [S | {a}], ledger)[0]
        heapq.heappush(heap, (-(v - fS), a, it, v))
    return SolutionReport("lazy", S, float(fS), ledger, trace)


def _feasible_levels(constraint: Matroid, ledger: QueryLedger):
    """All feasible sets, grown level by level (one matroid step per level)."""
    n = constraint.n
    levels = [[()]]
    while True:
        queries = [T + (a,) for T in levels[-1] for a in range((T[-1] + 1) if T else 0, n)]
        if not queries:
            break
        ok = batch_independent(constraint, [frozenset(q) for q in queries], ledger)
        nxt = [q for q, g in zip(queries, ok) if g]
        if not nxt:
            break
        levels.append(nxt)
    return levels


def brute_force(f: SetFunction, constraint: Matroid) -> SolutionReport:
    """Exact optimum over all feasible sets (n <= 24), pruned by downward closure."""
    _check_inputs(f, constraint)
    if f.n > BRUTE_CAP:
        raise ValidationError(f"brute force is capped at n <= {BRUTE_CAP}, got n={f.n}")
    ledger = QueryLedger()
    sets = [frozenset(T) for level in _feasible_levels(constraint, ledger) for T in level]
    vals = batch_eval(f, sets, ledger)
    best = int(np.argmax(vals))
    return SolutionReport("brute", sets[best], float(vals[best]), ledger)


def brute_force_unpruned(f: SetFunction, constraint: Matroid) -> tuple:
    """Enumerate all 2^n subsets; returns (best value, best set).  Test oracle only."""
    best_val, best_set = -np.inf, frozenset()
    for r in range(f.n + 1):
        for T in itertools.combinations(range(f.n), r):
            T = frozenset(T)
            if constraint._independent(T):
                v = f(T)
                if v > best_val:
                    best_val, best_set = v, T
    return best_val, best_set


def max_feasible_size(constraint: Matroid) -> int:
    """Size of the largest feasible set by exhaustive level search."""
    return len(_feasible_levels(constraint, QueryLedger())) - 1
