"""Random feasible sequences: sequential, rank-oracle parallel and independence-oracle parallel.

A random feasible sequence (a_1, ..., a_r) of a matroid picks each a_i
uniformly among the elements that keep {a_1, ..., a_i} independent, and
ends at a base.  The three generators below induce the same law on
sequences; they differ only in how many sequential matroid steps they use.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

import numpy as np
from scipy.stats import chi2_contingency

from .core import (Matroid, OracleError, QueryLedger, ValidationError, batch_independent, batch_independent_chain,
                   batch_rank)
from .matroids import ContractedMatroid

GENERATORS = ("sequential", "rank", "independence")


@dataclass(frozen=True)
class FeasibleSequence:
    order: tuple
    generator: str
    m_steps: int

    def __len__(self):
        return len(self.order)

    def prefix(self, i: int) -> frozenset:
        return frozenset(self.order[:i])


def _ground(m: Matroid) -> list:
    if isinstance(m, ContractedMatroid):
        return sorted(m.X)
    return list(range(m.n))


def random_sequence_sequential(m: Matroid, rng: np.random.Generator, ledger: QueryLedger | None = None,
                               limit: int | None = None) -> FeasibleSequence:
    """Pick a_i uniformly among feasible extensions, one matroid step per pick.

    A final step that finds no feasible extension is also counted, so a
    sequence of length r costs r or r + 1 steps.  ``limit`` stops after that
    many picks without the closing step.
    """
    ledger = QueryLedger() if ledger is None else ledger
    before = ledger.m_steps
    cand = _ground(m)
    seq: list = []
    chosen = frozenset()
    while cand and (limit is None or len(seq) < limit):
        ok = batch_independent(m, [chosen | {a} for a in cand], ledger)
        feasible = [a for a, good in zip(cand, ok) if good]
        if not feasible:
            break
        a = feasible[int(rng.integers(len(feasible)))]
        seq.append(a)
        chosen = chosen | {a}
        cand = [b for b in feasible if b != a]
    return FeasibleSequence(tuple(seq), "sequential", ledger.m_steps - before)


def random_sequence_rank(m: Matroid, rng: np.random.Generator, ledger: QueryLedger | None = None) -> FeasibleSequence:
    """Rank-increase subsequence of a uniform permutation; one step of rank queries."""
    if not m.has_rank:
        raise ValidationError(f"{type(m).__name__} has no native rank oracle; "
                              "the sequential rank fallback is not allowed here")
    ledger = QueryLedger() if ledger is None else ledger
    before = ledger.m_steps
    ground = _ground(m)
    if not ground:
        return FeasibleSequence((), "rank", 0)
    perm = [int(a) for a in rng.permutation(ground)]
    prefixes = [frozenset(perm[: i + 1]) for i in range(len(perm))]
    ranks = batch_rank(m, prefixes, ledger)
    seq = []
    prev = 0
    for b, r in zip(perm, ranks):
        if r - prev == 1:
            seq.append(b)
        elif r != prev:
            raise OracleError(f"prefix ranks jumped from {prev} to {r}")
        prev = r
    return FeasibleSequence(tuple(seq), "rank", ledger.m_steps - before)


def random_sequence_independence(m: Matroid, rng: np.random.Generator,
                                 ledger: QueryLedger | None = None) -> FeasibleSequence:
    """Longest feasible prefix of a random permutation of the survivors, repeated.

    Each pass costs two steps: one batch over all prefixes, one batch that
    re-filters the survivors against the extended sequence.
    """
    ledger = QueryLedger() if ledger is None else ledger
    before = ledger.m_steps
    X = _ground(m)
    seq: list = []
    chosen = frozenset()
    while X:
        b = [int(a) for a in rng.permutation(X)]
        istar = batch_independent_chain(m, chosen, b, ledger)
        seq.extend(b[:istar])
        chosen = chosen.union(b[:istar])
        ok = batch_independent(m, [chosen | {a} for a in X], ledger)
        X = [a for a, good in zip(X, ok) if good and a not in chosen]
    return FeasibleSequence(tuple(seq), "independence", ledger.m_steps - before)


def random_sequence(m: Matroid, rng: np.random.Generator, ledger: QueryLedger | None = None,
                    generator: str = "independence") -> FeasibleSequence:
    if generator == "sequential":
        return random_sequence_sequential(m, rng, ledger)
    if generator == "rank":
        return random_sequence_rank(m, rng, ledger)
    if generator == "independence":
        return random_sequence_independence(m, rng, ledger)
    raise ValidationError(f"unknown sequence generator {generator!r}; choose from {GENERATORS}")


def sequence_law(m: Matroid, generator: str, samples: int, rng: np.random.Generator) -> Counter:
    """Empirical distribution of whole sequences over ``samples`` draws."""
    return Counter(random_sequence(m, rng, None, generator).order for _ in range(samples))


def chi2_equivalence(law_a: Counter, law_b: Counter) -> tuple:
    """Chi-square homogeneity test of two empirical laws; returns (statistic, p-value, dof)."""
    keys = sorted(set(law_a) | set(law_b))
    if len(keys) < 2:
        return 0.0, 1.0, 0
    table = np.array([[law_a.get(k, 0) for k in keys], [law_b.get(k, 0) for k in keys]])
    stat, p, dof, _ = chi2_contingency(table, correction=False)
    return float(stat), float(p), int(dof)


def exact_sequence_law(m: Matroid) -> dict:
    """Exact law of the sequential generator by recursion over feasible extensions."""
    ground = _ground(m)
    out: dict = {}

    def walk(prefix, chosen, prob):
        feasible = [a for a in ground if a not in chosen and m._independent(chosen | {a})]
        if not feasible:
            out[tuple(prefix)] = out.get(tuple(prefix), 0.0) + prob
            return
        for a in feasible:
            walk(prefix + [a], chosen | {a}, prob / len(feasible))

    walk([], frozenset(), 1.0)
    return out
