"""Ground sets, oracle base classes and round/step accounting.

An *adaptive round* is one call to :func:`batch_eval`; a *matroid step* is one
call to :func:`batch_independent` or :func:`batch_rank`.  Queries inside one
batch are fixed before any of their answers are seen, so the counters in
:class:`QueryLedger` measure adaptivity directly rather than wall-clock time.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

ElementSet = frozenset


class ValidationError(ValueError):
    """Bad input: malformed sets, parameters or files."""


class OracleError(RuntimeError):
    """An oracle answered inconsistently with the axioms it claims."""


def as_element_set(S: Iterable[int], n: int) -> frozenset:
    S = frozenset(int(a) for a in S)
    if S and (min(S) < 0 or max(S) >= n):
        raise ValidationError(f"set {sorted(S)} is not a subset of ground set [0, {n})")
    return S


@dataclass(frozen=True)
class GroundSet:
    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ValidationError("ground set needs n >= 1")

    def __iter__(self):
        return iter(range(self.n))

    def __len__(self):
        return self.n

    def full(self) -> frozenset:
        return frozenset(range(self.n))


class SetFunction:
    """Base class for value oracles f: 2^[n] -> R.

    Subclasses implement ``__call__``.  ``evaluate_batch`` may be overridden
    with a vectorized path; it must return exactly what per-set calls would.
    """

    n: int

    def __call__(self, S: frozenset) -> float:
        raise NotImplementedError

    def evaluate_batch(self, queries: Sequence[frozenset]) -> list:
        return [self(S) for S in queries]

    def batch_cost(self, n_queries: int) -> int:
        # number of evaluations of the underlying function charged per batch
        return n_queries


class Matroid:
    """Base class for independence-system oracles over [n].

    ``has_rank`` is True only when ``_rank`` is a native one-query rank oracle.
    """

    n: int
    has_rank = False

    def is_independent(self, S: Iterable[int]) -> bool:
        return self._independent(as_element_set(S, self.n))

    def _independent(self, S: frozenset) -> bool:
        raise NotImplementedError

    def rank(self, S: Iterable[int] | None = None) -> int:
        S = frozenset(range(self.n)) if S is None else as_element_set(S, self.n)
        if self.has_rank:
            return self._rank(S)
        return greedy_rank(self, S)

    def _rank(self, S: frozenset) -> int:
        raise NotImplementedError


def greedy_rank(m: Matroid, S: Iterable[int], ledger: "QueryLedger | None" = None) -> int:
    """Rank by a left-to-right greedy scan: |S| queries in |S| sequential steps.

    Exact for matroids, a lower bound on the largest feasible subset for
    intersections.  Counted in ``ledger.rank_fallbacks`` when a ledger is given.
    """
    T: set = set()
    for a in sorted(S):
        if m._independent(frozenset(T | {a})):
            T.add(a)
    if ledger is not None:
        ledger.m_steps += len(S)
        ledger.m_queries += len(S)
        ledger.rank_fallbacks += 1
    return len(T)


@dataclass
class QueryLedger:
    f_rounds: int = 0
    f_queries: int = 0
    m_steps: int = 0
    m_queries: int = 0
    rank_fallbacks: int = 0
    t_history: list = field(default_factory=list)

    def counters(self) -> dict:
        return {
            "f_rounds": self.f_rounds,
            "f_queries": self.f_queries,
            "m_steps": self.m_steps,
            "m_queries": self.m_queries,
        }

    def absorb(self, other: "QueryLedger") -> None:
        """Add another ledger's counters (sequential composition)."""
        self.f_rounds += other.f_rounds
        self.f_queries += other.f_queries
        self.m_steps += other.m_steps
        self.m_queries += other.m_queries
        self.rank_fallbacks += other.rank_fallbacks
        self.t_history.extend(other.t_history)


def batch_eval(oracle: SetFunction, queries: Sequence[frozenset], ledger: QueryLedger) -> list:
    """Evaluate one adaptive round of value queries."""
    if len(queries) == 0:
        raise ValidationError("an adaptive round must contain at least one query")
    n = oracle.n
    for S in queries:
        if S and (min(S) < 0 or max(S) >= n):
            raise ValidationError(f"query {sorted(S)} outside ground set [0, {n})")
    values = oracle.evaluate_batch(queries)
    ledger.f_rounds += 1
    ledger.f_queries += oracle.batch_cost(len(queries))
    return values


def batch_independent(oracle: Matroid, queries: Sequence[frozenset], ledger: QueryLedger) -> list:
    """One step of parallel independence queries."""
    if len(queries) == 0:
        raise ValidationError("a matroid step must contain at least one query")
    n = oracle.n
    for S in queries:
        if S and (min(S) < 0 or max(S) >= n):
            raise ValidationError(f"query {sorted(S)} outside ground set [0, {n})")
    out = [oracle._independent(S) for S in queries]
    ledger.m_steps += 1
    ledger.m_queries += len(queries)
    return out


def batch_independent_chain(oracle: Matroid, base: frozenset, order: Sequence[int], ledger: QueryLedger) -> int:
    """One step asking whether base + order[:i] is independent, for i = 1..len(order).

    The answers on a nested chain are monotone in a downward-closed system,
    so they are all determined by the longest independent prefix, which is
    returned.  It is located by bisection over the oracle; the ledger is
    charged the full len(order) queries of the batch.
    """
    if len(order) == 0:
        raise ValidationError("a matroid step must contain at least one query")
    n = oracle.n
    if min(order) < 0 or max(order) >= n or (base and (min(base) < 0 or max(base) >= n)):
        raise ValidationError("chain query outside ground set")
    lo, hi = 0, len(order)
    if not oracle._independent(base):
        raise OracleError("the chain's base set is not independent")
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if oracle._independent(base.union(order[:mid])):
            lo = mid
        else:
            hi = mid - 1
    ledger.m_steps += 1
    ledger.m_queries += len(order)
    return lo


def batch_rank(oracle: Matroid, queries: Sequence[frozenset], ledger: QueryLedger) -> list:
    """One step of parallel rank queries; requires a native rank oracle."""
    if not oracle.has_rank:
        raise ValidationError(f"{type(oracle).__name__} has no native rank oracle")
    if len(queries) == 0:
        raise ValidationError("a matroid step must contain at least one query")
    out = [oracle._rank(S) for S in queries]
    ledger.m_steps += 1
    ledger.m_queries += len(queries)
    return out


def default_outer_iterations(epsilon: float, k: int, step_size: float = 1.0) -> int:
    """ceil((1/eps) ln(k / (eps * step_size))), at least 1."""
    k = max(k, 1)
    return max(1, math.ceil(math.log(k / (epsilon * step_size)) / epsilon))


def default_mc_samples(epsilon: float, n: int) -> int:
    return math.ceil(48.0 * math.log(max(n, 2)) / epsilon**2)


def while_loop_bound(epsilon: float, n: int) -> int:
    """Per-outer-iteration cap on while-loop iterations: ceil(log_{1/(1-eps)} n) + 1."""
    return math.ceil(math.log(max(n, 1)) / -math.log1p(-epsilon)) + 1


@dataclass(frozen=True)
class AlgoParams:
    """Knobs shared by the optimizers.

    ``step_size`` must be the reciprocal of an integer; ``n_steps`` holds that
    integer.  ``outer_iterations`` and ``mc_samples`` default (None) to the
    values derived from epsilon, rank and n at run time.
    """

    epsilon: float = 0.05
    step_size: float = 0.1
    outer_iterations: int | None = None
    rho: int = 20
    seed: int = 0
    mc_samples: int | None = None

    def __post_init__(self):
        if not 0.0 < self.epsilon < 1.0:
            raise ValidationError(f"epsilon must lie in (0, 1), got {self.epsilon}")
        if not 0.0 < self.step_size <= 1.0:
            raise ValidationError(f"step size must lie in (0, 1], got {self.step_size}")
        q = round(1.0 / self.step_size)
        if abs(q * self.step_size - 1.0) > 1e-9:
            raise ValidationError(f"1/step_size must be an integer, got {1.0 / self.step_size}")
        if self.outer_iterations is not None and self.outer_iterations < 1:
            raise ValidationError("outer_iterations must be >= 1")
        if self.rho < 1:
            raise ValidationError("rho must be >= 1")
        if self.mc_samples is not None and self.mc_samples < 1:
            raise ValidationError("mc_samples must be >= 1")

    @property
    def n_steps(self) -> int:
        return round(1.0 / self.step_size)

    @property
    def step_fraction(self) -> Fraction:
        return Fraction(1, self.n_steps)
