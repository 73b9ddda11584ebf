"""Monotone submodular value oracles and multilinear-extension estimators."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .core import QueryLedger, SetFunction, ValidationError, as_element_set, batch_eval

EXACT_CAP = 20


def _indicator_rows(queries: Sequence[frozenset], n: int) -> np.ndarray:
    mask = np.zeros((len(queries), n), dtype=bool)
    for r, S in enumerate(queries):
        if S:
            mask[r, list(S)] = True
    return mask


class ModularFunction(SetFunction):
    """f(S) = sum of non-negative weights over S."""

    def __init__(self, weights):
        w = np.asarray(weights, dtype=float)
        if w.ndim != 1 or w.size == 0:
            raise ValidationError("weights must be a non-empty vector")
        if np.any(w < 0) or not np.all(np.isfinite(w)):
            raise ValidationError("weights must be finite and non-negative")
        self.weights = w
        self.n = w.size
        self._w = w.tolist()

    def __call__(self, S):
        w = self._w
        return float(sum(w[a] for a in S))

    def evaluate_indicators(self, mask: np.ndarray) -> np.ndarray:
        return mask @ self.weights

    def __repr__(self):
        return f"ModularFunction(n={self.n})"


class CoverageFunction(SetFunction):
    """f(S) = |union of cover(i) for i in S| over a finite universe."""

    def __init__(self, cover: Sequence[Iterable[int]], universe_size: int | None = None):
        self.cover = [frozenset(int(u) for u in c) for c in cover]
        if not self.cover:
            raise ValidationError("coverage function needs at least one element")
        items = set().union(*self.cover)
        if items and min(items) < 0:
            raise ValidationError("universe items must be non-negative")
        needed = max(items) + 1 if items else 0
        if universe_size is None:
            universe_size = needed
        elif universe_size < needed:
            raise ValidationError(f"universe size {universe_size} too small for item {needed - 1}")
        self.universe_size = universe_size
        self.n = len(self.cover)
        self._matrix = None

    def __call__(self, S):
        cover = self.cover
        if not S:
            return 0.0
        return float(len(frozenset().union(*[cover[a] for a in S])))

    def evaluate_indicators(self, mask: np.ndarray) -> np.ndarray:
        if self._matrix is None:
            C = np.zeros((self.n, max(self.universe_size, 1)), dtype=np.float64)
            for i, c in enumerate(self.cover):
                if c:
                    C[i, list(c)] = 1.0
            self._matrix = C
        return ((mask.astype(np.float64) @ self._matrix) > 0).sum(axis=1).astype(float)

    def __repr__(self):
        return f"CoverageFunction(n={self.n}, universe={self.universe_size})"


class ZeroFunction(SetFunction):
    def __init__(self, n: int):
        self.n = n

    def __call__(self, S):
        return 0.0


def evaluate_indicators(f: SetFunction, mask: np.ndarray) -> np.ndarray:
    """f on each row of a boolean (q, n) matrix, vectorized when f supports it."""
    fast = getattr(f, "evaluate_indicators", None)
    if fast is not None:
        return np.asarray(fast(mask), dtype=float)
    queries = [frozenset(np.flatnonzero(row).tolist()) for row in mask]
    return np.asarray(f.evaluate_batch(queries), dtype=float)


@dataclass
class FractionalPoint:
    """A point of [0,1]^n, optionally with a convex-combination witness.

    ``combo`` holds (weight, independent set) pairs with exact rational
    weights; when present, ``coords`` is rebuilt from it and never drifts.
    """

    n: int
    coords: np.ndarray
    combo: list | None = None

    @classmethod
    def zeros(cls, n: int) -> "FractionalPoint":
        return cls(n, np.zeros(n), [])

    @classmethod
    def from_coords(cls, coords) -> "FractionalPoint":
        x = np.asarray(coords, dtype=float)
        if x.ndim != 1 or np.any(x < 0) or np.any(x > 1):
            raise ValidationError("coordinates must be a vector in [0, 1]^n")
        return cls(x.size, x.copy(), None)

    @classmethod
    def from_combination(cls, n: int, combo) -> "FractionalPoint":
        pairs = []
        total = Fraction(0)
        for w, S in combo:
            w = Fraction(w)
            if not 0 < w <= 1:
                raise ValidationError(f"combination weight {w} outside (0, 1]")
            pairs.append((w, as_element_set(S, n)))
            total += w
        if total > 1:
            raise ValidationError(f"combination weights sum to {total} > 1")
        return cls(n, _coords_from_combo(n, pairs), pairs)

    def exact_coords(self) -> list:
        if self.combo is None:
            raise ValidationError("point has no convex-combination witness")
        out = [Fraction(0)] * self.n
        for w, S in self.combo:
            for a in S:
                out[a] += w
        return out

    def add(self, weight, S) -> "FractionalPoint":
        """x + weight * 1_S, recorded as a new combination term."""
        if self.combo is None:
            raise ValidationError("point has no convex-combination witness")
        return FractionalPoint.from_combination(self.n, [*self.combo, (Fraction(weight), S)])

    @property
    def weight_sum(self) -> Fraction:
        return sum((w for w, _ in self.combo or []), Fraction(0))

    def check_in_polytope(self, matroid) -> None:
        if self.combo is None:
            raise ValidationError("point has no convex-combination witness")
        for _, S in self.combo:
            if not matroid.is_independent(S):
                raise ValidationError(f"combination set {sorted(S)} is not independent")


def _coords_from_combo(n, pairs) -> np.ndarray:
    acc = [Fraction(0)] * n
    for w, S in pairs:
        for a in S:
            acc[a] += w
    if any(c > 1 for c in acc):
        raise ValidationError("combination gives a coordinate above 1")
    return np.array([float(c) for c in acc])


def uniforms(seed: int, stream: Sequence[int], m: int, n: int) -> np.ndarray:
    """(m, n) uniforms from the substream keyed by (seed, *stream).

    Row j is sample j; the matrix is materialized before any evaluation so
    the order in which samples are evaluated cannot change results.
    """
    ss = np.random.SeedSequence(entropy=int(seed) % 2**64, spawn_key=tuple(int(s) for s in stream))
    return np.random.default_rng(ss).random((m, n))


def _as_rng(rng) -> np.random.Generator:
    if isinstance(rng, np.random.Generator):
        return rng
    return np.random.default_rng(rng)


def eval_multilinear(f: SetFunction, x: FractionalPoint, m: int, ledger: QueryLedger, rng=None) -> float:
    """Monte Carlo estimate of F(x) = E[f(R)], R ~ x, in one adaptive round."""
    if m < 1:
        raise ValidationError("need at least one sample")
    if x.n != f.n:
        raise ValidationError(f"point dimension {x.n} != ground set size {f.n}")
    U = _as_rng(rng).random((m, x.n))
    mask = U < x.coords
    queries = [frozenset(np.flatnonzero(row).tolist()) for row in mask]
    return float(np.mean(batch_eval(f, queries, ledger)))


class SurrogateFunction(SetFunction):
    """Sampled g(T) = F(x + step*1_T) - F(x) with common random numbers.

    Every batch draws one fresh (m, n) uniform matrix, half of it antithetic
    (rows U and 1-U).  All queries of the batch, and both points of each
    difference, reuse those rows, so within a batch the estimate is itself a
    monotone submodular set function.
    """

    def __init__(self, f: SetFunction, x: FractionalPoint, step: float, m: int, seed: int = 0,
                 stream: Sequence[int] = ()):
        if m < 1:
            raise ValidationError("need at least one sample")
        self.f = f
        self.n = f.n
        self.x = x
        self.step = float(step)
        self.m = int(m)
        self.seed = seed
        self.stream = tuple(stream)
        self.batches = 0
        self._hi = np.minimum(x.coords + self.step, 1.0)

    def _draw(self) -> np.ndarray:
        h = (self.m + 1) // 2
        U = uniforms(self.seed, (*self.stream, self.batches), h, self.n)
        self.batches += 1
        return np.vstack([U, 1.0 - U[: self.m - h]])

    def evaluate_batch(self, queries):
        for T in queries:
            if T and np.any(self.x.coords[list(T)] + self.step > 1.0 + 1e-12):
                raise ValidationError("x + step*1_T leaves the unit cube")
        U = self._draw()
        base = U < self.x.coords
        extra = U < self._hi
        base_val = evaluate_indicators(self.f, base)
        out = []
        for T in queries:
            if not T:
                out.append(0.0)
                continue
            tmask = np.zeros(self.n, dtype=bool)
            tmask[list(T)] = True
            vals = evaluate_indicators(self.f, base | (extra & tmask))
            out.append(float(np.mean(vals - base_val)))
        return out

    def __call__(self, T):
        return self.evaluate_batch([frozenset(T)])[0]

    def batch_cost(self, n_queries):
        return self.m * (n_queries + 1)


def eval_marginal_surrogate(f: SetFunction, x: FractionalPoint, step: float, T, m: int,
                            ledger: QueryLedger, seed: int = 0) -> float:
    """Coupled estimate of F(x + step*1_T) - F(x) in one adaptive round."""
    T = as_element_set(T, f.n)
    if T and np.any(x.coords[list(T)] + step > 1.0 + 1e-12):
        raise ValidationError("x + step*1_T leaves the unit cube")
    g = SurrogateFunction(f, x, step, m, seed)
    return batch_eval(g, [T], ledger)[0]


class SubsetTable:
    """f tabulated on all 2^n subsets; exact multilinear extension by enumeration."""

    def __init__(self, f: SetFunction):
        n = f.n
        if n > EXACT_CAP:
            raise ValidationError(f"exact enumeration capped at n <= {EXACT_CAP}, got {n}")
        self.n = n
        masks = np.arange(2**n, dtype=np.int64)
        bits = ((masks[:, None] >> np.arange(n)) & 1).astype(bool)
        self.values = evaluate_indicators(f, bits)

    def probabilities(self, coords) -> np.ndarray:
        p = np.ones(1)
        for xi in coords:
            p = np.concatenate([p * (1.0 - xi), p * xi])
        return p

    def F(self, coords) -> float:
        return float(self.probabilities(coords) @ self.values)


def exact_F(f: SetFunction, x) -> float:
    """F(x) by full enumeration of 2^n subsets (n <= 20)."""
    coords = x.coords if isinstance(x, FractionalPoint) else np.asarray(x, dtype=float)
    return SubsetTable(f).F(coords)


class ExactSurrogate(SetFunction):
    """g(T) = F(x + step*1_T) - F(x) computed exactly; a test backend for n <= 20.

    Each query is charged as one evaluation.
    """

    def __init__(self, table: SubsetTable, x: FractionalPoint, step: float):
        self.table = table
        self.n = table.n
        self.x = x
        self.step = float(step)
        self.Fx = table.F(x.coords)

    def __call__(self, T):
        if not T:
            return 0.0
        y = self.x.coords.copy()
        idx = list(T)
        y[idx] = np.minimum(y[idx] + self.step, 1.0)
        return self.table.F(y) - self.Fx
