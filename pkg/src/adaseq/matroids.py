"""Concrete matroid oracles, contraction, intersections and the hidden-partition instance."""
from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from .core import Matroid, ValidationError, as_element_set


class UniformMatroid(Matroid):
    has_rank = True

    def __init__(self, n: int, k: int):
        if n < 1 or k < 0:
            raise ValidationError(f"uniform matroid needs n >= 1 and k >= 0, got n={n}, k={k}")
        self.n = n
        self.k = k

    def _independent(self, S):
        return len(S) <= self.k

    def _rank(self, S):
        return min(len(S), self.k)

    def __repr__(self):
        return f"UniformMatroid(n={self.n}, k={self.k})"


class PartitionMatroid(Matroid):
    """Independent iff |S ∩ P_i| <= capacity[i] for every part i."""

    has_rank = True

    def __init__(self, part_of: Sequence[int], capacities: Sequence[int]):
        self.part_of = [int(p) for p in part_of]
        self.capacities = [int(c) for c in capacities]
        if not self.part_of:
            raise ValidationError("partition matroid needs at least one element")
        if any(c < 0 for c in self.capacities):
            raise ValidationError("capacities must be non-negative")
        if min(self.part_of) < 0 or max(self.part_of) >= len(self.capacities):
            raise ValidationError("part id without a capacity")
        self.n = len(self.part_of)

    def _counts(self, S):
        counts = {}
        part_of = self.part_of
        for a in S:
            p = part_of[a]
            counts[p] = counts.get(p, 0) + 1
        return counts

    def _independent(self, S):
        cap = self.capacities
        return all(c <= cap[p] for p, c in self._counts(S).items())

    def _rank(self, S):
        cap = self.capacities
        return sum(min(c, cap[p]) for p, c in self._counts(S).items())

    def parts(self) -> list:
        out = [[] for _ in self.capacities]
        for a, p in enumerate(self.part_of):
            out[p].append(a)
        return out

    def __repr__(self):
        return f"PartitionMatroid(n={self.n}, parts={len(self.capacities)})"


class DisjointSet:
    def __init__(self):
        self.parent = {}

    def find(self, x):
        parent = self.parent
        root = x
        while parent.setdefault(root, root) != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    def union(self, x, y) -> bool:
        rx, ry = self.find(x), self.find(y)
        if rx == ry:
            return False
        self.parent[rx] = ry
        return True


class GraphicMatroid(Matroid):
    """Ground-set element i is edge ``edges[i]``; independent iff acyclic."""

    has_rank = True

    def __init__(self, n_vertices: int, edges: Sequence[tuple]):
        self.n_vertices = int(n_vertices)
        self.edges = [(int(u), int(v)) for u, v in edges]
        if not self.edges:
            raise ValidationError("graphic matroid needs at least one edge")
        for u, v in self.edges:
            if not (0 <= u < self.n_vertices and 0 <= v < self.n_vertices):
                raise ValidationError(f"edge ({u}, {v}) has a vertex outside [0, {self.n_vertices})")
        self.n = len(self.edges)

    def _forest_size(self, S, stop_on_cycle):
        # fresh union-find per query keeps the oracle stateless
        ds = DisjointSet()
        size = 0
        for a in S:
            u, v = self.edges[a]
            if ds.union(u, v):
                size += 1
            elif stop_on_cycle:
                return -1
        return size

    def _independent(self, S):
        return self._forest_size(S, True) >= 0

    def _rank(self, S):
        return self._forest_size(S, False)

    def __repr__(self):
        return f"GraphicMatroid(vertices={self.n_vertices}, edges={self.n})"


class IntersectionConstraint(Matroid):
    """Feasible iff independent in every member.  Downward closed, not a matroid."""

    def __init__(self, matroids: Sequence[Matroid]):
        self.matroids = list(matroids)
        if not self.matroids:
            raise ValidationError("intersection needs at least one matroid")
        ns = {m.n for m in self.matroids}
        if len(ns) != 1:
            raise ValidationError(f"intersected matroids disagree on n: {sorted(ns)}")
        self.n = ns.pop()

    def _independent(self, S):
        return all(m._independent(S) for m in self.matroids)

    def __repr__(self):
        return f"IntersectionConstraint(P={len(self.matroids)}, n={self.n})"


class ContractedMatroid(Matroid):
    """M(S, X): T feasible iff T ⊆ X and S ∪ T independent in the base."""

    def __init__(self, base: Matroid, S=(), X=None):
        self.base = base
        self.n = base.n
        self.S = as_element_set(S, base.n)
        self.X = frozenset(range(base.n)) - self.S if X is None else as_element_set(X, base.n)
        self.has_rank = base.has_rank
        if self.has_rank:
            self._rank_S = base._rank(self.S)

    def _independent(self, T):
        return T <= self.X and self.base._independent(self.S | T)

    def _rank(self, T):
        return self.base._rank(self.S | (T & self.X)) - self._rank_S

    def __repr__(self):
        return f"ContractedMatroid({self.base!r}, |S|={len(self.S)}, |X|={len(self.X)})"


def hidden_assignment(n: int, p: int, seed: int) -> list:
    """Uniformly random equipartition of [n] into p parts, as element -> part."""
    perm = np.random.default_rng(seed).permutation(n)
    size = n // p
    part_of = [0] * n
    for pos, a in enumerate(perm):
        part_of[int(a)] = pos // size
    return part_of


class HiddenPartitionInstance(Matroid):
    """Partition matroid with a secret random equipartition; capacity of part i is i*slope.

    Only independence queries are answered.  Parts are numbered 1..p in the
    capacity rule (internally 0..p-1).
    """

    def __init__(self, n: int, p: int, slope: int, seed: int):
        if p < 1 or n < 1 or n % p:
            raise ValidationError(f"n={n} is not divisible into p={p} equal parts")
        if slope < 1:
            raise ValidationError("slope must be >= 1")
        self.n = n
        self.p = p
        self.slope = slope
        self.part_size = n // p
        self.__seed = seed
        self.__inner = _explicit_hidden(n, p, slope, seed)

    def _independent(self, S):
        return self.__inner._independent(S)

    @property
    def base_size(self) -> int:
        return sum(min(i * self.slope, self.part_size) for i in range(1, self.p + 1))

    def __repr__(self):
        return f"HiddenPartitionInstance(n={self.n}, p={self.p}, slope={self.slope})"


def _explicit_hidden(n, p, slope, seed) -> PartitionMatroid:
    return PartitionMatroid(hidden_assignment(n, p, seed), [(i + 1) * slope for i in range(p)])


def unveil_partition(n: int, p: int, slope: int, seed: int) -> PartitionMatroid:
    """The explicit partition matroid a hidden instance with this seed answers for."""
    return _explicit_hidden(n, p, slope, seed)


def make_hidden_partition(n: int, p: int, slope: int, seed: int) -> HiddenPartitionInstance:
    return HiddenPartitionInstance(n, p, slope, seed)


def hidden_partition_preset(n: int) -> tuple:
    """(p, slope) with p ≈ n^{1/3}/ln² n and slope ≈ n^{1/3} ln² n, p dividing n.

    At desk scale the target p is below 1; it is rounded to the nearest
    divisor of n that is at least 1.
    """
    if n < 2:
        return 1, 1
    cube = n ** (1.0 / 3.0)
    log2 = math.log(n) ** 2
    target_p = cube / log2
    divisors = [d for d in range(1, n + 1) if n % d == 0]
    p = min(divisors, key=lambda d: (abs(d - target_p), d))
    slope = max(1, round(cube * log2))
    return p, slope


def is_independent(m: Matroid, S) -> bool:
    return m.is_independent(S)


def rank(m: Matroid, S=None) -> int:
    return m.rank(S)


def random_partition_matroid(n: int, n_parts: int, rng, max_capacity: int = 1) -> PartitionMatroid:
    """Random assignment of elements to parts with capacities in [1, max_capacity]."""
    part_of = [int(v) for v in rng.integers(0, n_parts, size=n)]
    caps = [int(c) for c in rng.integers(1, max_capacity + 1, size=n_parts)]
    return PartitionMatroid(part_of, caps)


def random_graphic_matroid(n_edges: int, n_vertices: int, rng) -> GraphicMatroid:
    """Random multigraph without self-loops."""
    edges = []
    while len(edges) < n_edges:
        u, v = (int(a) for a in rng.integers(0, n_vertices, size=2))
        if u != v:
            edges.append((u, v))
    return GraphicMatroid(n_vertices, edges)
