"""Seeded random instance families used by benchmarks and the acceptance suite."""
from __future__ import annotations

import numpy as np

from ..functions import CoverageFunction, ModularFunction
from ..matroids import GraphicMatroid, IntersectionConstraint, PartitionMatroid, UniformMatroid


def random_function(kind: str, n: int, rng):
    """Integer-valued, so every marginal is computed exactly in floating point."""
    if kind == "modular":
        return ModularFunction(rng.integers(1, 101, size=n).astype(float))
    universe = max(n, 8) * 2
    cover = [rng.choice(universe, size=int(rng.integers(1, 6)), replace=False) for _ in range(n)]
    return CoverageFunction(cover, universe)


def random_matroid(kind: str, n: int, rng, max_rank: int = 4):
    if kind == "uniform":
        return UniformMatroid(n, int(rng.integers(1, max_rank + 1)))
    if kind == "partition":
        p = int(rng.integers(2, max_rank + 1))
        caps = [1] * p
        for _ in range(int(rng.integers(0, max_rank - p + 1))):
            caps[int(rng.integers(p))] += 1
        part_of = [int(v) for v in rng.integers(0, p, size=n)]
        return PartitionMatroid(part_of, caps)
    # rank of a graph on max_rank + 1 vertices is at most max_rank
    nv = max_rank + 1
    edges = []
    while len(edges) < n:
        u, v = (int(a) for a in rng.choice(nv, size=2, replace=False))
        edges.append((u, v))
    return GraphicMatroid(nv, edges)


def matroid_suite(count: int = 50, seed: int = 2024, n_range=(6, 14), max_rank: int = 4):
    """(name, f, M) triples cycling through modular/coverage x uniform/partition/graphic."""
    rng = np.random.default_rng(seed)
    fkinds = ("modular", "coverage")
    mkinds = ("uniform", "partition", "graphic")
    out = []
    for i in range(count):
        fk = fkinds[i % 2]
        mk = mkinds[(i // 2) % 3]
        n = int(rng.integers(n_range[0], n_range[1] + 1))
        out.append((f"{i:02d}-{fk}-{mk}-n{n}", random_function(fk, n, rng), random_matroid(mk, n, rng, max_rank)))
    return out


def intersection_suite(count: int = 30, seed: int = 7, n_range=(6, 12), P: int = 2):
    """Intersections of P random partition matroids."""
    rng = np.random.default_rng(seed)
    out = []
    for i in range(count):
        fk = ("modular", "coverage")[i % 2]
        n = int(rng.integers(n_range[0], n_range[1] + 1))
        parts = [random_matroid("partition", n, rng, max_rank=4) for _ in range(P)]
        out.append((f"{i:02d}-{fk}-x{P}-n{n}", random_function(fk, n, rng), IntersectionConstraint(parts)))
    return out
