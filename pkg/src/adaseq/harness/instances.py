"""Line-oriented instance files for value functions and constraints.

Every file starts with a kind tag line.  Payloads::

    modular            n / n weights
    coverage           n / n lines of covered universe items ("-" for none)
    uniform            n / k
    partition          p / part id per element / p capacities
    graphic            n_vertices n_edges / one "u v" line per edge
    hidden-partition   n p slope seed
    intersect          constituent constraint files separated by "--" lines
"""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from ..core import ValidationError
from ..functions import CoverageFunction, ModularFunction
from ..matroids import (GraphicMatroid, HiddenPartitionInstance, IntersectionConstraint, PartitionMatroid,
                        UniformMatroid)

FUNCTION_KINDS = ("modular", "coverage")
CONSTRAINT_KINDS = ("uniform", "partition", "graphic", "intersect", "hidden-partition")


class InstanceFormatError(ValidationError):
    def __init__(self, source, line, reason):
        self.source = source
        self.line = line
        self.reason = reason
        super().__init__(f"{source}:{line}: {reason}")


@dataclass(frozen=True)
class FunctionSpec:
    kind: str
    payload: tuple

    @property
    def n(self) -> int:
        return len(self.payload)

    def build(self):
        if self.kind == "modular":
            return ModularFunction(self.payload)
        return CoverageFunction(self.payload)


@dataclass(frozen=True)
class ConstraintSpec:
    kind: str
    payload: tuple

    @property
    def n(self) -> int:
        k, p = self.kind, self.payload
        if k == "uniform":
            return p[0]
        if k == "partition":
            return len(p[0])
        if k == "graphic":
            return len(p[1])
        if k == "hidden-partition":
            return p[0]
        return p[0].n

    def build(self):
        k, p = self.kind, self.payload
        if k == "uniform":
            return UniformMatroid(*p)
        if k == "partition":
            return PartitionMatroid(*p)
        if k == "graphic":
            return GraphicMatroid(*p)
        if k == "hidden-partition":
            return HiddenPartitionInstance(*p)
        return IntersectionConstraint([c.build() for c in p])


@dataclass(frozen=True)
class InstanceSpec:
    function: FunctionSpec
    constraint: ConstraintSpec

    def __post_init__(self):
        if self.function.n != self.constraint.n:
            raise ValidationError(f"function has n={self.function.n} but constraint has n={self.constraint.n}")

    @property
    def n(self) -> int:
        return self.function.n

    def build(self):
        return self.function.build(), self.constraint.build()


class _Lines:
    def __init__(self, text, source, offset=0):
        lines = text.split("\n")
        if lines and lines[-1] == "":
            lines.pop()
        self.lines = [ln.strip() for ln in lines]
        self.source = source
        self.offset = offset
        self.pos = 0

    def error(self, reason, line=None):
        return InstanceFormatError(self.source, self.offset + (self.pos if line is None else line), reason)

    def next(self, what):
        if self.pos >= len(self.lines):
            raise InstanceFormatError(self.source, self.offset + self.pos + 1,
                                      f"unexpected end of file, expected {what}")
        self.pos += 1
        return self.lines[self.pos - 1]

    def ints(self, what, count=None, minimum=0):
        line = self.next(what)
        try:
            vals = [int(tok) for tok in line.split()]
        except ValueError:
            raise self.error(f"expected integers for {what}, got {line!r}") from None
        if count is not None and len(vals) != count:
            raise self.error(f"expected {count} values for {what}, got {len(vals)}")
        if any(v < minimum for v in vals):
            raise self.error(f"{what} must be >= {minimum}")
        return vals

    def done(self):
        if self.pos < len(self.lines) and any(self.lines[self.pos:]):
            raise InstanceFormatError(self.source, self.offset + self.pos + 1, "unexpected trailing content")


def parse_function_text(text: str, source: str = "<function>") -> FunctionSpec:
    L = _Lines(text, source)
    kind = L.next("kind tag")
    if kind not in FUNCTION_KINDS:
        raise L.error(f"unknown function kind {kind!r}; expected one of {FUNCTION_KINDS}")
    (n,) = L.ints("n", 1, minimum=1)
    if kind == "modular":
        line = L.next("weights")
        try:
            weights = tuple(float(tok) for tok in line.split())
        except ValueError:
            raise L.error(f"weights must be numbers, got {line!r}") from None
        if len(weights) != n:
            raise L.error(f"expected {n} weights, got {len(weights)}")
        if any(w < 0 for w in weights):
            raise L.error("weights must be non-negative")
        spec = FunctionSpec(kind, weights)
    else:
        cover = []
        for i in range(n):
            line = L.next(f"cover line for element {i}")
            if line == "-":
                cover.append(())
                continue
            try:
                items = tuple(sorted({int(tok) for tok in line.split()}))
            except ValueError:
                raise L.error(f"cover items must be integers, got {line!r}") from None
            if any(u < 0 for u in items):
                raise L.error("cover items must be non-negative")
            cover.append(items)
        spec = FunctionSpec(kind, tuple(cover))
    L.done()
    return spec


def _parse_constraint(L: _Lines) -> ConstraintSpec:
    kind = L.next("kind tag")
    if kind == "uniform":
        (n,) = L.ints("n", 1, minimum=1)
        (k,) = L.ints("k", 1)
        return ConstraintSpec(kind, (n, k))
    if kind == "partition":
        (p,) = L.ints("number of parts", 1, minimum=1)
        part_of = L.ints("part ids")
        if not part_of:
            raise L.error("partition needs at least one element")
        if max(part_of) >= p:
            raise L.error(f"part id {max(part_of)} >= number of parts {p}")
        caps = L.ints("capacities", p)
        return ConstraintSpec(kind, (tuple(part_of), tuple(caps)))
    if kind == "graphic":
        nv, ne = L.ints("vertex and edge counts", 2, minimum=1)
        edges = []
        for i in range(ne):
            u, v = L.ints(f"edge {i}", 2)
            if u >= nv or v >= nv:
                raise L.error(f"edge {i} uses a vertex >= {nv}")
            edges.append((u, v))
        return ConstraintSpec(kind, (nv, tuple(edges)))
    if kind == "hidden-partition":
        n, p, slope, seed = L.ints("n p slope seed", 4)
        if p < 1 or n < 1 or n % p:
            raise L.error(f"n={n} is not divisible into p={p} parts")
        if slope < 1:
            raise L.error("slope must be >= 1")
        return ConstraintSpec(kind, (n, p, slope, seed))
    if kind == "intersect":
        blocks = [[]]
        starts = [L.pos]
        while L.pos < len(L.lines):
            line = L.next("constituent")
            if line == "--":
                blocks.append([])
                starts.append(L.pos)
            else:
                blocks[-1].append(line)
        members = []
        for block, start in zip(blocks, starts):
            if not block:
                raise InstanceFormatError(L.source, L.offset + start + 1, "empty constituent in intersect")
            sub = _Lines("\n".join(block), L.source, L.offset + start)
            members.append(_parse_constraint(sub))
            sub.done()
        ns = {m.n for m in members}
        if len(ns) != 1:
            raise L.error(f"intersected constraints disagree on n: {sorted(ns)}")
        return ConstraintSpec(kind, tuple(members))
    raise L.error(f"unknown constraint kind {kind!r}; expected one of {CONSTRAINT_KINDS}")


def parse_constraint_text(text: str, source: str = "<matroid>") -> ConstraintSpec:
    L = _Lines(text, source)
    spec = _parse_constraint(L)
    L.done()
    return spec


def serialize_function(spec: FunctionSpec) -> str:
    if spec.kind == "modular":
        body = " ".join(repr(float(w)) for w in spec.payload)
    else:
        body = "\n".join(" ".join(map(str, c)) if c else "-" for c in spec.payload)
    return f"{spec.kind}\n{spec.n}\n{body}\n"


def serialize_constraint(spec: ConstraintSpec) -> str:
    k, p = spec.kind, spec.payload
    if k == "uniform":
        return f"uniform\n{p[0]}\n{p[1]}\n"
    if k == "partition":
        return f"partition\n{len(p[1])}\n{' '.join(map(str, p[0]))}\n{' '.join(map(str, p[1]))}\n"
    if k == "graphic":
        edges = "".join(f"{u} {v}\n" for u, v in p[1])
        return f"graphic\n{p[0]} {len(p[1])}\n{edges}"
    if k == "hidden-partition":
        return f"hidden-partition\n{' '.join(map(str, p))}\n"
    return "intersect\n" + "--\n".join(serialize_constraint(c) for c in p)


def parse_instance(function_path, matroid_path) -> InstanceSpec:
    fpath, mpath = Path(function_path), Path(matroid_path)
    return InstanceSpec(parse_function_text(fpath.read_text(), str(fpath)),
                        parse_constraint_text(mpath.read_text(), str(mpath)))


def write_instance(spec: InstanceSpec, function_path, matroid_path) -> None:
    Path(function_path).write_text(serialize_function(spec.function))
    Path(matroid_path).write_text(serialize_constraint(spec.constraint))


def function_spec_of(f) -> FunctionSpec:
    if isinstance(f, ModularFunction):
        return FunctionSpec("modular", tuple(float(w) for w in f.weights))
    if isinstance(f, CoverageFunction):
        return FunctionSpec("coverage", tuple(tuple(sorted(c)) for c in f.cover))
    raise ValidationError(f"no file format for {type(f).__name__}")


def constraint_spec_of(m) -> ConstraintSpec:
    if isinstance(m, UniformMatroid):
        return ConstraintSpec("uniform", (m.n, m.k))
    if isinstance(m, PartitionMatroid):
        return ConstraintSpec("partition", (tuple(m.part_of), tuple(m.capacities)))
    if isinstance(m, GraphicMatroid):
        return ConstraintSpec("graphic", (m.n_vertices, tuple(m.edges)))
    if isinstance(m, IntersectionConstraint):
        return ConstraintSpec("intersect", tuple(constraint_spec_of(c) for c in m.matroids))
    raise ValidationError(f"no file format for {type(m).__name__}")
