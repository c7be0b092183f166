"""Hypergraph model, structural metrics, generators and text I/O.

Vertices are the integers ``1..n``.  A hyperedge is a ``frozenset`` of
vertices; internally it is also kept as an int bitmask whose bit ``j - 1``
marks vertex ``j``.  Edges are stored in canonical order, i.e. sorted by
their increasing vertex tuple.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Iterable

import numpy as np

from . import _kernels
from .errors import BudgetExceeded, ParseError, PreconditionError


def to_mask(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << (v - 1)
    return m


def from_mask(mask: int) -> frozenset[int]:
    out = []
    j = 1
    while mask:
        if mask & 1:
            out.append(j)
        mask >>= 1
        j += 1
    return frozenset(out)


def edge_key(edge) -> tuple[int, ...]:
    """Canonical encoding of an edge, used for every deterministic ordering."""
    return tuple(sorted(edge))


@dataclass(frozen=True)
class Hypergraph:
    """``n`` vertices and a tuple of pairwise distinct hyperedges.

    Use :meth:`build` to construct from arbitrary iterables; it validates and
    puts the edges in canonical order.
    """

    n: int
    edges: tuple[frozenset[int], ...]

    @classmethod
    def build(cls, n: int, edges: Iterable[Iterable[int]]) -> "Hypergraph":
        if n < 0:
            raise PreconditionError(f"vertex count must be non-negative, got {n}")
        seen = set()
        out = []
        for e in edges:
            fe = frozenset(e)
            if not fe:
                raise PreconditionError("hyperedges must be nonempty")
            for v in fe:
                if not (isinstance(v, (int, np.integer)) and 1 <= v <= n):
                    raise PreconditionError(f"vertex {v!r} outside [1..{n}]")
            if fe in seen:
                raise PreconditionError(f"duplicate hyperedge {edge_key(fe)}")
            seen.add(fe)
            out.append(frozenset(int(v) for v in fe))
        out.sort(key=edge_key)
        return cls(n, tuple(out))

    @cached_property
    def masks(self) -> tuple[int, ...]:
        return tuple(to_mask(e) for e in self.edges)

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def d(self) -> int:
        return max((len(e) for e in self.edges), default=0)

    def degrees(self) -> list[int]:
        """Degree of each vertex; index 0 is vertex 1."""
        deg = [0] * self.n
        for e in self.edges:
            for v in e:
                deg[v - 1] += 1
        return deg

    def index(self, edge) -> int:
        """Position of ``edge`` in canonical order."""
        fe = frozenset(edge)
        try:
            return self.edges.index(fe)
        except ValueError:
            raise PreconditionError(f"{edge_key(fe)} is not a hyperedge") from None

    def __len__(self):
        return len(self.edges)


@dataclass(frozen=True)
class Metrics:
    d: int
    min_diff: int | None
    max_diff: int | None
    max_intersection: int | None
    uniform: bool
    max_degree: int
    nested: bool

    @property
    def strict_diff_bound(self) -> int | None:
        """Smallest ``b`` with every ordered difference ``< b``."""
        return None if self.max_diff is None else self.max_diff + 1


def normalize(h: Hypergraph) -> tuple[Hypergraph, dict[int, int]]:
    """Drop isolated vertices and relabel the rest onto ``1..n'``.

    Relabeling preserves vertex order.  Returns the new hypergraph and the
    old-to-new map.
    """
    if not h.edges:
        raise PreconditionError("hypergraph has no hyperedges (no candidates)")
    covered = sorted(set().union(*h.edges))
    relabel = {old: new for new, old in enumerate(covered, start=1)}
    edges = [frozenset(relabel[v] for v in e) for e in h.edges]
    return Hypergraph.build(len(covered), edges), relabel


def metrics(h: Hypergraph) -> Metrics:
    if not h.edges:
        raise PreconditionError("metrics need at least one hyperedge")
    min_diff, max_diff, max_inter, nested = _kernels.pair_stats(list(h.masks), h.n)
    sizes = {len(e) for e in h.edges}
    return Metrics(
        d=h.d,
        min_diff=min_diff,
        max_diff=max_diff,
        max_intersection=max_inter,
        uniform=len(sizes) == 1,
        max_degree=max(h.degrees(), default=0),
        nested=nested,
    )


def high_degree_edge_subset(h: Hypergraph, f: int) -> tuple[list[frozenset[int]], int]:
    """Edges made only of vertices of degree ``>= f``, plus the guaranteed
    lower bound ``|E| - (f - 1) * n_s`` on their number, where ``n_s`` counts
    the vertices of degree ``< f``.

    Requires a uniform hypergraph and ``1 <= f <= |E| d / n``.
    """
    if not h.edges:
        raise PreconditionError("need at least one hyperedge")
    if len({len(e) for e in h.edges}) != 1:
        raise PreconditionError("hypergraph is not uniform")
    if f < 1:
        raise PreconditionError(f"f must be positive, got {f}")
    if f * h.n > h.m * h.d:
        raise PreconditionError(f"f={f} exceeds |E|d/n = {h.m * h.d}/{h.n}")
    deg = h.degrees()
    n_small = sum(1 for x in deg if x < f)
    kept = [e for e in h.edges if all(deg[v - 1] >= f for v in e)]
    return kept, h.m - (f - 1) * n_small


# ---------------------------------------------------------------------------
# generators

def _rng(seed):
    if isinstance(seed, (tuple, list)):
        return np.random.default_rng([int(s) for s in seed])
    return np.random.default_rng(seed)


def _random_subset(rng, n, d) -> frozenset[int]:
    return frozenset(int(x) + 1 for x in rng.choice(n, size=d, replace=False))


def gen_random_uniform(n: int, d: int, m: int, seed) -> Hypergraph:
    """``m`` distinct uniformly random ``d``-subsets of ``[n]``, normalized."""
    if not 1 <= d <= n:
        raise PreconditionError(f"need 1 <= d <= n, got d={d}, n={n}")
    total = math.comb(n, d)
    if m < 1 or m > total:
        raise PreconditionError(f"cannot draw {m} distinct {d}-subsets of [{n}] (C={total})")
    rng = _rng(seed)
    if total <= 4 * m or total <= 2000:
        # dense regime: sample positions in the lexicographic list
        pool = list(combinations(range(1, n + 1), d))
        picks = rng.choice(total, size=m, replace=False)
        edges = [frozenset(pool[i]) for i in picks]
    else:
        chosen: set[frozenset[int]] = set()
        edges = []
        while len(edges) < m:
            e = _random_subset(rng, n, d)
            if e not in chosen:
                chosen.add(e)
                edges.append(e)
    return normalize(Hypergraph.build(n, edges))[0]


def gen_bounded_intersection(n: int, d: int, m: int, max_intersection: int, seed,
                             budget: int | None = None) -> Hypergraph:
    """``m`` random ``d``-subsets of ``[n]`` pairwise meeting in at most
    ``max_intersection`` vertices, by rejection sampling.

    ``budget`` caps the number of draws (default ``1000 * m``).
    """
    if not 1 <= d <= n:
        raise PreconditionError(f"need 1 <= d <= n, got d={d}, n={n}")
    if max_intersection < 0:
        raise PreconditionError("max_intersection must be non-negative")
    if m < 1:
        raise PreconditionError("m must be positive")
    if max_intersection < d:
        from .bounds import edge_count_cap
        cap = edge_count_cap(n, d, max_intersection)
        if m > cap:
            raise BudgetExceeded(
                f"at most {cap} edges can pairwise intersect in <= {max_intersection} vertices",
                best=0)
    budget = 1000 * m if budget is None else budget
    rng = _rng(seed)
    edges: list[frozenset[int]] = []
    masks: list[int] = []
    for _ in range(budget):
        e = _random_subset(rng, n, d)
        em = to_mask(e)
        if all(em != f and (em & f).bit_count() <= max_intersection for f in masks):
            edges.append(e)
            masks.append(em)
            if len(edges) == m:
                return normalize(Hypergraph.build(n, edges))[0]
    raise BudgetExceeded(
        f"placed only {len(edges)} of {m} edges in {budget} attempts", best=len(edges))


# ---------------------------------------------------------------------------
# text format

def format_hypergraph(h: Hypergraph) -> str:
    lines = [f"n {h.n}"]
    lines += ["e " + " ".join(map(str, edge_key(e))) for e in h.edges]
    return "\n".join(lines) + "\n"


def parse_hypergraph(text: str) -> Hypergraph:
    n = None
    edges = []
    seen = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if n is None:
            if parts[0] != "n" or len(parts) != 2:
                raise ParseError(f"line {lineno}: expected 'n <N>' header")
            try:
                n = int(parts[1])
            except ValueError:
                raise ParseError(f"line {lineno}: bad vertex count {parts[1]!r}") from None
            continue
        if parts[0] != "e":
            raise ParseError(f"line {lineno}: expected an 'e' line")
        try:
            vs = [int(x) for x in parts[1:]]
        except ValueError:
            raise ParseError(f"line {lineno}: non-integer vertex") from None
        if not vs:
            raise ParseError(f"line {lineno}: empty hyperedge")
        if any(b <= a for a, b in zip(vs, vs[1:])):
            raise ParseError(f"line {lineno}: vertices must be strictly increasing")
        if vs[0] < 1 or vs[-1] > n:
            raise ParseError(f"line {lineno}: vertex outside [1..{n}]")
        key = tuple(vs)
        if key in seen:
            raise ParseError(f"line {lineno}: duplicate hyperedge {key}")
        seen.add(key)
        edges.append(vs)
    if n is None:
        raise ParseError("missing 'n <N>' header")
    return Hypergraph.build(n, edges)


def read_hypergraph(path) -> Hypergraph:
    with open(path) as fh:
        return parse_hypergraph(fh.read())


def write_hypergraph(h: Hypergraph, path) -> None:
    with open(path, "w") as fh:
        fh.write(format_hypergraph(h))
