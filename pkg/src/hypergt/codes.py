"""Test matrices, response vectors, separability and discard verifiers.

A :class:`TestMatrix` stores its pools (rows) as vertex bitmasks.  Response
vectors are plain tuples of 0/1 ints, one per pool.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from . import _kernels
from .errors import BudgetExceeded, ParseError, PreconditionError
from .hypergraph import Hypergraph, edge_key, from_mask, to_mask

ResponseVector = tuple  # tuple[int, ...] of 0/1

DEFAULT_MAX_ROUNDS = 50
ESCALATION = 1.5


@dataclass(frozen=True)
class TestMatrix:
    """``t`` pools over vertices ``1..n``; ``rows[i]`` is the bitmask of pool ``i + 1``."""

    __test__ = False  # not a pytest class

    t: int
    n: int
    rows: tuple[int, ...]

    def __post_init__(self):
        if len(self.rows) != self.t:
            raise PreconditionError(f"expected {self.t} rows, got {len(self.rows)}")
        limit = 1 << self.n
        for r in self.rows:
            if r < 0 or r >= limit:
                raise PreconditionError(f"pool {sorted(from_mask(r))} not inside [1..{self.n}]")

    @classmethod
    def from_pools(cls, n: int, pools: Iterable[Iterable[int]]) -> "TestMatrix":
        rows = tuple(to_mask(p) for p in pools)
        return cls(len(rows), n, rows)

    @classmethod
    def from_array(cls, a) -> "TestMatrix":
        a = np.asarray(a, dtype=bool)
        if a.ndim != 2:
            raise PreconditionError("matrix must be two-dimensional")
        t, n = a.shape
        rows = tuple(_row_to_int(a[i]) for i in range(t))
        return cls(t, n, rows)

    @classmethod
    def identity(cls, n: int) -> "TestMatrix":
        return cls(n, n, tuple(1 << j for j in range(n)))

    @property
    def pools(self) -> list[frozenset[int]]:
        return [from_mask(r) for r in self.rows]

    @property
    def columns(self) -> list[int]:
        """Column ``j`` as a t-bit mask (bit ``i`` <=> vertex ``j + 1`` in pool ``i + 1``)."""
        cols = [0] * self.n
        for i, r in enumerate(self.rows):
            j = 0
            while r:
                if r & 1:
                    cols[j] |= 1 << i
                r >>= 1
                j += 1
        return cols

    def to_array(self) -> np.ndarray:
        a = np.zeros((self.t, self.n), dtype=np.uint8)
        for i, r in enumerate(self.rows):
            for v in from_mask(r):
                a[i, v - 1] = 1
        return a

    def stack(self, other: "TestMatrix") -> "TestMatrix":
        if other.n != self.n:
            raise PreconditionError("cannot stack matrices over different vertex sets")
        return TestMatrix(self.t + other.t, self.n, self.rows + other.rows)


def _row_to_int(row) -> int:
    packed = np.packbits(np.asarray(row, dtype=bool), bitorder="little")
    return int.from_bytes(packed.tobytes(), "little")


@dataclass(frozen=True)
class Certification:
    property: str                 # "separable" | "p-discard"
    status: str                   # "certified" | "probabilistic" | "refuted"
    p: int | None = None
    delta: float | None = None
    witness: tuple[frozenset[int], frozenset[int]] | None = None
    t: int | None = None
    rounds: int = 0

    @property
    def certified(self) -> bool:
        return self.status == "certified"


def canonical_edges(E) -> list[frozenset[int]]:
    if isinstance(E, Hypergraph):
        return list(E.edges)
    return sorted((frozenset(e) for e in E), key=edge_key)


def _check_in_range(M: TestMatrix, masks: Iterable[int]):
    limit = 1 << M.n
    for e in masks:
        if e >= limit:
            raise PreconditionError(f"vertex {max(from_mask(e))} outside [1..{M.n}]")


# ---------------------------------------------------------------------------
# responses and decoding

def response_mask(M: TestMatrix, defectives: int) -> int:
    """Response vector as a t-bit mask, for a defective set given as a bitmask."""
    acc = 0
    for i, r in enumerate(M.rows):
        if r & defectives:
            acc |= 1 << i
    return acc


def mask_to_response(mask: int, t: int) -> ResponseVector:
    return tuple((mask >> i) & 1 for i in range(t))


def response_vector(M: TestMatrix, D: Iterable[int]) -> ResponseVector:
    """Bit ``i`` is 1 iff pool ``i`` contains a vertex of ``D``."""
    dm = to_mask(D)
    _check_in_range(M, [dm])
    return mask_to_response(response_mask(M, dm), M.t)


def clean_set(M: TestMatrix, r: Sequence[int]) -> int:
    """Union of the negative pools, as a vertex mask."""
    if len(r) != M.t:
        raise PreconditionError(f"response length {len(r)} != t = {M.t}")
    acc = 0
    for row, bit in zip(M.rows, r):
        if not bit:
            acc |= row
    return acc


def decode_survivors(M: TestMatrix, r: Sequence[int], E) -> list[frozenset[int]]:
    """Edges that contain no vertex of a negative pool, in canonical order."""
    clean = clean_set(M, r)
    return [e for e in canonical_edges(E) if not to_mask(e) & clean]


# ---------------------------------------------------------------------------
# verifiers

def is_separable(M: TestMatrix, E) -> Certification:
    """Certify that distinct edges give distinct response vectors.

    On failure the witness is the lexicographically first colliding pair in
    canonical edge order.
    """
    edges = canonical_edges(E)
    masks = [to_mask(e) for e in edges]
    _check_in_range(M, masks)
    resp = _kernels.response_masks(list(M.rows), masks, M.n)
    groups: dict[int, list[int]] = {}
    for i, x in enumerate(resp):
        groups.setdefault(x, []).append(i)
    clashes = [(g[0], g[1]) for g in groups.values() if len(g) > 1]
    if not clashes:
        return Certification("separable", "certified", t=M.t)
    i, j = min(clashes)
    return Certification("separable", "refuted", witness=(edges[i], edges[j]), t=M.t)


def is_p_discarding(M: TestMatrix, E, p: int) -> Certification:
    """Certify that for every ordered pair ``(e, e*)`` with ``|e \\ e*| >= p``
    some pool meets ``e \\ e*`` and misses ``e*``.

    The refutation witness is ``(e, e*)``; pairs are scanned with ``e*``
    in the outer loop, both in canonical order.
    """
    if p < 1:
        raise PreconditionError(f"p must be positive, got {p}")
    edges = canonical_edges(E)
    masks = [to_mask(e) for e in edges]
    _check_in_range(M, masks)
    bad = _kernels.first_discard_violation(list(M.rows), masks, p, M.n)
    if bad is None:
        return Certification("p-discard", "certified", p=p, t=M.t)
    i, j = bad
    return Certification("p-discard", "refuted", p=p, witness=(edges[i], edges[j]), t=M.t)


# ---------------------------------------------------------------------------
# random construction

def _seed_list(seed) -> list[int]:
    if seed is None:
        raise PreconditionError("an explicit seed is required")
    if isinstance(seed, (tuple, list)):
        return [x for part in seed for x in _seed_list(part)]
    if int(seed) < 0:
        raise PreconditionError(f"seeds must be non-negative, got {seed}")
    return [int(seed)]


def random_matrix(t: int, n: int, q: float, seed) -> TestMatrix:
    """Each entry independently 1 with probability ``q``; deterministic per seed."""
    if not 0 < q < 1:
        raise PreconditionError(f"density must lie in (0, 1), got {q}")
    if t < 0 or n < 0:
        raise PreconditionError("dimensions must be non-negative")
    rng = np.random.default_rng(_seed_list(seed))
    a = rng.random((t, n)) < q
    return TestMatrix(t, n, tuple(_row_to_int(a[i]) for i in range(t)))


def analytic_length(m: int, d: int, p: int, delta: float) -> tuple[int, float, float]:
    """Starting length, density and per-row isolation probability.

    With density ``q = 1/(d+1)`` a row misses a fixed ``e*`` (size <= d) and
    meets a fixed ``e \\ e*`` (size >= p) with probability at least
    ``sigma = (1-q)^d (1-(1-q)^p)``.  A union bound over the ``m(m-1)``
    ordered pairs gives ``t0 = ceil(ln(m(m-1)/delta) / sigma)``.
    """
    q = 1.0 / (d + 1)
    sigma = (1 - q) ** d * (1 - (1 - q) ** p)
    pairs = m * (m - 1)
    if pairs == 0:
        return 0, q, sigma
    return max(1, math.ceil(math.log(pairs / delta) / sigma)), q, sigma


def _embed(sub: TestMatrix, support: list[int], n: int) -> TestMatrix:
    """Place the columns of ``sub`` on the vertices in ``support``."""
    rows = []
    for r in sub.rows:
        acc = 0
        j = 0
        while r:
            if r & 1:
                acc |= 1 << (support[j] - 1)
            r >>= 1
            j += 1
        rows.append(acc)
    return TestMatrix(sub.t, n, tuple(rows))


def construct_discard_matrix(E, d: int, p: int, delta: float, seed, mode: str = "certified",
                             n: int | None = None,
                             max_rounds: int = DEFAULT_MAX_ROUNDS) -> tuple[TestMatrix, Certification]:
    """Random p-discard matrix for the edge set ``E``.

    Only vertices covered by ``E`` receive random entries; every other column
    is zero.  In ``certified`` mode the draw is verified with
    :func:`is_p_discarding` and redrawn with 1.5x more rows until it passes
    (at most ``max_rounds`` draws).  In ``probabilistic`` mode the first draw
    is returned unverified.
    """
    edges = canonical_edges(E)
    if n is None:
        n = E.n if isinstance(E, Hypergraph) else max((max(e) for e in edges if e), default=0)
    if not 1 <= p <= max(d, 1):
        raise PreconditionError(f"need 1 <= p <= d, got p={p}, d={d}")
    if not 0 < delta < 1:
        raise PreconditionError(f"delta must lie in (0, 1), got {delta}")
    if mode not in ("certified", "probabilistic"):
        raise PreconditionError(f"unknown mode {mode!r}")
    if any(len(e) > d for e in edges):
        raise PreconditionError(f"an edge is larger than d={d}")
    masks = tuple(to_mask(e) for e in edges)
    rows, cert = _construct(masks, n, d, p, float(delta), tuple(_seed_list(seed)), mode, max_rounds)
    return TestMatrix(len(rows), n, rows), cert


@lru_cache(maxsize=512)
def _construct(masks, n, d, p, delta, seed, mode, max_rounds):
    # pure in its arguments, so memoizing is safe
    m = len(masks)
    t, q, _ = analytic_length(m, d, p, delta)
    support_mask = 0
    for e in masks:
        support_mask |= e
    support = sorted(from_mask(support_mask))
    if m < 2:
        status = "certified" if mode == "certified" else "probabilistic"
        return (), Certification("p-discard", status, p=p, delta=delta, t=0, rounds=0)
    if mode == "probabilistic":
        M = _embed(random_matrix(t, len(support), q, seed + (0,)), support, n)
        return M.rows, Certification("p-discard", "probabilistic", p=p, delta=delta, t=t, rounds=0)
    best = None
    for rnd in range(max_rounds):
        M = _embed(random_matrix(t, len(support), q, seed + (rnd,)), support, n)
        bad = _kernels.first_discard_violation(list(M.rows), list(masks), p, n)
        if bad is None:
            return M.rows, Certification("p-discard", "certified", p=p, delta=delta, t=t,
                                         rounds=rnd + 1)
        best = (from_mask(masks[bad[0]]), from_mask(masks[bad[1]]))
        t = math.ceil(ESCALATION * t)
    raise BudgetExceeded(
        f"no certified {p}-discard matrix within {max_rounds} rounds; last witness {best}",
        best=best)


# ---------------------------------------------------------------------------
# family view

def to_family(M: TestMatrix) -> list[frozenset[int]]:
    """``F_j = {i : vertex j in pool i}`` for ``j = 1..n`` (1-based pool indices)."""
    return [from_mask(c) for c in M.columns]


def from_family(family: Sequence[Iterable[int]], t: int) -> TestMatrix:
    rows = [0] * t
    for j, F in enumerate(family):
        for i in F:
            if not 1 <= i <= t:
                raise PreconditionError(f"pool index {i} outside [1..{t}]")
            rows[i - 1] |= 1 << j
    return TestMatrix(t, len(family), tuple(rows))


# ---------------------------------------------------------------------------
# text formats

def format_matrix(M: TestMatrix) -> str:
    lines = [f"t {M.t} n {M.n}"]
    for r in M.rows:
        lines.append("".join("1" if (r >> j) & 1 else "0" for j in range(M.n)))
    return "\n".join(lines) + "\n"


def parse_matrix(text: str) -> TestMatrix:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines:
        raise ParseError("empty matrix file")
    head = lines[0].split()
    if len(head) != 4 or head[0] != "t" or head[2] != "n":
        raise ParseError("expected header 't <T> n <N>'")
    try:
        t, n = int(head[1]), int(head[3])
    except ValueError:
        raise ParseError("non-integer matrix dimensions") from None
    body = lines[1:]
    if len(body) != t:
        raise ParseError(f"expected {t} rows, found {len(body)}")
    rows = []
    for k, line in enumerate(body, start=1):
        if len(line) != n or set(line) - {"0", "1"}:
            raise ParseError(f"row {k}: expected {n} characters from {{0,1}}")
        rows.append(sum(1 << j for j, ch in enumerate(line) if ch == "1"))
    return TestMatrix(t, n, tuple(rows))


def read_matrix(path) -> TestMatrix:
    with open(path) as fh:
        return parse_matrix(fh.read())


def write_matrix(M: TestMatrix, path) -> None:
    with open(path, "w") as fh:
        fh.write(format_matrix(M))


CERT_COLUMNS = ("property", "status", "p", "delta", "t", "rounds")


def certification_csv(certs: Iterable[Certification]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CERT_COLUMNS)
    for c in certs:
        w.writerow([c.property, c.status, "" if c.p is None else c.p,
                    "" if c.delta is None else c.delta, "" if c.t is None else c.t, c.rounds])
    return buf.getvalue()
