"""Few-stage search for the defective hyperedge.

Stage 1 runs a random p-discard matrix with ``p = b_1`` on the whole edge
set and prunes every candidate that some other candidate exceeds by
``b_1`` or more vertices.  Each later stage picks a largest surviving
(reduced) edge as pivot, subtracts it from every survivor, tests the
remainders with a ``b_i``-discard matrix, and tests the pivot's vertices
one by one.  Pivot vertices found defective go to a ledger, which is added
back at the end to rebuild the defective edge.

An oracle is any object with ``query(stage, matrix) -> sequence of bits``.
Each stage submits exactly one batch.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Mapping

from . import _kernels
from .codes import TestMatrix, clean_set, construct_discard_matrix, Certification
from .errors import InconsistencyError, PreconditionError
from .hypergraph import Hypergraph, edge_key, from_mask, to_mask

DEFAULT_DELTA = 0.05


# ---------------------------------------------------------------------------
# schedules

@dataclass(frozen=True)
class Schedule:
    """Thresholds ``b_1 > ... > b_s = 1`` for edges of size at most ``d``."""

    b: tuple[int, ...]
    d: int

    def __post_init__(self):
        b = self.b
        if not b or b[-1] != 1:
            raise PreconditionError(f"schedule must end with 1, got {b}")
        if any(x <= y for x, y in zip(b, b[1:])):
            raise PreconditionError(f"schedule must be strictly decreasing, got {b}")
        # b_1 < d, except the one-stage schedule (1,) which is valid for any d
        if b != (1,) and b[0] >= self.d:
            raise PreconditionError(f"need d > b_1, got d={self.d}, b_1={b[0]}")

    @property
    def s(self) -> int:
        return len(self.b)

    def threshold(self, i: int) -> int:
        """``b_i`` with ``b_0 = d``."""
        return self.d if i == 0 else self.b[i - 1]


def _ceil_root(d: int, k: int, s: int) -> int:
    """Exact ``ceil(d ** (k / s))`` for positive integers."""
    target = d ** k
    x = max(1, math.ceil(d ** (k / s)))
    while x > 1 and (x - 1) ** s >= target:
        x -= 1
    while x ** s < target:
        x += 1
    return x


def default_schedule(d: int, s: int) -> Schedule:
    """``b_i = ceil(d^((s-i)/s))``, with repeated values (including ``b_1 = d``)
    dropped.  The effective stage count is ``len(result.b)``."""
    if d < 1 or s < 1:
        raise PreconditionError(f"need d >= 1 and s >= 1, got d={d}, s={s}")
    if s > d:
        raise PreconditionError(f"need s <= d, got s={s}, d={d}")
    raw = [_ceil_root(d, s - i, s) for i in range(1, s + 1)]
    kept = []
    last = d
    for x in raw:
        if x < last:
            kept.append(x)
            last = x
    return Schedule(tuple(kept) or (1,), d)


def schedule_for(d: int, sched) -> Schedule:
    """Accept a stage count or an explicit threshold sequence."""
    if isinstance(sched, Schedule):
        return sched
    if isinstance(sched, int):
        return default_schedule(d, sched)
    return Schedule(tuple(int(x) for x in sched), d)


# ---------------------------------------------------------------------------
# pruning

def _prune_masks(masks: list[int], b: int, n: int, fixpoint: bool = False) -> list[int]:
    cur = list(masks)
    while True:
        keep = _kernels.prune_keep(cur, b, n)
        nxt = [e for e, k in zip(cur, keep) if k]
        if not fixpoint or len(nxt) == len(cur):
            return nxt
        cur = nxt


def mutual_difference_prune(S, b: int, fixpoint: bool = False) -> list[frozenset[int]]:
    """Drop every edge that some other edge of ``S`` exceeds by ``b`` or more vertices.

    The test runs against the whole input set in one pass; ``fixpoint=True``
    repeats it until nothing changes.
    """
    edges = sorted({frozenset(e) for e in S}, key=edge_key)
    masks = [to_mask(e) for e in edges]
    n = max((m.bit_length() for m in masks), default=0)
    kept = set(_prune_masks(masks, b, n, fixpoint))
    return [e for e, m in zip(edges, masks) if m in kept]


# ---------------------------------------------------------------------------
# traces

@dataclass(frozen=True)
class StageRecord:
    stage: int
    matrix: TestMatrix
    response: tuple
    certification: Certification
    survivors_before: int
    survivors_after_decode: int
    survivors_after_prune: int
    survivors: tuple            # ((original, reduced), ...) after pruning
    pivot: frozenset | None = None
    pivot_defective: frozenset = frozenset()
    pivot_clean: frozenset = frozenset()
    ledger: frozenset = frozenset()

    @property
    def tests(self) -> int:
        return self.matrix.t


@dataclass
class StageTrace:
    stages: list[StageRecord] = field(default_factory=list)

    @property
    def tests_per_stage(self) -> list[int]:
        return [r.tests for r in self.stages]

    @property
    def total_tests(self) -> int:
        return sum(self.tests_per_stage)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["stage", "t_stage", "survivors_before", "survivors_after_decode",
                    "survivors_after_prune", "pivot_size", "ledger_size"])
        for r in self.stages:
            w.writerow([r.stage, r.tests, r.survivors_before, r.survivors_after_decode,
                        r.survivors_after_prune, "" if r.pivot is None else len(r.pivot),
                        len(r.ledger)])
        return buf.getvalue()


def _query(oracle, stage: int, M: TestMatrix) -> tuple:
    r = tuple(int(bool(x)) for x in oracle.query(stage, M))
    if len(r) != M.t:
        raise InconsistencyError(f"stage {stage}: oracle returned {len(r)} bits for {M.t} pools")
    return r


def _edge_input(E) -> tuple[list[frozenset[int]], int]:
    if isinstance(E, Hypergraph):
        return list(E.edges), E.n
    edges = sorted({frozenset(e) for e in E}, key=edge_key)
    return edges, max((max(e) for e in edges if e), default=0)


def _survivor_pairs(alive: Mapping[int, int]) -> tuple:
    return tuple(sorted(((from_mask(o), from_mask(r)) for o, r in alive.items()),
                        key=lambda x: edge_key(x[0])))


# ---------------------------------------------------------------------------
# one stage

def one_stage_search(E, d: int | None = None, delta: float = DEFAULT_DELTA, seed=0, oracle=None,
                     mode: str = "certified") -> frozenset[int]:
    """Non-adaptive search: one certified 1-discard matrix, then decode.

    Survivors are the defective edge and possibly edges nested in it; the
    largest one is returned.  Survivors that are not a chain mean the
    oracle contradicts every candidate.
    """
    edges, n = _edge_input(E)
    if not edges:
        raise PreconditionError("no candidate hyperedges")
    d = max(len(e) for e in edges) if d is None else d
    M, _ = construct_discard_matrix(edges, max(d, 1), 1, delta, (seed, 1), mode, n=n)
    r = _query(oracle, 1, M)
    clean = clean_set(M, r)
    surv = [e for e in edges if not to_mask(e) & clean]
    if not surv:
        raise InconsistencyError("no hyperedge is consistent with the responses")
    surv.sort(key=len)
    for a, b in zip(surv, surv[1:]):
        if not a <= b:
            raise InconsistencyError(
                f"survivors {edge_key(a)} and {edge_key(b)} are not nested")
    return surv[-1]


# ---------------------------------------------------------------------------
# reduced discard stage

@dataclass(frozen=True)
class ReducedStageResult:
    survivors: dict                 # original edge -> reduced form
    ledger: frozenset
    tests: int
    matrix: TestMatrix
    response: tuple
    certification: Certification
    pivot: frozenset
    pivot_defective: frozenset
    pivot_clean: frozenset


def _reduced_stage(alive: dict[int, int], n: int, b: int, p: int, delta: float, seed,
                   oracle, ledger: int, stage: int, mode: str):
    if not alive:
        # pruning emptied the candidate set: the earlier responses were inconsistent
        raise InconsistencyError(f"stage {stage}: no candidate hyperedge left to search")
    reduced = sorted(set(alive.values()), key=lambda r: edge_key(from_mask(r)))
    if not 1 <= p <= b - 1:
        raise PreconditionError(f"need 1 <= p <= b - 1, got p={p}, b={b}")
    _, max_diff, _, _ = _kernels.pair_stats(reduced, n)
    if max_diff is not None and max_diff >= b:
        raise PreconditionError(f"reduced edges differ by {max_diff} >= b = {b}")

    pivot = min(reduced, key=lambda r: (-r.bit_count(), edge_key(from_mask(r))))
    hats = sorted({r & ~pivot for r in reduced}, key=lambda r: edge_key(from_mask(r)))
    hat_edges = [from_mask(h) for h in hats]
    Mhat, cert = construct_discard_matrix(hat_edges, b - 1, p, delta, (seed, stage), mode, n=n)
    pivot_vertices = sorted(from_mask(pivot))
    singles = TestMatrix(len(pivot_vertices), n, tuple(1 << (v - 1) for v in pivot_vertices))
    M = Mhat.stack(singles)

    r = _query(oracle, stage, M)
    clean = clean_set(Mhat, r[:Mhat.t])
    pos = 0
    neg = 0
    for v, bit in zip(pivot_vertices, r[Mhat.t:]):
        if bit:
            pos |= 1 << (v - 1)
        else:
            neg |= 1 << (v - 1)

    out = {}
    for orig, red in alive.items():
        hat = red & ~pivot
        inside = red & pivot
        if hat & clean:          # remainder holds a vertex seen in a negative pool
            continue
        if inside & neg:         # holds a pivot vertex that tested negative
            continue
        if pos & ~inside:        # misses a pivot vertex that tested positive
            continue
        out[orig] = hat
    if not out:
        raise InconsistencyError(f"stage {stage}: no hyperedge is consistent with the responses")
    return out, ledger | pos, M, r, cert, pivot, pos, neg


def reduced_discard_stage(E_cur, b: int, p: int, delta: float = DEFAULT_DELTA, seed=0,
                          oracle=None, ledger=frozenset(), stage: int = 2, n: int | None = None,
                          mode: str = "certified") -> ReducedStageResult:
    """One reduced stage on ``E_cur``.

    ``E_cur`` is either a collection of edges (each its own reduced form) or
    a mapping from original edge to current reduced form.  Requires every
    ordered difference between reduced forms to be ``< b`` and ``p <= b - 1``.
    Surviving reduced forms have at most ``b - 1`` vertices, and each
    differs from the defective edge's reduced form in fewer than ``p``.
    """
    if isinstance(E_cur, Mapping):
        alive = {to_mask(o): to_mask(r) for o, r in E_cur.items()}
    else:
        alive = {to_mask(e): to_mask(e) for e in E_cur}
    if not alive:
        raise PreconditionError("no candidate hyperedges")
    if n is None:
        n = max(o.bit_length() for o in alive)
    out, led, M, r, cert, pivot, pos, neg = _reduced_stage(
        alive, n, b, p, delta, seed, oracle, to_mask(ledger), stage, mode)
    return ReducedStageResult(
        survivors={from_mask(o): from_mask(h) for o, h in out.items()},
        ledger=from_mask(led), tests=M.t, matrix=M, response=r, certification=cert,
        pivot=from_mask(pivot), pivot_defective=from_mask(pos), pivot_clean=from_mask(neg))


# ---------------------------------------------------------------------------
# s stages

def s_stage_search(E, schedule, delta: float = DEFAULT_DELTA, seed=0, oracle=None,
                   mode: str = "certified", prune_to_fixpoint: bool = False,
                   ) -> tuple[frozenset[int], StageTrace]:
    """Find the defective edge in ``len(schedule.b)`` non-adaptive stages.

    ``schedule`` may be a :class:`Schedule`, a stage count (expanded with
    :func:`default_schedule`) or an explicit threshold sequence.  Each stage
    gets failure budget ``delta / s``.
    """
    edges, n = _edge_input(E)
    if not edges:
        raise PreconditionError("no candidate hyperedges")
    d = max(len(e) for e in edges)
    sch = schedule_for(d, schedule)
    if sch.b != (1,) and sch.b[0] >= d:
        raise PreconditionError(f"schedule {sch.b} needs d > b_1, edges have d={d}")
    stage_delta = delta / sch.s
    trace = StageTrace()

    # stage 1
    masks = [to_mask(e) for e in edges]
    b1 = sch.b[0]
    M, cert = construct_discard_matrix(edges, max(d, 1), b1, stage_delta, (seed, 1), mode, n=n)
    r = _query(oracle, 1, M)
    clean = clean_set(M, r)
    decoded = [e for e in masks if not e & clean]
    if not decoded:
        raise InconsistencyError("stage 1: no hyperedge is consistent with the responses")
    kept = _prune_masks(decoded, b1, n, prune_to_fixpoint)
    alive = {e: e for e in kept}
    trace.stages.append(StageRecord(
        stage=1, matrix=M, response=r, certification=cert, survivors_before=len(masks),
        survivors_after_decode=len(decoded), survivors_after_prune=len(alive),
        survivors=_survivor_pairs(alive)))

    ledger = 0
    for i in range(2, sch.s + 1):
        b_prev, b_i = sch.b[i - 2], sch.b[i - 1]
        before = len(alive)
        out, ledger, M, r, cert, pivot, pos, neg = _reduced_stage(
            alive, n, b_prev, b_i, stage_delta, seed, oracle, ledger, i, mode)
        after_decode = len(out)
        keep_red = set(_prune_masks(sorted(set(out.values())), b_i, n, prune_to_fixpoint))
        alive = {o: h for o, h in out.items() if h in keep_red}
        trace.stages.append(StageRecord(
            stage=i, matrix=M, response=r, certification=cert, survivors_before=before,
            survivors_after_decode=after_decode, survivors_after_prune=len(alive),
            survivors=_survivor_pairs(alive), pivot=from_mask(pivot),
            pivot_defective=from_mask(pos), pivot_clean=from_mask(neg),
            ledger=from_mask(ledger)))

    if len(alive) != 1:
        names = ", ".join(str(edge_key(from_mask(o))) for o in alive)
        raise InconsistencyError(f"{len(alive)} candidates survive the last stage: {names}")
    (orig, red), = alive.items()
    rebuilt = red | ledger
    if rebuilt != orig:
        raise InconsistencyError(
            f"reconstruction {edge_key(from_mask(rebuilt))} != survivor {edge_key(from_mask(orig))}")
    return from_mask(rebuilt), trace


def two_stage_search(E, d: int | None = None, delta: float = DEFAULT_DELTA, seed=0, oracle=None,
                     mode: str = "certified"):
    edges, _ = _edge_input(E)
    d = max(len(e) for e in edges) if d is None else d
    return s_stage_search(E, default_schedule(d, min(2, d)), delta, seed, oracle, mode)


def three_stage_search(E, d: int | None = None, delta: float = DEFAULT_DELTA, seed=0, oracle=None,
                       mode: str = "certified"):
    edges, _ = _edge_input(E)
    d = max(len(e) for e in edges) if d is None else d
    return s_stage_search(E, default_schedule(d, min(3, d)), delta, seed, oracle, mode)
