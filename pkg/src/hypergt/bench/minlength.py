"""Exhaustive minimum length of an E-separable code at desk scale."""

from __future__ import annotations

from dataclasses import dataclass

from .. import _kernels
from ..codes import TestMatrix, canonical_edges
from ..hypergraph import to_mask

DEFAULT_CAP = 24


@dataclass(frozen=True)
class MinLength:
    """``t`` is the least separable length, or ``None`` when none exists up to ``searched``."""

    t: int | None
    searched: int
    witness: TestMatrix | None = None

    @property
    def exceeded(self) -> bool:
        return self.t is None

    def __str__(self):
        return str(self.t) if self.t is not None else f">{self.searched}"


def columns_to_matrix(cols, t: int) -> TestMatrix:
    rows = [0] * t
    for j, c in enumerate(cols):
        for i in range(t):
            if (c >> i) & 1:
                rows[i] |= 1 << j
    return TestMatrix(t, len(cols), tuple(rows))


def brute_force_min_length(E, n: int, t_max: int, cap: int = DEFAULT_CAP) -> MinLength:
    """Least ``t`` such that some ``t x n`` 0/1 matrix separates ``E``.

    Lengths are tried upward; only lengths with ``t * n <= cap`` are
    searched, so the result is a sentinel (``t is None``) when the answer
    exceeds ``min(t_max, cap // n)``.  The search over column assignments
    is exact (see ``separable_search``).
    """
    edges = canonical_edges(E)
    masks = [to_mask(e) for e in edges]
    if len(masks) <= 1:
        return MinLength(0, 0, TestMatrix(0, n, ()))
    limit = min(t_max, cap // n) if n else t_max
    for t in range(limit + 1):
        cols = _kernels.separable_search(masks, n, t)
        if cols is not None:
            return MinLength(t, t, columns_to_matrix(cols, t))
    return MinLength(None, limit)
