"""Simulated test oracle that hides one defective hyperedge."""

from __future__ import annotations

from ..codes import TestMatrix, mask_to_response, response_mask
from ..errors import AdaptivityError, PreconditionError
from ..hypergraph import to_mask


class TestOracle:
    """Answers one batch of pools per stage.

    A pool answers 1 iff it contains a vertex of the hidden edge.  A batch
    for a stage that was already answered, or for an earlier stage than the
    last one answered, is refused with :class:`AdaptivityError`.
    """

    __test__ = False  # not a pytest class

    def __init__(self, estar):
        self.estar = frozenset(estar)
        self._mask = to_mask(self.estar)
        self.batches: list[tuple[int, int]] = []

    def query(self, stage: int, matrix: TestMatrix) -> tuple:
        if stage < 1:
            raise PreconditionError(f"stages are numbered from 1, got {stage}")
        if self.batches and stage <= self.batches[-1][0]:
            raise AdaptivityError(
                f"stage {stage} submitted after stage {self.batches[-1][0]} was answered")
        if self._mask >> matrix.n:
            raise PreconditionError("hidden edge has vertices outside the matrix")
        self.batches.append((stage, matrix.t))
        return mask_to_response(response_mask(matrix, self._mask), matrix.t)

    @property
    def batch_count(self) -> int:
        return len(self.batches)

    @property
    def tests(self) -> int:
        return sum(t for _, t in self.batches)
