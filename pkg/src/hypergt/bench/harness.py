"""Trials, exhaustive verification, parameter sweeps and constant fitting."""

from __future__ import annotations

import csv
import io
import logging
import math
import time
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import nnls

from ..bounds import info_lower_bound, separable_lower_bound
from ..errors import BudgetExceeded, InconsistencyError, PreconditionError
from ..hypergraph import Hypergraph, gen_bounded_intersection, gen_random_uniform
from ..stages import DEFAULT_DELTA, Schedule, default_schedule, s_stage_search, schedule_for
from .oracle import TestOracle

log = logging.getLogger(__name__)

MONTE_CARLO_SAMPLES = 200


@dataclass(frozen=True)
class TrialResult:
    success: bool
    estar: frozenset
    returned: frozenset | None
    schedule: tuple
    tests_per_stage: tuple
    total_tests: int
    batches: int
    wall_ms: float
    seed: object
    reason: str = ""


def run_trial(H: Hypergraph, estar, schedule, delta: float = DEFAULT_DELTA, seed=0,
              mode: str = "certified") -> TrialResult:
    """Search for ``estar`` with a fresh oracle; failures are recorded, not raised."""
    estar = frozenset(estar)
    if estar not in H.edges:
        raise PreconditionError(f"{sorted(estar)} is not a hyperedge")
    sch = schedule_for(H.d, schedule)
    oracle = TestOracle(estar)
    start = time.perf_counter()
    returned, reason, per_stage = None, "", ()
    try:
        returned, trace = s_stage_search(H, sch, delta, seed, oracle, mode)
        per_stage = tuple(trace.tests_per_stage)
    except (InconsistencyError, BudgetExceeded) as exc:
        reason = f"{type(exc).__name__}: {exc}"
        per_stage = tuple(t for _, t in oracle.batches)
    wall = (time.perf_counter() - start) * 1000.0
    success = returned == estar
    if returned is not None and not success:
        reason = f"returned {sorted(returned)}"
    if success and oracle.batch_count != sch.s:
        success = False
        reason = f"{oracle.batch_count} batches for {sch.s} stages"
    return TrialResult(success, estar, returned, sch.b, per_stage, sum(per_stage),
                       oracle.batch_count, wall, seed, reason)


@dataclass
class VerifyReport:
    trials: list[TrialResult] = field(default_factory=list)

    @property
    def successes(self) -> int:
        return sum(r.success for r in self.trials)

    @property
    def success_rate(self) -> float:
        return self.successes / len(self.trials) if self.trials else 1.0

    @property
    def max_tests(self) -> int:
        return max((r.total_tests for r in self.trials), default=0)

    @property
    def mean_tests(self) -> float:
        return float(np.mean([r.total_tests for r in self.trials])) if self.trials else 0.0

    @property
    def failures(self) -> list[TrialResult]:
        return [r for r in self.trials if not r.success]


def exhaustive_verify(H: Hypergraph, schedule, delta: float = DEFAULT_DELTA, seed=0,
                      mode: str = "certified") -> VerifyReport:
    """One trial for every hyperedge as the hidden defective edge."""
    sch = schedule_for(H.d, schedule)
    return VerifyReport([run_trial(H, e, sch, delta, seed, mode) for e in H.edges])


# ---------------------------------------------------------------------------
# bounds attached to sweep rows

C_GRID = tuple(1 + k / 100 for k in range(50))


def best_separable_lb(H: Hypergraph) -> float | None:
    """Largest separable lower bound over admissible ``(v, c)``, for uniform ``H``."""
    if len({len(e) for e in H.edges}) != 1:
        return None
    d = H.d
    best = None
    for v in range(1, d):
        for c in C_GRID:
            rep = separable_lower_bound(H.n, H.m, d, v, c)
            if rep.applicable and (best is None or rep.value > best):
                best = rep.value
    return best


# ---------------------------------------------------------------------------
# sweeps

@dataclass
class SweepConfig:
    """Cross product of instances x seeds x stage counts.

    ``instances`` entries are dicts with ``n, d, m`` and optionally
    ``lambda_bar`` (bounded-intersection generator).  ``trials`` is
    ``"exhaustive"``, ``"auto"`` (exhaustive up to 200 edges, else a
    200-edge sample) or a sample size.
    """

    instances: list = field(default_factory=list)
    seeds: list = field(default_factory=lambda: [0])
    stages: list = field(default_factory=lambda: [1])
    delta: float = DEFAULT_DELTA
    trials: object = "auto"
    mode: str = "certified"

    @classmethod
    def from_dict(cls, d: dict) -> "SweepConfig":
        known = {"instances", "seeds", "stages", "delta", "trials", "mode"}
        unknown = set(d) - known
        if unknown:
            raise PreconditionError(f"unknown sweep keys: {sorted(unknown)}")
        return cls(**d)


def make_instance(inst: dict, seed: int) -> Hypergraph:
    lam = inst.get("lambda_bar")
    if lam is None:
        return gen_random_uniform(inst["n"], inst["d"], inst["m"], seed)
    return gen_bounded_intersection(inst["n"], inst["d"], inst["m"], lam, seed)


def _pick_targets(H: Hypergraph, trials, seed) -> list[int]:
    if trials == "exhaustive" or (trials == "auto" and H.m <= MONTE_CARLO_SAMPLES):
        return list(range(H.m))
    k = MONTE_CARLO_SAMPLES if trials == "auto" else int(trials)
    if k >= H.m:
        return list(range(H.m))
    rng = np.random.default_rng([int(seed), 0x5EED])
    return sorted(int(i) for i in rng.choice(H.m, size=k, replace=False))


def sweep(config: SweepConfig | dict) -> list[dict]:
    """One row per (instance, seed, stage count, target edge), in that order."""
    if isinstance(config, dict):
        config = SweepConfig.from_dict(config)
    rows = []
    for inst in config.instances:
        for seed in config.seeds:
            try:
                H = make_instance(inst, seed)
            except (PreconditionError, BudgetExceeded) as exc:
                log.warning("skipping instance %s seed %s: %s", inst, seed, exc)
                continue
            info_lb = info_lower_bound(H.m)
            sep_lb = best_separable_lb(H)
            targets = _pick_targets(H, config.trials, seed)
            for s in config.stages:
                try:
                    sch = default_schedule(H.d, s)
                except PreconditionError as exc:
                    log.warning("skipping s=%s on %s: %s", s, inst, exc)
                    continue
                for trial, idx in enumerate(targets):
                    res = run_trial(H, H.edges[idx], sch, config.delta, seed, config.mode)
                    rows.append({
                        "n": H.n, "d": H.d, "m": H.m,
                        "lambda_bar": inst.get("lambda_bar"),
                        "s": sch.s, "schedule": "-".join(map(str, sch.b)),
                        "seed": seed, "trial": trial, "estar_id": idx,
                        "success": int(res.success),
                        "t_stage": list(res.tests_per_stage),
                        "total_tests": res.total_tests,
                        "info_lb": info_lb, "sep_lb": sep_lb,
                        "wall_ms": res.wall_ms,
                    })
    return rows


def sweep_csv(rows: list[dict], max_stages: int | None = None) -> str:
    if max_stages is None:
        max_stages = max((len(r["t_stage"]) for r in rows), default=1)
    header = (["n", "d", "m", "lambda_bar", "s", "schedule", "seed", "trial", "estar_id",
               "success"] + [f"t_stage_{i}" for i in range(1, max_stages + 1)]
              + ["total_tests", "info_lb", "sep_lb", "wall_ms"])
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        stages = list(r["t_stage"]) + [""] * (max_stages - len(r["t_stage"]))
        w.writerow([r["n"], r["d"], r["m"], "" if r["lambda_bar"] is None else r["lambda_bar"],
                    r["s"], r["schedule"], r["seed"], r["trial"], r["estar_id"], r["success"]]
                   + stages
                   + [r["total_tests"], r["info_lb"],
                      "" if r["sep_lb"] is None else f"{r['sep_lb']:.6f}",
                      f"{r['wall_ms']:.3f}"])
    return buf.getvalue()


# ---------------------------------------------------------------------------
# constant fitting

@dataclass(frozen=True)
class FitResult:
    C1: float
    C2: float
    residuals: np.ndarray
    rms: float
    points: int

    def predict(self, d, m, s) -> float:
        return self.C1 * s * d ** (1.0 / s) * math.log2(m) + self.C2 * s * d


def _design(d, m, s):
    return [s * d ** (1.0 / s) * math.log2(m), s * d]


def fit_constants(results) -> FitResult:
    """Non-negative least squares of total tests on ``s d^(1/s) log2 m`` and ``s d``.

    ``results`` holds sweep rows (dicts with ``d, m, s, total_tests``) or
    ``(d, m, s, total)`` tuples.
    """
    pts = []
    for r in results:
        if isinstance(r, dict):
            pts.append((r["d"], r["m"], r["s"], r["total_tests"]))
        else:
            pts.append(tuple(r))
    if len({p[:3] for p in pts}) < 3:
        raise PreconditionError("need at least 3 distinct (d, m, s) points")
    A = np.array([_design(d, m, s) for d, m, s, _ in pts], dtype=float)
    y = np.array([p[3] for p in pts], dtype=float)
    if np.linalg.matrix_rank(A) < 2:
        raise PreconditionError("design matrix is rank deficient")
    coef, _ = nnls(A, y)
    res = y - A @ coef
    return FitResult(float(coef[0]), float(coef[1]), res, float(np.sqrt(np.mean(res ** 2))),
                     len(pts))
