"""Command line interface.

Exit codes: 0 success, 2 precondition or parse error, 3 inconsistency,
4 budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys

from .. import _kernels
from ..bounds import all_bounds, bounds_csv
from ..codes import (certification_csv, construct_discard_matrix, format_matrix, is_p_discarding,
                     is_separable, read_matrix)
from ..errors import HyperGTError, PreconditionError
from ..hypergraph import (format_hypergraph, gen_bounded_intersection, gen_random_uniform,
                          metrics, read_hypergraph)
from ..stages import DEFAULT_DELTA, Schedule, default_schedule, s_stage_search
from .harness import SweepConfig, sweep, sweep_csv
from .minlength import DEFAULT_CAP, brute_force_min_length
from .oracle import TestOracle


def _write(text: str, path: str | None):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _vertices(text: str) -> list[int]:
    try:
        return [int(x) for x in text.replace(",", " ").split()]
    except ValueError:
        raise PreconditionError(f"bad vertex list {text!r}") from None


def cmd_gen(args):
    if args.lambda_bar is None:
        H = gen_random_uniform(args.n, args.d, args.m, args.seed)
    else:
        H = gen_bounded_intersection(args.n, args.d, args.m, args.lambda_bar, args.seed)
    _write(format_hypergraph(H), args.out)


def cmd_metrics(args):
    H = read_hypergraph(args.hypergraph)
    mt = metrics(H)
    out = {"n": H.n, "m": H.m, "d": mt.d, "min_diff": mt.min_diff, "max_diff": mt.max_diff,
           "max_intersection": mt.max_intersection, "uniform": mt.uniform,
           "max_degree": mt.max_degree, "nested": mt.nested}
    print(json.dumps(out, indent=2))


def cmd_bounds(args):
    reports = all_bounds(n=args.n, m=args.m, d=args.d, v=args.v, c=args.c,
                         lambda_bar=args.lambda_bar, q=args.q, chi=args.chi, s=args.s,
                         C1=args.C1, C2=args.C2)
    _write(bounds_csv(reports), args.out)


def cmd_build_code(args):
    H = read_hypergraph(args.hypergraph)
    d = args.d if args.d is not None else H.d
    M, cert = construct_discard_matrix(H, d, args.p, args.delta, args.seed, args.mode)
    _write(format_matrix(M), args.out)
    if args.report:
        _write(certification_csv([cert]), args.report)
    else:
        sys.stderr.write(certification_csv([cert]))


def cmd_verify_code(args):
    H = read_hypergraph(args.hypergraph)
    M = read_matrix(args.matrix)
    if args.property == "separable":
        cert = is_separable(M, H)
    else:
        cert = is_p_discarding(M, H, args.p)
    sys.stdout.write(certification_csv([cert]))
    if cert.witness is not None:
        a, b = cert.witness
        print(f"# witness: {sorted(a)} {sorted(b)}")


def _schedule_from_args(args, d) -> Schedule:
    if args.schedule:
        return Schedule(tuple(int(x) for x in args.schedule.split(",")), d)
    return default_schedule(d, args.stages)


def cmd_run(args):
    H = read_hypergraph(args.hypergraph)
    sch = _schedule_from_args(args, H.d)
    if args.estar_index is not None:
        if not 0 <= args.estar_index < H.m:
            raise PreconditionError(f"edge index {args.estar_index} out of range")
        estar = H.edges[args.estar_index]
    else:
        estar = frozenset(_vertices(args.estar))
    if estar not in H.edges:
        raise PreconditionError(f"{sorted(estar)} is not a hyperedge")
    oracle = TestOracle(estar)
    found, trace = s_stage_search(H, sch, args.delta, args.seed, oracle, args.mode)
    out = {"success": found == estar, "estar": sorted(estar), "returned": sorted(found),
           "schedule": list(sch.b), "tests_per_stage": trace.tests_per_stage,
           "total_tests": trace.total_tests, "batches": oracle.batch_count, "seed": args.seed}
    print(json.dumps(out))
    if args.trace:
        _write(trace.to_csv(), args.trace)


def cmd_sweep(args):
    with open(args.config) as fh:
        cfg = SweepConfig.from_dict(json.load(fh))
    rows = sweep(cfg)
    width = max([1] + [s for s in cfg.stages])
    _write(sweep_csv(rows, max_stages=width), args.out)


def cmd_min_length(args):
    H = read_hypergraph(args.hypergraph)
    res = brute_force_min_length(H, H.n, args.t_max, args.cap)
    print(f"min_length {res}")
    if res.witness is not None and args.out:
        _write(format_matrix(res.witness), args.out)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hypergt", description=__doc__.splitlines()[0])
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a random hypergraph")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--lambda-bar", type=int, default=None,
                   help="cap on pairwise intersections (rejection sampler)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("metrics", help="structural metrics of a hypergraph")
    p.add_argument("--hypergraph", required=True)
    p.set_defaults(func=cmd_metrics)

    p = sub.add_parser("bounds", help="CSV of every bound the parameters allow")
    for name, typ in (("n", int), ("m", int), ("d", int), ("v", int), ("c", float),
                      ("lambda-bar", int), ("q", int), ("chi", int), ("s", int),
                      ("C1", float), ("C2", float)):
        p.add_argument(f"--{name}", type=typ, default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("build-code", help="random p-discard matrix for a hypergraph")
    p.add_argument("--hypergraph", required=True)
    p.add_argument("--p", type=int, default=1)
    p.add_argument("--d", type=int, default=None, help="edge size bound (default: max size)")
    p.add_argument("--delta", type=float, default=DEFAULT_DELTA)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--mode", choices=("certified", "probabilistic"), default="certified")
    p.add_argument("--out", default=None, help="matrix file (default stdout)")
    p.add_argument("--report", default=None, help="certification CSV (default stderr)")
    p.set_defaults(func=cmd_build_code)

    p = sub.add_parser("verify-code", help="check a matrix against a hypergraph")
    p.add_argument("--hypergraph", required=True)
    p.add_argument("--matrix", required=True)
    p.add_argument("--property", choices=("separable", "p-discard"), default="separable")
    p.add_argument("--p", type=int, default=1)
    p.set_defaults(func=cmd_verify_code)

    p = sub.add_parser("run", help="one simulated search")
    p.add_argument("--hypergraph", required=True)
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--estar", help="hidden edge as a vertex list, e.g. '1,4,7'")
    g.add_argument("--estar-index", type=int, help="hidden edge by 0-based canonical index")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--stages", type=int, default=1)
    g.add_argument("--schedule", default=None, help="explicit thresholds, e.g. '4,1'")
    p.add_argument("--delta", type=float, default=DEFAULT_DELTA)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--mode", choices=("certified", "probabilistic"), default="certified")
    p.add_argument("--trace", default=None, help="write the per-stage trace CSV here")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("sweep", help="run a JSON sweep configuration")
    p.add_argument("--config", required=True)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("min-length", help="exhaustive minimum separable length")
    p.add_argument("--hypergraph", required=True)
    p.add_argument("--t-max", type=int, default=4)
    p.add_argument("--cap", type=int, default=DEFAULT_CAP)
    p.add_argument("--out", default=None, help="write the witness matrix here")
    p.set_defaults(func=cmd_min_length)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    logging.getLogger(__name__).debug("kernel backend: %s", _kernels.BACKEND)
    try:
        args.func(args)
    except HyperGTError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
