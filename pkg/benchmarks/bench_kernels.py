"""Time the compiled kernels against the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Each case reports the best wall time per backend and the speed-up.
"""

import argparse
import timeit

from hypergt import _kernels
from hypergt.codes import construct_discard_matrix
from hypergt.hypergraph import gen_random_uniform


def cases():
    H = gen_random_uniform(64, 8, 400, seed=1)
    masks = list(H.masks)
    M, _ = construct_discard_matrix(H, 8, 2, 0.05, seed=1, mode="probabilistic")
    rows = list(M.rows)
    small = list(gen_random_uniform(6, 3, 8, seed=2).masks)
    return [
        ("first_discard_violation m=400 t=%d" % len(rows),
         lambda k: k.first_discard_violation(rows, masks, 2, H.n)),
        ("clean_masks m=400", lambda k: k.clean_masks(rows, masks, H.n)),
        ("response_masks m=400", lambda k: k.response_masks(rows, masks, H.n)),
        ("prune_keep m=400", lambda k: k.prune_keep(masks, 3, H.n)),
        ("pair_stats m=400", lambda k: k.pair_stats(masks, H.n)),
        ("separable_search n=6 m=8 t=4", lambda k: k.separable_search(small, 6, 4)),
    ]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    backends = _kernels.available_backends()
    if "cython" not in backends:
        print("compiled backend not built; only the Python fallback is available")
    print(f"{'case':40s}" + "".join(f"{name:>12s}" for name in backends) + "   speed-up")
    for name, fn in cases():
        times = {}
        for bname, mod in backends.items():
            fn(mod)  # warm up
            times[bname] = min(timeit.repeat(lambda: fn(mod), number=1, repeat=args.repeat))
        row = f"{name:40s}" + "".join(f"{times[b] * 1e3:10.2f}ms" for b in backends)
        if "cython" in times:
            row += f"   {times['python'] / times['cython']:8.1f}x"
        print(row)


if __name__ == "__main__":
    main()
