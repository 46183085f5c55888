"""Compare the numba and numpy implementations of the two hot kernels.

    python3 benchmarks/bench_kernels.py [--repeat N]

Both implementations are called directly, so the TOTALREP_NO_NUMBA switch
does not matter here. Outputs are compared before timing.
"""
import argparse
import time

import numpy as np

from totalrep import kernels
from totalrep.enumeration import random_forest
from totalrep.hierarchy import pair_order


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t)
    return min(times)


def leq_cases(rng, sizes):
    for n in sizes:
        G = random_forest(rng, n, 3)
        F = random_forest(rng, 2 * n, 3)
        yield f"leq_tables |G|={n} |F|={2 * n}", (*G.arrays, *F.arrays)


def uniformize_cases(rng, batches):
    rows, width, pairs = 3, 4, 4
    order = pair_order(pairs, rows)
    pm = np.array([m for m, _ in order], dtype=np.int64)
    pn = np.array([n for _, n in order], dtype=np.int64)
    for b in batches:
        B = rng.integers(0, 1 << (rows * width), size=(b, pairs), dtype=np.int64)
        C = rng.integers(0, 1 << (rows * width), size=(b, pairs), dtype=np.int64)
        yield f"uniformize_batch batch={b}", (B, C, pm, pn, np.int64(width))


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)
    rng = np.random.default_rng(args.seed)

    kinds = [
        (kernels.leq_tables_numba, kernels.leq_tables_numpy, leq_cases(rng, (50, 200, 800))),
        (kernels.uniformize_batch_numba, kernels.uniformize_batch_numpy, uniformize_cases(rng, (10**4, 10**5, 10**6))),
    ]
    print(f"{'case':40} {'numba s':>10} {'numpy s':>10} {'speedup':>8}")
    for fast, slow, cases in kinds:
        for name, call in cases:
            a, b = fast(*call), slow(*call)  # also warms up the JIT
            same = all(np.array_equal(x, y) for x, y in zip(a, b)) if isinstance(a, tuple) else np.array_equal(a, b)
            if not same:
                raise SystemExit(f"{name}: implementations disagree")
            tf = best_of(lambda: fast(*call), args.repeat)
            ts = best_of(lambda: slow(*call), args.repeat)
            print(f"{name:40} {tf:10.5f} {ts:10.5f} {ts / tf:8.1f}x")


if __name__ == "__main__":
    main()
