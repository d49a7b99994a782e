"""Compare the compiled and numpy modular-rank kernels.

Run ``python benchmarks/bench_rank.py``; add ``--quick`` for a short run.
Matrices are Koszul flattenings of matrix multiplication tensors (the
workload that dominates bound computations) plus dense random ones.
"""
from __future__ import annotations

import argparse
import statistics
import time

import numpy as np

from omegalab import _modrank_py, kernels
from omegalab.constructions import matmul_tensor
from omegalab.exact import _integer_rows, random_rational_matrix
from omegalab.tensor import koszul_flattening

try:
    from omegalab import _modrank as compiled
except ImportError:
    compiled = None

P = kernels.PRIMES[0]


def koszul_case(n, p):
    t = matmul_tensor(n, n, n)
    k = koszul_flattening(t, p, random_rational_matrix(2 * p + 1, n * n, 0, 5))
    a = np.zeros(k.shape, dtype=np.int64)
    for i, row in enumerate(_integer_rows(k)):
        for c, v in row.items():
            a[i, c] = v % P
    return f"koszul M<{n}> p={p} {k.rows}x{k.cols}", a


def random_case(size, seed=1):
    rng = np.random.default_rng(seed)
    return f"random {size}x{size}", rng.integers(0, P, size=(size, size), dtype=np.int64)


def best_of(fn, a, repeat):
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        r = fn(a, P)
        times.append(time.perf_counter() - start)
    return r, min(times), statistics.median(times)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--quick", action="store_true")
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)

    cases = [koszul_case(2, 1), koszul_case(3, 2), random_case(200)]
    if not args.quick:
        cases += [koszul_case(4, 3), random_case(500)]

    impls = [("numpy", _modrank_py.rank_mod_p)]
    if compiled is not None:
        impls.insert(0, ("cython", compiled.rank_mod_p))
    else:
        print("compiled kernel not built; timing the numpy fallback only")

    print(f"{'case':34} {'kernel':7} {'rank':>5} {'best ms':>9} {'median ms':>10}")
    for name, a in cases:
        ranks = {}
        base = None
        for label, fn in impls:
            r, best, med = best_of(fn, a, args.repeat)
            ranks[label] = r
            speed = "" if base is None else f"  x{best / base:.1f} slower" if best > base else ""
            base = best if base is None else base
            print(f"{name:34} {label:7} {r:5d} {best * 1e3:9.2f} {med * 1e3:10.2f}{speed}")
        if len(set(ranks.values())) != 1:
            raise SystemExit(f"kernel disagreement on {name}: {ranks}")


if __name__ == "__main__":
    main()
