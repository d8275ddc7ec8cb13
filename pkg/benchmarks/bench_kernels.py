"""Compare the numba and numpy kernel paths on exhaustive subset scans.

    python benchmarks/bench_kernels.py --sizes 8 10 12 14 --repeat 3
"""
import argparse
import time

import numpy as np

from hadtowers import _kernels
from hadtowers.supports import IndexedTarget
from hadtowers.towers import random_tower, target


def tower_with_target(n, seed=0):
    k = 0
    while True:
        p = random_tower(5, 6, 3, seed * 1000 + k, density=0.3)
        if len(target(p)) == n:
            return p
        k += 1


def run(backend, single, repeat):
    sc = getattr(_kernels, f"subset_closures_{backend}")
    irf = getattr(_kernels, f"irreducible_flags_{backend}")
    ov = getattr(_kernels, f"order_violations_{backend}")
    n = single.shape[0]
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        closures = sc(single)
        flags = irf(closures, n)
        irr = np.nonzero(flags)[0]
        ov(irr.astype(np.uint64), closures[irr], np.arange(irr.shape[0], dtype=np.int64))
        best = min(best, time.perf_counter() - t0)
    return best, int(irr.shape[0])


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[8, 10, 12, 14])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    backends = ["np"] + (["nb"] if _kernels.numba is not None else [])
    if "nb" in backends:
        warm = IndexedTarget(tower_with_target(4)).single
        run("nb", warm, 1)
    print(f"{'n':>3} {'irreducibles':>12} " + " ".join(f"{b + ' (ms)':>10}" for b in backends) + ("   speedup" if len(backends) > 1 else ""))
    for n in args.sizes:
        single = IndexedTarget(tower_with_target(n)).single
        times = {}
        for b in backends:
            times[b], count = run(b, single, args.repeat)
        row = f"{n:>3} {count:>12} " + " ".join(f"{times[b] * 1e3:>10.2f}" for b in backends)
        if len(backends) > 1:
            row += f"   {times['np'] / times['nb']:>6.1f}x"
        print(row)


if __name__ == "__main__":
    main()
