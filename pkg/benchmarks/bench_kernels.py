"""Time the compiled kernels against the pure Python versions.

Run with: python3 benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import random
import timeit

from shalika_padic import _kernels_py

try:
    from shalika_padic import _kernels as compiled
except ImportError:
    compiled = None


def workloads(seed=0):
    rng = random.Random(seed)
    mod = 11 ** 12
    w = 10
    phi = [rng.randrange(mod) for _ in range(w + 1)]
    mats = [tuple(rng.randint(-200, 200) for _ in range(4)) for _ in range(200)]
    values = [rng.randrange(mod) for _ in range(14520)]
    index = [i % 1320 for i in range(14520)]
    exps = [rng.randrange(1331) for _ in range(14520)]
    return {
        "pullback_functional (200 matrices, weight 12)":
            lambda k: [k.pullback_functional(*g, phi, w, mod) for g in mats],
        "fiber_sum (14520 -> 1320 bins)":
            lambda k: k.fiber_sum(values, index, 1320, mod),
        "binomial_transport (14520 terms, T^9)":
            lambda k: k.binomial_transport(values, exps, 9, mod),
    }


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if compiled is None:
        print("compiled extension not available; only the Python timings are shown")
    print(f"{'kernel':50s} {'python ms':>10s} {'cython ms':>10s} {'speedup':>8s}")
    for name, fn in workloads().items():
        py = min(timeit.repeat(lambda: fn(_kernels_py), number=1, repeat=args.repeat)) * 1e3
        if compiled is None:
            print(f"{name:50s} {py:10.2f} {'-':>10s} {'-':>8s}")
            continue
        assert fn(compiled) == fn(_kernels_py), f"backends disagree on {name}"
        cy = min(timeit.repeat(lambda: fn(compiled), number=1, repeat=args.repeat)) * 1e3
        print(f"{name:50s} {py:10.2f} {cy:10.2f} {py / cy:8.1f}x")


if __name__ == "__main__":
    main()
