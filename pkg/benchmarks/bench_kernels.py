"""Compare the numba and numpy kernel backends.

Usage: python3 benchmarks/bench_kernels.py [--repeat 5]

Times each kernel on representative inputs and one end-to-end verification,
after a warm-up call so numba compilation is excluded.
"""
import argparse
import time

import numpy as np

from perideno import kernels
from perideno.verify import Strategy, verify_thick, verify_thin_chain


def _inputs(seed=0):
    rng = np.random.default_rng(seed)
    perms = rng.integers(-6, 7, size=(200_000, 6)).astype(np.int64)
    n = 5
    starts = rng.integers(-3, 4, size=(120, n)).astype(np.int64)
    gammas = np.array([[1, -1, 0, 0, 0], [0, 1, -1, 0, 0], [0, 0, 1, -1, 0], [0, 0, 0, 1, -1], [1, 1, 0, 0, 0]],
                      dtype=np.int64)
    degs = np.tile(np.array([1, 1, 1, 1, 3]), (len(starts), 1)).astype(np.int64)
    budgets = np.full(len(starts), 9, dtype=np.int64)
    flips = np.array([0, 0, 0, 0, 1], dtype=np.int64)
    ea = rng.integers(-4, 5, size=(1500, 4)).astype(np.int64)
    eb = rng.integers(-4, 5, size=(1500, 4)).astype(np.int64)
    ca = rng.integers(-3, 4, size=1500).astype(np.int64)
    cb = rng.integers(-3, 4, size=1500).astype(np.int64)
    return {
        "sort_sign": (kernels.sort_sign, (perms,)),
        "geometric_lattice": (kernels.geometric_lattice, (starts, budgets, gammas, degs, flips)),
        "convolve+merge": (
            lambda *a: kernels.merge_rows(*kernels.convolve(*a)),
            (ea, ca, -ea.sum(1), eb, cb, -eb.sum(1), 4),
        ),
        "verify thin-chain n=5 D=8": (lambda: verify_thin_chain(5, Strategy.series(cutoff=8)), ()),
        "verify thick n=5 D=8": (lambda: verify_thick(5, Strategy.series(cutoff=8)), ()),
    }


def best_of(fn, args, repeat):
    fn(*args)  # warm-up (JIT compile for numba)
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    backends = kernels.available_backends()
    cases = _inputs()
    print(f"{'case':32s}" + "".join(f"{b:>12s}" for b in backends) + ("     speedup" if len(backends) > 1 else ""))
    for name, (fn, fargs) in cases.items():
        row = {}
        for b in backends:
            prev = kernels.use_backend(b)
            try:
                row[b] = best_of(fn, fargs, args.repeat)
            finally:
                kernels.use_backend(prev)
        line = f"{name:32s}" + "".join(f"{row[b] * 1e3:10.2f}ms" for b in backends)
        if len(backends) > 1:
            line += f"{row['numpy'] / row['numba']:11.1f}x"
        print(line)


if __name__ == "__main__":
    main()
