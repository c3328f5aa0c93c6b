"""Compare the compiled and numpy kernel backends.

    python benchmarks/bench_kernels.py [--repeat N]

Each workload runs on both backends, checks that the outputs agree, and
reports the best-of-N wall time.
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from ptresolve import _pykernels

try:
    from ptresolve import _ckernels
except ImportError:  # extension not built
    _ckernels = None

U64 = np.uint64


def workloads(rng: np.random.Generator):
    n = 14
    full = (1 << n) - 1
    inputs = np.arange(1 << n, dtype=U64)
    # an interior resolution through a 4096-point interpolant
    members = rng.integers(0, 1 << n, size=4096, dtype=U64)
    yield "fused demon->angel, 2^14 inputs x 4096", "fused_composite", (1, members, 0, members, inputs, full)
    yield "fused ortho->ortho, 2^14 inputs x 4096", "fused_composite", (2, members, 2, members, inputs, full)
    # monotone factorization through P(X) at |X| = 10
    subsets = np.arange(1 << 10, dtype=U64)
    images = rng.integers(0, 1 << 10, size=1 << 10, dtype=U64)
    yield "fused angel-demon factorization, |X|=10", "fused_composite", (
        1, subsets, 0, images, subsets, (1 << 10) - 1,
    )
    cols = rng.integers(0, 1 << 40, size=20, dtype=U64)
    yield "angel table, |Y|=20", "angel_table", (cols, 20)
    yield "demon table, |Y|=20", "demon_table", (cols, 20, (1 << 40) - 1)
    yield "ortho table, |Y|=20", "ortho_table", (cols, 20, (1 << 40) - 1)
    # a monotone table, so both backends scan every (U, x) pair
    table = np.arange(1 << 18, dtype=U64)
    yield "monotone scan, 2^18 entries", "monotone_violation", (table, 18)
    fix = np.unique(rng.integers(0, 1 << n, size=3000, dtype=U64))
    yield "strict joins, 3000 fixpoints", "strict_joins", (fix,)
    yield "strict meets, 3000 fixpoints", "strict_meets", (fix, full)


def best_of(fn, args, repeat: int) -> tuple[float, object]:
    best, out = float("inf"), None
    for _ in range(repeat):
        start = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - start)
    return best, out


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rng = np.random.default_rng(args.seed)
    print(f"{'workload':<42} {'numpy':>10} {'compiled':>10} {'speedup':>8}")
    for title, name, call in workloads(rng):
        t_py, out_py = best_of(getattr(_pykernels, name), call, args.repeat)
        if _ckernels is None:
            print(f"{title:<42} {t_py:>9.4f}s {'n/a':>10} {'':>8}")
            continue
        t_c, out_c = best_of(getattr(_ckernels, name), call, args.repeat)
        if not np.array_equal(np.asarray(out_py), np.asarray(out_c)):
            raise SystemExit(f"backends disagree on {title}")
        print(f"{title:<42} {t_py:>9.4f}s {t_c:>9.4f}s {t_py / t_c:>7.1f}x")


if __name__ == "__main__":
    main()
