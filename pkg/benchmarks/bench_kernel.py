#!/usr/bin/env python3
"""Compare the compiled permutation kernel against the pure-Python fallback.

Micro benchmarks run both implementations in-process; the end-to-end row
re-invokes this script in a subprocess with HCOV_PURE=1 so the whole stack
runs on the fallback.

Usage: python benchmarks/bench_kernel.py [--end-to-end-only]
"""

import os
import subprocess
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from hcov import _pure  # noqa: E402

try:
    from hcov import _speedups
except ImportError:
    _speedups = None


def timeit(fn, repeat=3):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def micro_rows():
    import random

    rng = random.Random(1)
    n = 56
    perms = []
    for _ in range(200):
        p = list(range(n))
        rng.shuffle(p)
        perms.append(tuple(p))

    def mul_loop(impl):
        def run():
            acc = perms[0]
            for _ in range(50):
                for p in perms:
                    acc = impl.perm_mul(acc, p)
            return acc

        return run

    from hcov.permgroup import alternating

    gens = alternating(7).generators

    def closure(impl):
        def run():
            assert len(impl.mulclose(gens)) == 2520

        return run

    rows = []
    for label, make in [("perm_mul x10k (deg 56)", mul_loop), ("mulclose A7 (2520 els)", closure)]:
        pure_t = timeit(make(_pure))
        if _speedups is not None:
            fast_t = timeit(make(_speedups))
            rows.append((label, pure_t, fast_t))
        else:
            rows.append((label, pure_t, None))
    return rows


def end_to_end():
    """One PSL(2,13) pair: cover build, harmonicity, canonical orientation,
    surface genus."""
    from hcov.kernel import BACKEND
    from hcov.maximal import build_maximal
    from hcov.oriented import theorem_44_check
    from hcov.permgroup import psl2, search_23_pairs

    G = psl2(13)
    tau, sigma = search_23_pairs(G, product_order=7).pairs[0]
    t0 = time.perf_counter()
    rep = theorem_44_check(build_maximal(G, tau, sigma))
    assert rep.holds
    return BACKEND, time.perf_counter() - t0


def main():
    if "--end-to-end-only" in sys.argv:
        backend, t = end_to_end()
        print(f"{backend} {t:.3f}")
        return

    print(f"{'benchmark':<28} {'pure':>9} {'cython':>9} {'speedup':>8}")
    for label, pure_t, fast_t in micro_rows():
        if fast_t is None:
            print(f"{label:<28} {pure_t:>8.3f}s {'n/a':>9} {'n/a':>8}")
        else:
            print(f"{label:<28} {pure_t:>8.3f}s {fast_t:>8.3f}s {pure_t / fast_t:>7.1f}x")

    backend, t = end_to_end()
    env = dict(os.environ, HCOV_PURE="1")
    out = subprocess.run(
        [sys.executable, __file__, "--end-to-end-only"],
        env=env,
        capture_output=True,
        text=True,
        check=True,
    ).stdout.split()
    pure_backend, pure_t = out[0], float(out[1])
    label = "PSL(2,13) cover + surface"
    if backend == "cython":
        print(f"{label:<28} {pure_t:>8.3f}s {t:>8.3f}s {pure_t / t:>7.1f}x")
    else:
        print(f"{label:<28} {pure_t:>8.3f}s {'n/a':>9} {'n/a':>8}")
        print("note: compiled kernel unavailable; both rows ran the fallback")
    assert pure_backend == "pure"


if __name__ == "__main__":
    main()
