"""
Time the prime-field kernels through the numba loop path and the numpy path.

    python3 benchmarks/bench_kernels.py --sizes 50 100 200 --repeat 5

With ORBITCLOSURE_DISABLE_JIT=1 the "jit" column runs the same loops as
plain Python, which shows what the compiler buys.
"""

import argparse
import time

import numpy as np

from orbitclosure import kernels
from orbitclosure._jit import JIT_ENABLED
from orbitclosure.poly import monomials_up_to

P = 1000003


def best_of(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_rref(n, repeat, rng):
    a = rng.integers(0, P, size=(n, n + n // 2), dtype=np.int64)
    a[n // 2:] = (a[: n - n // 2] * 3) % P  # force a rank deficit
    kernels.rref_modp(a[:4, :4], P, use_jit=True)  # warm-up compile
    r1, e1, _ = kernels.rref_modp(a, P, use_jit=True)
    r2, e2, _ = kernels.rref_modp(a, P, use_jit=False)
    assert r1 == r2 and np.array_equal(e1, e2), "kernel paths disagree"
    tj = best_of(lambda: kernels.rref_modp(a, P, use_jit=True), repeat)
    tn = best_of(lambda: kernels.rref_modp(a, P, use_jit=False), repeat)
    return tj, tn


def bench_eval(npts, nvars, d, repeat, rng):
    pts = rng.integers(0, P, size=(npts, nvars), dtype=np.int64)
    exps = np.array(monomials_up_to(nvars, d), dtype=np.int64)
    kernels.eval_monomials_modp(pts[:2], exps, P, use_jit=True)
    assert np.array_equal(kernels.eval_monomials_modp(pts, exps, P, use_jit=True),
                          kernels.eval_monomials_modp(pts, exps, P, use_jit=False))
    tj = best_of(lambda: kernels.eval_monomials_modp(pts, exps, P, use_jit=True), repeat)
    tn = best_of(lambda: kernels.eval_monomials_modp(pts, exps, P, use_jit=False), repeat)
    return tj, tn


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n\n")[0].strip())
    ap.add_argument("--sizes", type=int, nargs="+", default=[50, 100, 200])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rng = np.random.default_rng(args.seed)

    print(f"numba compiled: {JIT_ENABLED}, p = {P}")
    print(f"{'kernel':<22}{'size':>8}{'jit ms':>12}{'numpy ms':>12}{'ratio':>9}")
    for n in args.sizes:
        tj, tn = bench_rref(n, args.repeat, rng)
        print(f"{'rref_modp':<22}{n:>8}{tj * 1e3:>12.2f}{tn * 1e3:>12.2f}{tn / tj:>9.1f}")
    for n in args.sizes:
        tj, tn = bench_eval(n * 10, 3, 4, args.repeat, rng)
        print(f"{'eval_monomials_modp':<22}{n * 10:>8}{tj * 1e3:>12.2f}{tn * 1e3:>12.2f}{tn / tj:>9.1f}")


if __name__ == "__main__":
    main()
