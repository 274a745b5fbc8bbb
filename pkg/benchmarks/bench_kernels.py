"""Compare the compiled and pure-Python elimination kernels.

    python benchmarks/bench_kernels.py [--sizes 20 40 80] [--repeat 3]

Matrices are random with a fixed seed; both backends must return identical
results before timings are reported.
"""

from __future__ import annotations

import argparse
import random
import timeit

from coxblow.field import GF, QQ
from coxblow.graded import invariant_basis
from coxblow.linalg import available_backends, rref
from coxblow.model import PicClass, build_m0n


def random_rows(rng: random.Random, n: int, density: float, bound: int) -> list[list[int]]:
    return [[rng.randint(-bound, bound) if rng.random() < density else 0 for _ in range(n + n // 4)]
            for _ in range(n)]


def bench(label, fn, backends, repeat):
    results = {name: fn(k) for name, k in backends.items()}
    first = next(iter(results.values()))
    if any(r != first for r in results.values()):
        raise SystemExit(f"{label}: backends disagree")
    times = {name: min(timeit.repeat(lambda k=k: fn(k), number=1, repeat=repeat)) for name, k in backends.items()}
    cols = "  ".join(f"{name} {t * 1e3:9.2f} ms" for name, t in times.items())
    speedup = ""
    if "cython" in times and "python" in times:
        speedup = f"  speedup x{times['python'] / times['cython']:.1f}"
    print(f"{label:<28}{cols}{speedup}")


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[20, 40, 80])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=20240501)
    args = ap.parse_args(argv)

    backends = available_backends()
    print(f"backends: {', '.join(sorted(backends))}")
    rng = random.Random(args.seed)
    for n in args.sizes:
        rows = random_rows(rng, n, 0.3, 9)
        ncols = len(rows[0])
        bench(f"rref Q      {n}x{ncols}", lambda k: rref(rows, ncols, QQ, k), backends, args.repeat)
        bench(f"rref F_32003 {n}x{ncols}", lambda k: rref(rows, ncols, GF(32003), k), backends, args.repeat)

    # a realistic system: invariants of 2H on M_0,7
    M = build_m0n(7)
    d = PicClass.hyperplane(M.E) * 2
    import coxblow.linalg as linalg

    def piece_job(k):
        saved = linalg._kernels
        linalg._kernels = k
        try:
            return invariant_basis(M, d).vectors
        finally:
            linalg._kernels = saved

    bench("invariants 2H, n=7", piece_job, backends, args.repeat)


if __name__ == "__main__":
    main()
