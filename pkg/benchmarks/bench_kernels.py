"""Compare the compiled F_p kernels with the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--degree 64] [--p 3] [--reps 200]
"""

import argparse
import random
import timeit

from ramapprox import _kernels_py as py

try:
    from ramapprox import _kernels as cy
except ImportError:  # pragma: no cover
    cy = None


def _rand(rng, n, p):
    a = [rng.randrange(p) for _ in range(n)]
    a.append(rng.randrange(1, p))
    return a


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--degree", type=int, default=64)
    ap.add_argument("--p", type=int, default=3)
    ap.add_argument("--reps", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    ns = ap.parse_args(argv)
    rng = random.Random(ns.seed)
    p, n = ns.p, ns.degree
    a, b, m = _rand(rng, n, p), _rand(rng, n // 2, p), _rand(rng, n, p)
    cases = {
        "gf_mul": lambda k: k.gf_mul(a, b, p),
        "gf_divmod": lambda k: k.gf_divmod(a, b, p),
        "gf_gcd": lambda k: k.gf_gcd(a, m, p),
        "gf_mulmod": lambda k: k.gf_mulmod(a, m, b, p),
    }
    print(f"p={p} degree={n} reps={ns.reps}")
    print(f"{'kernel':<10} {'python (ms)':>12} {'cython (ms)':>12} {'speedup':>8}")
    for name, fn in cases.items():
        tp = timeit.timeit(lambda: fn(py), number=ns.reps) * 1e3 / ns.reps
        if cy is None:
            print(f"{name:<10} {tp:12.4f} {'-':>12} {'-':>8}")
            continue
        if fn(py) != fn(cy):
            raise SystemExit(f"{name}: backends disagree")
        tc = timeit.timeit(lambda: fn(cy), number=ns.reps) * 1e3 / ns.reps
        print(f"{name:<10} {tp:12.4f} {tc:12.4f} {tp / tc:8.1f}x")


if __name__ == "__main__":
    main()
