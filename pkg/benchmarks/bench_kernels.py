"""Time the compiled kernels against the NumPy fallback.

Run with ``python3 benchmarks/bench_kernels.py [--n 4] [--repeat 5]``. Each
kernel is called on the same random inputs through both backends; the
script checks that the results agree before timing them.
"""

import argparse
import timeit

import numpy as np

from maglab.kernels import BACKENDS


def _inputs(n, rng):
    g = rng.normal(size=(n, n))
    ginv = g @ g.T + n * np.eye(n)
    dg = rng.normal(size=(n, n, n))
    dg = 0.5 * (dg + dg.transpose(1, 0, 2))
    gamma = rng.normal(size=(n, n, n))
    dgamma = rng.normal(size=(n, n, n, n))
    u, w, x = rng.normal(size=(3, n))
    m = n * n
    c0 = rng.normal(size=m)
    c1 = rng.normal(size=(m, n))
    c2 = rng.normal(size=(m, n, n))
    c2 = 0.5 * (c2 + c2.transpose(0, 2, 1))
    c3 = rng.normal(size=(m, n, n, n))
    c3 = sum(c3.transpose(0, *p) for p in [(1, 2, 3), (1, 3, 2), (2, 1, 3), (2, 3, 1), (3, 1, 2), (3, 2, 1)]) / 6
    return {
        "christoffel": (ginv, dg),
        "riemann": (gamma, dgamma),
        "quadratic": (gamma, u, w),
        "poly_value": (c0, c1, c2, c3, x),
        "poly_grad": (c0, c1, c2, c3, x),
        "poly_hess": (c0, c1, c2, c3, x),
    }


def run(n=4, number=2000, repeat=5, seed=0):
    """Return rows (kernel, {backend: microseconds per call}, max abs difference)."""
    rng = np.random.default_rng(seed)
    inputs = {k: tuple(np.ascontiguousarray(a) for a in v) for k, v in _inputs(n, rng).items()}
    rows = []
    for name, args in inputs.items():
        results = {b: getattr(mod, name)(*args) for b, mod in BACKENDS.items()}
        ref = results["python"]
        diff = max(float(np.max(np.abs(r - ref))) for r in results.values())
        times = {}
        for b, mod in BACKENDS.items():
            fn = getattr(mod, name)
            best = min(timeit.repeat(lambda: fn(*args), number=number, repeat=repeat))
            times[b] = 1e6 * best / number
        rows.append((name, times, diff))
    return rows


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--n", type=int, default=4, help="dimension (default 4)")
    parser.add_argument("--number", type=int, default=2000)
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args(argv)
    backends = list(BACKENDS)
    print(f"n = {args.n}; microseconds per call (best of {args.repeat})")
    print(f"{'kernel':<12}" + "".join(f"{b:>10}" for b in backends) + f"{'speedup':>10}{'max diff':>11}")
    for name, times, diff in run(args.n, args.number, args.repeat):
        speed = times["python"] / times["cython"] if "cython" in times else float("nan")
        print(f"{name:<12}" + "".join(f"{times[b]:>10.2f}" for b in backends) + f"{speed:>10.1f}{diff:>11.1e}")
    if "cython" not in BACKENDS:
        print("compiled backend not built; only the fallback was timed")


if __name__ == "__main__":
    main()
