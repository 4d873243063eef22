"""Compare the numba and numpy height kernels.

Run: python benchmarks/bench_kernels.py [--repeat N]

Inputs are random DAGs (optionally with a back edge closing a cycle) and the
reduction graphs of a few real terms.  Each backend's result is checked
against the other before timing.
"""

import argparse
import time

import numpy as np

from lamsn import _kernels
from lamsn.normalization import explore
from lamsn.reduction import ALL
from lamsn.terms import parse_term


def random_dag(n, avg_deg, rng, cycle=False):
    m = n * avg_deg
    a = rng.integers(0, n, m)
    b = rng.integers(0, n, m)
    keep = a != b
    src = np.minimum(a, b)[keep]
    dst = np.maximum(a, b)[keep]
    if cycle:
        src = np.append(src, n - 1)
        dst = np.append(dst, 0)
    return n, src.astype(np.int64), dst.astype(np.int64)


REAL_TERMS = [
    r"(\x.(x (x (x y))) \z.(z (z z)))",
    r"(\f.\g.(f (g (f (g y)))) \a.(a a) \b.(b b b))",
    r"(\x.(x x x) \y.(y y))",
]


def inputs(rng):
    yield "dag 1e3", random_dag(1_000, 3, rng)
    yield "dag 1e5", random_dag(100_000, 3, rng)
    yield "dag 1e6", random_dag(1_000_000, 3, rng)
    yield "cyclic 1e5", random_dag(100_000, 3, rng, cycle=True)
    for text in REAL_TERMS:
        g = explore(parse_term(text), ALL, 20_000)
        src, dst = g.edge_arrays()
        yield f"graph {g.n_nodes} nodes", (g.n_nodes, src, dst)


def best_of(fn, args, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    opts = ap.parse_args()
    if _kernels.BACKEND != "numba":
        print("numba unavailable or disabled (LAMSN_DISABLE_NUMBA); nothing to compare")
        return
    rng = np.random.default_rng(opts.seed)
    # compile outside the timed region
    _kernels.heights_numba(2, np.array([0]), np.array([1]))
    print(f"{'input':<22}{'edges':>10}{'numba ms':>12}{'numpy ms':>12}{'speedup':>10}")
    for name, args in inputs(rng):
        assert np.array_equal(_kernels.heights_numba(*args), _kernels.heights_numpy(*args)), name
        t_nb = best_of(_kernels.heights_numba, args, opts.repeat)
        t_np = best_of(_kernels.heights_numpy, args, opts.repeat)
        print(f"{name:<22}{len(args[1]):>10}{t_nb * 1e3:>12.3f}{t_np * 1e3:>12.3f}{t_np / t_nb:>9.1f}x")


if __name__ == "__main__":
    main()
