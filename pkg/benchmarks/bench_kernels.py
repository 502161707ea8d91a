"""Time the compiled kernels against the pure-Python fallback.

    python benchmarks/bench_kernels.py [--repeat 3]

Each kernel is run on the same seeded inputs by both backends; results are
checked for agreement before timings are printed.
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from relmax._backend import available
from relmax.instances import random_problem


def _graph(seed: int, max_edges: int):
    rng = np.random.default_rng(seed)
    return random_problem(rng, max_alphabet=4, max_depth=2, max_edges=max_edges, sparse=False)[1]


def cases():
    g = _graph(1, 60)
    n = g.n_vertices
    rng = np.random.default_rng(7)
    w = rng.uniform(-1, 1, g.n_edges)
    pred_edge = np.array([int(g.in_edges[v][0]) for v in range(n)], dtype=np.int64)
    delta = g.phi_num[:, 0] * 2 - g.Q  # offsets for r = 1/2 over denominator 2Q
    half = 20 * int(np.abs(delta).max())
    T = 200_000
    steps = (rng.random(T) < 0.5).astype(np.float64)
    prefix = np.zeros((T + 1, 1))
    prefix[1:, 0] = np.cumsum(steps - 0.5)
    visits = np.flatnonzero(steps > 0).astype(np.int64)
    zero = np.zeros(g.n_edges, dtype=np.int64)
    return {
        "karp_table": lambda k: k.karp_table(n, g.src, g.dst, w),
        "longest_walks": lambda k: k.longest_walks(n, g.src, g.dst, w - w.max(), 0, n),
        "follow_predecessors": lambda k: k.follow_predecessors(pred_edge, g.src, 0, 200_000),
        "periodic_dp": lambda k: k.periodic_dp(0, 40, n, g.src, g.dst, g.a, delta, zero, half, 0, False),
        "min_return_deviation": lambda k: k.min_return_deviation(prefix, visits, 300, 2000),
    }


def _same(x, y) -> bool:
    if isinstance(x, tuple):
        return all(_same(a, b) for a, b in zip(x, y))
    return np.array_equal(np.asarray(x), np.asarray(y))


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    backends = available()
    if "cython" not in backends:
        print("compiled kernels not built; only the Python fallback is available")
    print(f"{'kernel':<22}" + "".join(f"{name:>14}" for name in backends) + f"{'speedup':>10}")
    for name, fn in cases().items():
        times = {}
        outs = {}
        for bname, mod in backends.items():
            best = float("inf")
            for _ in range(args.repeat):
                t0 = time.perf_counter()
                outs[bname] = fn(mod)
                best = min(best, time.perf_counter() - t0)
            times[bname] = best
        if len(outs) == 2 and not _same(outs["python"], outs["cython"]):
            raise SystemExit(f"{name}: backends disagree")
        speed = times["python"] / times["cython"] if "cython" in times else float("nan")
        print(f"{name:<22}" + "".join(f"{times[b] * 1e3:>12.2f}ms" for b in backends) + f"{speed:>9.1f}x")


if __name__ == "__main__":
    main()
