"""Pure-Python/numpy kernels.  Same signatures and results as ``_kernels.pyx``.

Edge arrays are ``int64``/``float64`` numpy arrays.  Ties are always resolved
in favour of the lowest edge index, so both backends agree bit for bit.
"""
from __future__ import annotations

import math

import numpy as np

NAME = "python"


def karp_table(n: int, src: np.ndarray, dst: np.ndarray, w: np.ndarray):
    """Karp's table: ``D[k, v]`` = heaviest walk of exactly ``k`` edges ending at ``v``.

    ``pred[k, v]`` is the last edge of that walk (``-1`` when unreachable).
    Every walk may start anywhere, so ``D[0] = 0``.
    """
    m = src.shape[0]
    D = np.full((n + 1, n), -np.inf)
    pred = np.full((n + 1, n), -1, dtype=np.int64)
    D[0, :] = 0.0
    for k in range(1, n + 1):
        prev = D[k - 1]
        row = D[k]
        prow = pred[k]
        for e in range(m):
            s = src[e]
            if prev[s] == -np.inf:
                continue
            cand = prev[s] + w[e]
            t = dst[e]
            if cand > row[t]:
                row[t] = cand
                prow[t] = e
    return D, pred


def longest_walks(n: int, src: np.ndarray, dst: np.ndarray, w: np.ndarray, source: int, rounds: int):
    """Heaviest walk of at most ``rounds`` edges from ``source`` (Jacobi sweeps)."""
    dist = np.full(n, -np.inf)
    dist[source] = 0.0
    m = src.shape[0]
    for _ in range(rounds):
        new = dist.copy()
        for e in range(m):
            s = src[e]
            if dist[s] == -np.inf:
                continue
            cand = dist[s] + w[e]
            if cand > new[dst[e]]:
                new[dst[e]] = cand
        dist = new
    return dist


def follow_predecessors(pred_edge: np.ndarray, src: np.ndarray, x0: int, steps: int):
    """Edges e_1..e_steps of the backward orbit x_{j+1} = src[pred_edge[x_j]]."""
    out = np.empty(steps, dtype=np.int64)
    x = x0
    for j in range(steps):
        e = pred_edge[x]
        out[j] = e
        x = src[e]
    return out


def periodic_dp(
    start: int,
    K: int,
    n: int,
    src: np.ndarray,
    dst: np.ndarray,
    w: np.ndarray,
    d1: np.ndarray,
    d2: np.ndarray,
    B1: int,
    B2: int,
    store_pred: bool,
):
    """Heaviest closed walks at ``start`` with zero total offset, for each length.

    State: (vertex, t1, t2) with |t_i| <= B_i.  ``closed[M]`` is the best total
    weight of a closed walk of length M (``-inf`` if none).  With
    ``store_pred`` the returned ``pred[M, state]`` holds the last edge.
    """
    T1, T2 = 2 * B1 + 1, 2 * B2 + 1
    T = T1 * T2
    closed = np.full(K + 1, -np.inf)
    pred = np.full((K + 1, n * T) if store_pred else (0, 0), -1, dtype=np.int32)
    cur = np.full((n, T1, T2), -np.inf)
    cur[start, B1, B2] = 0.0
    m = src.shape[0]
    for step in range(1, K + 1):
        new = np.full((n, T1, T2), -np.inf)
        best_e = np.full((n, T1, T2), -1, dtype=np.int32) if store_pred else None
        for e in range(m):
            a1, a2 = int(d1[e]), int(d2[e])
            # source slice [lo, hi) maps to [lo + a, hi + a)
            lo1, hi1 = max(0, -a1), min(T1, T1 - a1)
            lo2, hi2 = max(0, -a2), min(T2, T2 - a2)
            if lo1 >= hi1 or lo2 >= hi2:
                continue
            s, t = src[e], dst[e]
            cand = cur[s, lo1:hi1, lo2:hi2] + w[e]
            target = new[t, lo1 + a1:hi1 + a1, lo2 + a2:hi2 + a2]
            better = cand > target
            if better.any():
                target[better] = cand[better]
                if store_pred:
                    best_e[t, lo1 + a1:hi1 + a1, lo2 + a2:hi2 + a2][better] = e
        cur = new
        closed[step] = cur[start, B1, B2]
        if store_pred:
            pred[step] = best_e.reshape(-1)
    return closed, pred


def min_return_deviation(prefix: np.ndarray, visits: np.ndarray, n_samples: int, L_max: int):
    """For each of the first ``n_samples`` visits, min norm of the offset at a later visit.

    ``prefix[t]`` is the accumulated (already centred) offset before time t.
    Only returns with ``0 < L <= L_max`` count; ``inf`` when there is none.
    """
    out = np.full(n_samples, np.inf)
    nv = visits.shape[0]
    for i in range(n_samples):
        t0 = visits[i]
        j_end = np.searchsorted(visits, t0 + L_max, side="right")
        if j_end <= i + 1:
            continue
        later = visits[i + 1:j_end]
        diff = prefix[later] - prefix[t0]
        out[i] = float(np.min(np.sqrt(np.sum(diff * diff, axis=1))))
    return out
