# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels; see ``_kernels_py`` for the reference semantics."""
import numpy as np
cimport numpy as cnp
from libc.math cimport INFINITY, sqrt

cnp.import_array()

NAME = "cython"


def karp_table(Py_ssize_t n, const cnp.int64_t[:] src, const cnp.int64_t[:] dst, const double[:] w):
    cdef Py_ssize_t m = src.shape[0]
    D_arr = np.full((n + 1, n), -np.inf)
    pred_arr = np.full((n + 1, n), -1, dtype=np.int64)
    cdef double[:, :] D = D_arr
    cdef cnp.int64_t[:, :] pred = pred_arr
    cdef Py_ssize_t k, e, v
    cdef cnp.int64_t s, t
    cdef double cand
    for v in range(n):
        D[0, v] = 0.0
    for k in range(1, n + 1):
        for e in range(m):
            s = src[e]
            if D[k - 1, s] == -INFINITY:
                continue
            cand = D[k - 1, s] + w[e]
            t = dst[e]
            if cand > D[k, t]:
                D[k, t] = cand
                pred[k, t] = e
    return D_arr, pred_arr


def longest_walks(Py_ssize_t n, const cnp.int64_t[:] src, const cnp.int64_t[:] dst, const double[:] w,
                  Py_ssize_t source, Py_ssize_t rounds):
    cdef Py_ssize_t m = src.shape[0]
    dist_arr = np.full(n, -np.inf)
    new_arr = np.empty(n)
    cdef double[:] dist = dist_arr
    cdef double[:] new = new_arr
    cdef Py_ssize_t r, e, v
    cdef double cand
    dist[source] = 0.0
    for r in range(rounds):
        for v in range(n):
            new[v] = dist[v]
        for e in range(m):
            if dist[src[e]] == -INFINITY:
                continue
            cand = dist[src[e]] + w[e]
            if cand > new[dst[e]]:
                new[dst[e]] = cand
        for v in range(n):
            dist[v] = new[v]
    return dist_arr


def follow_predecessors(const cnp.int64_t[:] pred_edge, const cnp.int64_t[:] src, Py_ssize_t x0, Py_ssize_t steps):
    out_arr = np.empty(steps, dtype=np.int64)
    cdef cnp.int64_t[:] out = out_arr
    cdef Py_ssize_t j
    cdef cnp.int64_t x = x0, e
    for j in range(steps):
        e = pred_edge[x]
        out[j] = e
        x = src[e]
    return out_arr


def periodic_dp(Py_ssize_t start, Py_ssize_t K, Py_ssize_t n,
                const cnp.int64_t[:] src, const cnp.int64_t[:] dst, const double[:] w,
                const cnp.int64_t[:] d1, const cnp.int64_t[:] d2,
                Py_ssize_t B1, Py_ssize_t B2, bint store_pred):
    cdef Py_ssize_t T1 = 2 * B1 + 1, T2 = 2 * B2 + 1
    cdef Py_ssize_t T = T1 * T2
    cdef Py_ssize_t m = src.shape[0]
    closed_arr = np.full(K + 1, -np.inf)
    pred_shape = (K + 1, n * T) if store_pred else (<Py_ssize_t>0, <Py_ssize_t>0)
    pred_arr = np.full(pred_shape, -1, dtype=np.int32)
    cur_arr = np.full(n * T, -np.inf)
    new_arr = np.empty(n * T)
    cdef double[:] closed = closed_arr
    cdef int[:, :] pred = pred_arr
    cdef double[:] cur = cur_arr
    cdef double[:] new = new_arr
    cdef Py_ssize_t step, e, i1, i2, j1, j2, lo1, hi1, lo2, hi2, base_s, base_t, idx_s, idx_t, q
    cdef cnp.int64_t a1, a2
    cdef double we, cand
    cur[start * T + B1 * T2 + B2] = 0.0
    for step in range(1, K + 1):
        for q in range(n * T):
            new[q] = -INFINITY
        for e in range(m):
            a1 = d1[e]
            a2 = d2[e]
            lo1 = 0 if a1 >= 0 else -a1
            hi1 = T1 - a1 if a1 >= 0 else T1
            lo2 = 0 if a2 >= 0 else -a2
            hi2 = T2 - a2 if a2 >= 0 else T2
            if lo1 >= hi1 or lo2 >= hi2:
                continue
            base_s = src[e] * T
            base_t = dst[e] * T
            we = w[e]
            for i1 in range(lo1, hi1):
                j1 = i1 + a1
                for i2 in range(lo2, hi2):
                    idx_s = base_s + i1 * T2 + i2
                    if cur[idx_s] == -INFINITY:
                        continue
                    cand = cur[idx_s] + we
                    idx_t = base_t + j1 * T2 + i2 + a2
                    if cand > new[idx_t]:
                        new[idx_t] = cand
                        if store_pred:
                            pred[step, idx_t] = <int>e
        for q in range(n * T):
            cur[q] = new[q]
        closed[step] = cur[start * T + B1 * T2 + B2]
    return closed_arr, pred_arr


def min_return_deviation(const double[:, :] prefix, const cnp.int64_t[:] visits, Py_ssize_t n_samples, Py_ssize_t L_max):
    out_arr = np.full(n_samples, np.inf)
    cdef double[:] out = out_arr
    cdef Py_ssize_t nv = visits.shape[0], dim = prefix.shape[1]
    cdef Py_ssize_t i, j, c
    cdef cnp.int64_t t0, tj
    cdef double acc, d, best
    for i in range(n_samples):
        t0 = visits[i]
        best = INFINITY
        j = i + 1
        while j < nv:
            tj = visits[j]
            if tj - t0 > L_max:
                break
            acc = 0.0
            for c in range(dim):
                d = prefix[tj, c] - prefix[t0, c]
                acc = acc + d * d
            acc = sqrt(acc)
            if acc < best:
                best = acc
            j += 1
        out[i] = best
    return out_arr
