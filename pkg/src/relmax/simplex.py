"""Dense two-phase tableau simplex with Bland's rule.

Instances here are small (a few hundred columns), so a dense tableau is
simpler and fast enough.  After the last pivot the basic solution and the
duals are recomputed from the original data to shed accumulated round-off.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np


class LpStatus(enum.Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


@dataclass
class SimplexResult:
    status: LpStatus
    x: np.ndarray | None = None
    value: float = float("nan")
    duals: np.ndarray | None = None  # d value / d b_eq, one per equality row
    basis: tuple[int, ...] = ()
    pivots: int = 0


def _pivot(T: np.ndarray, r: int, j: int) -> None:
    T[r] /= T[r, j]
    col = T[:, j].copy()
    col[r] = 0.0
    T -= np.outer(col, T[r])


def _run(T: np.ndarray, basis: list[int], ncols: int, tol: float, max_pivots: int) -> tuple[str, int]:
    """Maximise the objective stored in the last row as ``-reduced costs``.

    Row ``-1`` holds ``z_j - c_j``; a column may enter when that is < -tol.
    Only the first ``ncols`` columns are eligible.
    """
    m = T.shape[0] - 1
    pivots = 0
    while True:
        obj = T[-1, :ncols]
        entering = np.flatnonzero(obj < -tol)
        if entering.size == 0:
            return "optimal", pivots
        j = int(entering[0])
        col = T[:m, j]
        rows = np.flatnonzero(col > tol)
        if rows.size == 0:
            return "unbounded", pivots
        ratios = T[rows, -1] / col[rows]
        best = ratios.min()
        ties = rows[ratios <= best + tol * max(1.0, abs(best))]
        r = int(min(ties, key=lambda i: basis[i]))
        _pivot(T, r, j)
        basis[r] = j
        pivots += 1
        if pivots > max_pivots:
            raise RuntimeError("simplex exceeded its pivot budget")


def simplex_max(
    c,
    A_eq,
    b_eq,
    tol: float = 1e-11,
    feas_tol: float = 1e-9,
    max_pivots: int = 100_000,
) -> SimplexResult:
    """Maximise ``c @ x`` subject to ``A_eq @ x = b_eq`` and ``x >= 0``."""
    c = np.asarray(c, dtype=np.float64)
    A = np.array(A_eq, dtype=np.float64, ndmin=2)
    b = np.array(b_eq, dtype=np.float64).reshape(-1)
    m, n = A.shape
    sign = np.where(b < 0, -1.0, 1.0)
    A_s = A * sign[:, None]
    b_s = b * sign

    # phase one: artificials n .. n+m-1 start in the basis
    T = np.zeros((m + 1, n + m + 1))
    T[:m, :n] = A_s
    T[:m, n:n + m] = np.eye(m)
    T[:m, -1] = b_s
    T[-1, :n] = -A_s.sum(axis=0)
    T[-1, -1] = -b_s.sum()
    basis = list(range(n, n + m))
    _, p1 = _run(T, basis, n, tol, max_pivots)
    if -T[-1, -1] > feas_tol * max(1.0, np.abs(b_s).max(initial=0.0)):
        return SimplexResult(LpStatus.INFEASIBLE, pivots=p1)

    # drive artificials out of the basis; drop rows that turn out redundant
    keep = []
    for r in range(m):
        if basis[r] >= n:
            cand = np.flatnonzero(np.abs(T[r, :n]) > 1e-9)
            if cand.size:
                _pivot(T, r, int(cand[0]))
                basis[r] = int(cand[0])
                keep.append(r)
        else:
            keep.append(r)
    rows = keep
    T2 = np.zeros((len(rows) + 1, n + 1))
    T2[:-1, :n] = T[rows, :n]
    T2[:-1, -1] = T[rows, -1]
    basis2 = [basis[r] for r in rows]
    # objective row: z_j - c_j with z = c_B B^-1 A
    cb = c[basis2]
    T2[-1, :n] = cb @ T2[:-1, :n] - c
    T2[-1, -1] = cb @ T2[:-1, -1]
    status, p2 = _run(T2, basis2, n, tol, max_pivots)
    if status == "unbounded":
        return SimplexResult(LpStatus.UNBOUNDED, pivots=p1 + p2)

    # clean recomputation from the original rows
    B = A_s[np.ix_(rows, basis2)]
    xb = np.linalg.solve(B, b_s[rows])
    x = np.zeros(n)
    x[basis2] = np.maximum(xb, 0.0)
    y_rows = np.linalg.solve(B.T, c[basis2])
    y = np.zeros(m)
    y[rows] = y_rows
    y *= sign
    return SimplexResult(LpStatus.OPTIMAL, x, float(c @ x), y, tuple(basis2), p1 + p2)


def linprog_min(c, A_ub=None, b_ub=None, A_eq=None, b_eq=None, bounds=None, **kw) -> SimplexResult:
    """Minimise ``c @ x`` with inequality rows and per-variable ``(lo, hi)`` bounds.

    ``None`` bounds mean unbounded on that side; the default is ``x >= 0``.
    The returned ``value`` is the minimum; ``duals`` are not translated.
    """
    c = np.asarray(c, dtype=np.float64)
    n = c.size
    bounds = bounds or [(0.0, None)] * n
    # x = lo + x'  (finite lo)   or   x = x+ - x-  (free)   or  x = hi - x' (only hi)
    cols = []  # (var, coefficient) per standard column
    shift = np.zeros(n)
    ub_rows = []
    for i, (lo, hi) in enumerate(bounds):
        if lo is not None:
            shift[i] = lo
            cols.append((i, 1.0))
            if hi is not None:
                ub_rows.append((len(cols) - 1, hi - lo))
        elif hi is not None:
            shift[i] = hi
            cols.append((i, -1.0))
        else:
            cols.append((i, 1.0))
            cols.append((i, -1.0))
    N = len(cols)
    M = np.zeros((n, N))
    for k, (i, s) in enumerate(cols):
        M[i, k] = s
    c_std = c @ M
    A_ub = np.zeros((0, n)) if A_ub is None else np.array(A_ub, dtype=np.float64, ndmin=2)
    b_ub = np.zeros(0) if b_ub is None else np.asarray(b_ub, dtype=np.float64)
    A_eq = np.zeros((0, n)) if A_eq is None else np.array(A_eq, dtype=np.float64, ndmin=2)
    b_eq = np.zeros(0) if b_eq is None else np.asarray(b_eq, dtype=np.float64)
    ub_A = A_ub @ M
    ub_b = b_ub - A_ub @ shift
    extra = np.zeros((len(ub_rows), N))
    extra_b = np.zeros(len(ub_rows))
    for r, (k, width) in enumerate(ub_rows):
        extra[r, k] = 1.0
        extra_b[r] = width
    ub_A = np.vstack([ub_A, extra])
    ub_b = np.concatenate([ub_b, extra_b])
    n_ub = ub_A.shape[0]
    eq_A = A_eq @ M
    eq_b = b_eq - A_eq @ shift
    full_A = np.zeros((n_ub + eq_A.shape[0], N + n_ub))
    full_A[:n_ub, :N] = ub_A
    full_A[:n_ub, N:] = np.eye(n_ub)
    full_A[n_ub:, :N] = eq_A
    full_b = np.concatenate([ub_b, eq_b])
    obj = np.concatenate([-c_std, np.zeros(n_ub)])
    res = simplex_max(obj, full_A, full_b, **kw)
    if res.status is not LpStatus.OPTIMAL:
        return res
    x = shift + M @ res.x[:N]
    return SimplexResult(LpStatus.OPTIMAL, x, float(c @ x), None, res.basis, res.pivots)
