"""Exact search for periodic orbits with a prescribed rational rotation vector.

A closed walk of length M has rotation vector r exactly when the integer
offset ``D * S_M(phi) - M * D * r`` vanishes, ``D`` being a common
denominator of the constraint values and of r.  A dynamic program over
(vertex, offset) layers, one layer per length, finds the heaviest such walk.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import networkx as nx
import numpy as np

from ._backend import kernels
from .beta_alpha import (
    InfeasibleError,
    _hull_exact,
    alpha_witness,
    beta,
    is_cohomologous_to_constant,
    rotation_interval,
    rotation_set,
)
from .cycles import CapExceeded, Cycle, enumerate_simple_cycles, max_mean_cycle
from .sft import WeightedDigraph, format_rational, format_word, parse_rational

DEFAULT_STATE_CAP = 10**8
TIE_TOL = 1e-12


class PeriodicStatus(enum.Enum):
    FOUND = "Found"
    NOT_FOUND = "NotFoundUpToK"
    INFEASIBLE = "InfeasibleR"
    CAP_EXCEEDED = "CapExceeded"


class DegenerateRotationSet(ValueError):
    pass


@dataclass(frozen=True)
class PeriodicQuery:
    r: tuple[Fraction, ...]
    K: int
    state_cap: int = DEFAULT_STATE_CAP

    def __post_init__(self) -> None:
        if self.K < 1:
            raise ValueError("K must be at least 1")
        object.__setattr__(self, "r", tuple(parse_rational(x) for x in self.r))

    @property
    def q(self) -> int:
        return math.lcm(1, *(x.denominator for x in self.r))


@dataclass(frozen=True)
class PeriodicResult:
    status: PeriodicStatus
    best_value: float | None = None
    orbit: Cycle | None = None
    by_period: tuple[float | None, ...] = ()
    state_bound: int = 0

    @property
    def found(self) -> bool:
        return self.status is PeriodicStatus.FOUND

    def to_json(self, graph: WeightedDigraph) -> dict:
        doc: dict = {"status": self.status.value, "state_bound": self.state_bound}
        if self.found:
            doc["best_value"] = self.best_value
            doc["orbit"] = self.orbit.to_json(graph)
        doc["by_period"] = [
            {"period": m, "value": v} for m, v in enumerate(self.by_period, start=1) if v is not None
        ]
        return doc


def _contains_exact(graph: WeightedDigraph, r: tuple[Fraction, ...]) -> bool | None:
    """Exact membership of r in the rotation set; None when undecidable within caps."""
    if graph.dim == 1:
        lo, hi = rotation_interval(graph)
        return lo <= r[0] <= hi
    try:
        cycles = enumerate_simple_cycles(graph)
    except CapExceeded:
        return None
    hull = _hull_exact([c.rotation_vector for c in cycles])
    if len(hull) == 1:
        return hull[0] == r
    if len(hull) == 2:
        a, b = hull
        cross = (b[0] - a[0]) * (r[1] - a[1]) - (b[1] - a[1]) * (r[0] - a[0])
        within = min(a[0], b[0]) <= r[0] <= max(a[0], b[0]) and min(a[1], b[1]) <= r[1] <= max(a[1], b[1])
        return cross == 0 and within
    for i in range(len(hull)):
        a, b = hull[i], hull[(i + 1) % len(hull)]
        if (b[0] - a[0]) * (r[1] - a[1]) - (b[1] - a[1]) * (r[0] - a[0]) < 0:
            return False
    return True


def _feasible(graph: WeightedDigraph, r: tuple[Fraction, ...]) -> bool:
    inside = _contains_exact(graph, r)
    if inside is not None:
        return inside
    # too many cycles to enumerate: reject only on a certified separating direction
    rs = rotation_set(graph, mode="sampled")
    return rs.contains([float(x) for x in r], tol=1e-12)


def _offsets(graph: WeightedDigraph, r: tuple[Fraction, ...]) -> tuple[int, np.ndarray]:
    D = math.lcm(graph.Q, *(x.denominator for x in r))
    target = np.array([int(x * D) for x in r], dtype=np.int64)
    delta = graph.phi_num * (D // graph.Q) - target[None, :]
    return D, delta


def state_bound(graph: WeightedDigraph, r: Sequence, K: int) -> tuple[int, tuple[int, ...]]:
    """Dense DP size for a query and the per-coordinate offset half-widths.

    A closed walk with zero total offset has partial offsets bounded by
    ``floor(M/2) * max|delta_i|``, so half-widths ``ceil(K/2) * max|delta_i|``
    lose nothing.
    """
    r = tuple(parse_rational(x) for x in r)
    _, delta = _offsets(graph, r)
    half = tuple(int(math.ceil(K / 2) * int(np.abs(delta[:, i]).max())) for i in range(graph.dim))
    width = 1
    for b in half:
        width *= 2 * b + 1
    return graph.n_vertices * width * (K + 1), half


def _edge_subset(graph: WeightedDigraph, start: int) -> np.ndarray:
    return np.flatnonzero((graph.src >= start) & (graph.dst >= start))


def _run_dp(graph, start, K, delta, half, store_pred):
    sub = _edge_subset(graph, start)
    d1 = np.ascontiguousarray(delta[sub, 0])
    d2 = np.ascontiguousarray(delta[sub, 1]) if graph.dim == 2 else np.zeros(sub.size, dtype=np.int64)
    B1 = half[0]
    B2 = half[1] if graph.dim == 2 else 0
    closed, pred = kernels.periodic_dp(
        int(start), int(K), graph.n_vertices,
        np.ascontiguousarray(graph.src[sub]), np.ascontiguousarray(graph.dst[sub]),
        np.ascontiguousarray(graph.a[sub]), d1, d2, int(B1), int(B2), bool(store_pred),
    )
    return sub, d1, d2, B1, B2, closed, pred


def _reconstruct(graph, start, M, sub, d1, d2, B1, B2, pred) -> list[int]:
    T1, T2 = 2 * B1 + 1, 2 * B2 + 1
    v, t1, t2 = start, B1, B2
    edges = []
    for step in range(M, 0, -1):
        k = int(pred[step, (v * T1 + t1) * T2 + t2])
        if k < 0:
            raise RuntimeError("broken predecessor chain")
        edges.append(int(sub[k]))
        v = int(graph.src[sub[k]])
        t1 -= int(d1[k])
        t2 -= int(d2[k])
    if (v, t1, t2) != (start, B1, B2):
        raise RuntimeError("predecessor chain does not close")
    edges.reverse()
    return edges


def best_periodic_with_rotation(
    graph: WeightedDigraph, r, K: int, state_cap: int = DEFAULT_STATE_CAP
) -> PeriodicResult:
    """Heaviest (by mean potential) periodic orbit of period <= K with rotation vector exactly ``r``.

    Ties go to the smaller period, then the lexicographically smaller word.
    Dimension 3 and above is refused with status CapExceeded.
    """
    query = PeriodicQuery(tuple(r) if isinstance(r, (list, tuple)) else (r,), K, state_cap)
    r = query.r
    if len(r) != graph.dim:
        raise ValueError(f"target has {len(r)} coordinates, constraint has {graph.dim}")
    if graph.dim == 0:
        raise ValueError("graph carries no constraint")
    if graph.dim > 2:
        return PeriodicResult(PeriodicStatus.CAP_EXCEEDED, state_bound=-1)
    if not _feasible(graph, r):
        return PeriodicResult(PeriodicStatus.INFEASIBLE)
    bound, half = state_bound(graph, r, K)
    if bound > state_cap:
        return PeriodicResult(PeriodicStatus.CAP_EXCEEDED, state_bound=bound)
    _, delta = _offsets(graph, r)

    by_period: list[float | None] = [None] * K
    per_start: dict[int, np.ndarray] = {}
    for s in range(graph.n_vertices):
        closed = _run_dp(graph, s, K, delta, half, False)[5]
        per_start[s] = closed
        for M in range(1, K + 1):
            if closed[M] > -math.inf:
                mean = float(closed[M]) / M
                if by_period[M - 1] is None or mean > by_period[M - 1]:
                    by_period[M - 1] = mean
    values = [v for v in by_period if v is not None]
    if not values:
        return PeriodicResult(PeriodicStatus.NOT_FOUND, by_period=tuple(by_period), state_bound=bound)
    best = max(values)
    tol = TIE_TOL * max(1.0, abs(best))
    M = next(m for m, v in enumerate(by_period, start=1) if v is not None and v >= best - tol)
    candidates = []
    for s, closed in per_start.items():
        if closed[M] > -math.inf and float(closed[M]) / M >= best - tol:
            sub, d1, d2, B1, B2, _, pred = _run_dp(graph, s, M, delta, half, True)
            edges = _reconstruct(graph, s, M, sub, d1, d2, B1, B2, pred)
            candidates.append(Cycle.from_edges(graph, edges))
    orbit = min(candidates, key=lambda c: c.word(graph))
    if orbit.rotation_vector != r:  # the offset bookkeeping is exact; this would be a bug
        raise AssertionError("reconstructed orbit misses the target rotation vector")
    return PeriodicResult(PeriodicStatus.FOUND, orbit.mean_potential, orbit, tuple(by_period), bound)


@dataclass(frozen=True)
class BetaGap:
    beta: float
    gaps: tuple[float, ...]  # gaps[K'-1] = beta(r) - best mean over periods <= K'
    result: PeriodicResult

    def first_below(self, threshold: float) -> int | None:
        for k, g in enumerate(self.gaps, start=1):
            if g <= threshold:
                return k
        return None


def periodic_beta_gap(graph: WeightedDigraph, r, K: int, state_cap: int = DEFAULT_STATE_CAP) -> BetaGap:
    """``beta(r)`` minus the best periodic value found with period at most K', for K' = 1..K."""
    res = best_periodic_with_rotation(graph, r, K, state_cap)
    if res.status is PeriodicStatus.INFEASIBLE:
        raise InfeasibleError(f"r = {r} lies outside the rotation set")
    if res.status is PeriodicStatus.CAP_EXCEEDED:
        raise CapExceeded(res.state_bound, f"periodic search needs {res.state_bound} states")
    b = beta(graph, [float(x) for x in (r if isinstance(r, (list, tuple)) else [r])])
    gaps = []
    so_far = -math.inf
    for v in res.by_period:
        if v is not None:
            so_far = max(so_far, v)
        gaps.append(b - so_far if so_far > -math.inf else math.inf)
    return BetaGap(b, tuple(gaps), res)


@dataclass(frozen=True)
class AlphaApprox:
    r: tuple[Fraction, ...]
    orbit: Cycle
    value: float

    def to_json(self, graph: WeightedDigraph) -> dict:
        return {
            "r": [format_rational(x) for x in self.r],
            "value": self.value,
            "orbit": self.orbit.to_json(graph),
        }


def _path_edges(graph: WeightedDigraph, source: int, target: int) -> list[int]:
    if source == target:
        return []
    g = nx.DiGraph()
    g.add_edges_from(zip(graph.src.tolist(), graph.dst.tolist()))
    verts = nx.shortest_path(g, source, target)
    return [graph.edge_index[(s, t)] for s, t in zip(verts, verts[1:])]


def alpha_periodic_approx(graph: WeightedDigraph, c, want_interior: bool = False, eps: float = 1e-3) -> AlphaApprox:
    """A periodic orbit whose ``<c, r> - mean potential`` approximates alpha(c).

    Without ``want_interior`` the minimising cycle itself is returned and the
    value equals alpha(c).  With it (one-dimensional constraints), a boundary
    witness is repeated and spliced with a cycle of different rotation number,
    pulling r into the interior at a cost below ``eps``.
    """
    val, witness = alpha_witness(graph, c)
    cv = np.array([float(x) for x in (c if isinstance(c, (list, tuple, np.ndarray)) else [c])])
    if not want_interior:
        return AlphaApprox(witness.rotation_vector, witness, val)
    if graph.dim != 1:
        raise ValueError("interior splicing is implemented for one-dimensional constraints")
    if is_cohomologous_to_constant(graph, graph.phi_float[:, 0]):
        raise DegenerateRotationSet("the constraint is cohomologous to a constant: the rotation set is a point")
    lo, hi = rotation_interval(graph)
    r0 = witness.rotation_vector[0]
    if lo < r0 < hi:
        return AlphaApprox(witness.rotation_vector, witness, val)
    col = graph.phi_float[:, 0]
    _, other = max_mean_cycle(graph, col) if r0 == lo else max_mean_cycle(graph, -col)
    weight = graph.phi_float @ cv - graph.a
    x, y = witness.vertices[0], other.vertices[0]
    bridge = _path_edges(graph, x, y) + list(other.edges) + _path_edges(graph, y, x)
    excess = math.fsum(weight[e] - val for e in bridge)
    m = max(1, math.ceil(excess / (eps * witness.period)) + 1)
    while True:
        edges = list(witness.edges) * m + bridge
        orbit = Cycle.from_edges(graph, edges)
        value = orbit.mean(weight)
        if value - val < eps:
            return AlphaApprox(orbit.rotation_vector, orbit, value)
        m *= 2
