"""The stationary-measure polytope and the linear program for beta.

Variables are edge frequencies ``mu_e >= 0``.  Rows: total mass one, inflow
equals outflow at every vertex, and (for beta) ``sum mu_e phi_e = h``.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .cycles import Cycle, max_mean_cycle
from .edge_measure import StationaryEdgeMeasure
from .sft import WeightedDigraph
from .simplex import LpStatus, simplex_max


class Status(enum.Enum):
    OPTIMAL = "Optimal"
    INFEASIBLE = "Infeasible"


@dataclass(frozen=True, eq=False)
class LpSolution:
    status: Status
    value: float = float("nan")
    measure: StationaryEdgeMeasure | None = None
    dual_multipliers: np.ndarray = field(default_factory=lambda: np.zeros(0))
    dual_mass: float = float("nan")

    @property
    def optimal(self) -> bool:
        return self.status is Status.OPTIMAL


def _polytope_rows(graph: WeightedDigraph) -> tuple[np.ndarray, np.ndarray]:
    n, m = graph.n_vertices, graph.n_edges
    A = np.zeros((1 + n, m))
    A[0, :] = 1.0
    idx = np.arange(m)
    A[1 + graph.dst, idx] += 1.0
    A[1 + graph.src, idx] -= 1.0
    b = np.zeros(1 + n)
    b[0] = 1.0
    return A, b


def _as_vector(h, dim: int) -> np.ndarray:
    if isinstance(h, (int, float, Fraction)):
        h = [h]
    v = np.array([float(x) for x in h], dtype=np.float64)
    if v.shape != (dim,):
        raise ValueError(f"expected a vector of length {dim}, got {len(v)}")
    return v


def solve_beta_primal(graph: WeightedDigraph, h=None, potential=None) -> LpSolution:
    """Maximise the integral of the potential over stationary measures with rotation ``h``.

    ``h=None`` drops the rotation rows (the unconstrained maximum).
    ``potential`` overrides the graph's edge values.
    """
    a = graph.a if potential is None else np.asarray(potential, dtype=np.float64)
    A, b = _polytope_rows(graph)
    n_h = 0
    if h is not None:
        hv = _as_vector(h, graph.dim)
        A = np.vstack([A, graph.phi_float.T])
        b = np.concatenate([b, hv])
        n_h = graph.dim
    res = simplex_max(a, A, b)
    if res.status is LpStatus.INFEASIBLE:
        return LpSolution(Status.INFEASIBLE)
    if res.status is not LpStatus.OPTIMAL:  # bounded polytope: cannot happen
        raise RuntimeError(f"unexpected LP status {res.status}")
    measure = StationaryEdgeMeasure.from_weights(graph, res.x)
    duals = res.duals[len(res.duals) - n_h:] if n_h else np.zeros(0)
    return LpSolution(Status.OPTIMAL, res.value, measure, duals.copy(), float(res.duals[0]))


def decompose_into_cycles(
    measure: StationaryEdgeMeasure, graph: WeightedDigraph, tol: float = 1e-12
) -> list[tuple[Cycle, float]]:
    """Write a stationary measure as a convex combination of simple-cycle measures.

    Greedy peeling: follow support edges (lowest index first) until a vertex
    repeats, remove the largest multiple of that cycle, repeat.  Each round
    zeroes at least one edge, so at most ``|E|`` cycles come out.
    """
    res = measure.residuals(graph)
    if any(v > 1e-9 for v in res.values()):
        raise ValueError(f"not a stationary probability: {res}")
    w = np.array(measure.weights, dtype=np.float64)
    w[w < tol] = 0.0
    parts: list[tuple[Cycle, float]] = []
    while True:
        support = np.flatnonzero(w > tol)
        if support.size == 0:
            break
        e = int(support[0])
        walk = [e]
        seen = {int(graph.src[e]): 0}
        v = int(graph.dst[e])
        stuck = False
        while v not in seen:
            seen[v] = len(walk)
            outs = [f for f in graph.out_edges[v] if w[f] > tol]
            if not outs:
                stuck = True
                break
            walk.append(int(outs[0]))
            v = int(graph.dst[outs[0]])
        if stuck:
            # only round-off mass can dead-end; discard it
            for f in walk:
                w[f] = 0.0
            continue
        cyc_edges = walk[seen[v]:]
        flow = min(w[f] for f in cyc_edges)
        for f in cyc_edges:
            w[f] -= flow
            if w[f] <= tol:
                w[f] = 0.0
        cycle = Cycle.from_edges(graph, cyc_edges)
        parts.append((cycle, flow * cycle.period))
    total = math.fsum(lam for _, lam in parts)
    return [(c, lam / total) for c, lam in parts]


def recompose(parts: Sequence[tuple[Cycle, float]], graph: WeightedDigraph) -> np.ndarray:
    """Edge weights of ``sum lambda_c * (uniform measure on c)``."""
    w = np.zeros(graph.n_edges)
    for cycle, lam in parts:
        for e in cycle.edges:
            w[e] += lam / cycle.period
    return w


def maximizing_face_extents(graph: WeightedDigraph, c, tol: float = 1e-9) -> np.ndarray:
    """Coordinate ranges of rotation vectors over the maximisers of ``A - <c, phi>``.

    Returns an ``(n, 2)`` array of ``[min, max]``.  The face is cut out by
    ``sum mu_e (a_e - <c, phi_e>) = optimum`` on top of the polytope rows.
    """
    cv = _as_vector(c, graph.dim) if graph.dim else np.zeros(0)
    w = graph.a - graph.phi_float @ cv
    best, _ = max_mean_cycle(graph, w)
    A, b = _polytope_rows(graph)
    A = np.vstack([A, w[None, :]])
    b = np.concatenate([b, [best]])
    out = np.zeros((graph.dim, 2))
    for i in range(graph.dim):
        col = graph.phi_float[:, i]
        lo = simplex_max(-col, A, b, feas_tol=tol)
        hi = simplex_max(col, A, b, feas_tol=tol)
        if lo.status is not LpStatus.OPTIMAL or hi.status is not LpStatus.OPTIMAL:
            raise RuntimeError("optimal face LP failed")
        out[i] = (-lo.value, hi.value)
    return out


@dataclass(frozen=True, eq=False)
class MarkovChain:
    """Vertex chain of an invariant Markov extension, restricted to the support."""

    vertices: np.ndarray  # graph vertex of each state
    P: np.ndarray  # row-stochastic transition matrix
    stationary: np.ndarray
    edge_of: np.ndarray  # edge index realising each transition, -1 if none

    def sample_edges(self, length: int, rng: np.random.Generator, start: int | None = None) -> np.ndarray:
        """Edge sequence of a stationary trajectory of ``length`` steps."""
        k = len(self.vertices)
        state = int(rng.choice(k, p=self.stationary)) if start is None else start
        cum = np.cumsum(self.P, axis=1)
        cum[:, -1] = 1.0
        u = rng.random(length)
        out = np.empty(length, dtype=np.int64)
        for j in range(length):
            nxt = int(np.searchsorted(cum[state], u[j], side="right"))
            out[j] = self.edge_of[state, nxt]
            state = nxt
        return out


def markov_extension(measure: StationaryEdgeMeasure, graph: WeightedDigraph, tol: float = 1e-12) -> MarkovChain:
    """Transition matrix ``P(v, w) = mu_e / outflow(v)`` on the support of ``measure``."""
    flow = measure.vertex_marginal(graph)
    verts = np.flatnonzero(flow > tol)
    pos = {int(v): i for i, v in enumerate(verts)}
    k = len(verts)
    P = np.zeros((k, k))
    edge_of = np.full((k, k), -1, dtype=np.int64)
    for e in measure.support(tol):
        s, t = int(graph.src[e]), int(graph.dst[e])
        if s not in pos or t not in pos:
            raise ValueError("support edge touches a vertex of zero mass")
        P[pos[s], pos[t]] = measure.weights[e] / flow[s]
        edge_of[pos[s], pos[t]] = e
    P /= P.sum(axis=1, keepdims=True)
    stationary = flow[verts] / flow[verts].sum()
    return MarkovChain(verts, P, stationary, edge_of)
