"""Calibrated sub-actions (max-plus eigenvectors), contact loci, optimal trajectories.

For an edge weight ``w`` with maximum cycle mean ``lam``, a calibrated
sub-action is a vertex function ``u`` with

    u(y) = max over edges e into y of ( w_e + u(src e) - lam ).

Trajectories run backwards: ``x_{j+1}`` is the source of the calibrating edge
into ``x_j``, so each step moves to a preimage under the shift.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import networkx as nx
import numpy as np

from ._backend import kernels
from .beta_alpha import alpha_gradient
from .cycles import Cycle, max_mean_cycle
from .lp import MarkovChain
from .sft import NotTransitiveError, WeightedDigraph, format_word


class NotStronglyConnectedError(NotTransitiveError):
    pass


@dataclass(frozen=True, eq=False)
class CalibratedSubaction:
    u: np.ndarray
    eigenvalue: float
    critical_edges: tuple[int, ...]
    weight: np.ndarray
    anchor: int  # vertex where u = 0

    def normalized(self, graph: WeightedDigraph) -> np.ndarray:
        """``w_e + u(src) - u(dst) - eigenvalue``; <= 0 for a sub-action."""
        return self.weight + self.u[graph.src] - self.u[graph.dst] - self.eigenvalue

    def residuals(self, graph: WeightedDigraph) -> dict[str, float]:
        r = self.normalized(graph)
        calib = np.full(graph.n_vertices, -np.inf)
        np.maximum.at(calib, graph.dst, r)
        return {
            "subaction": float(max(0.0, r.max())),
            "calibration": float(np.max(np.abs(calib))),
            "critical": float(np.max(np.abs(r[list(self.critical_edges)]), initial=0.0)),
        }

    def to_json(self, graph: WeightedDigraph) -> dict:
        return {
            "eigenvalue": self.eigenvalue,
            "anchor": format_word(graph.vertices[self.anchor]),
            "u": {format_word(v): float(x) for v, x in zip(graph.vertices, self.u)},
            "critical_edges": [format_word(graph.edge_words[e]) for e in self.critical_edges],
        }


def _critical_edges(graph: WeightedDigraph, tight: np.ndarray) -> list[int]:
    """Tight edges lying on a cycle of tight edges."""
    g = nx.DiGraph()
    idx = np.flatnonzero(tight)
    g.add_edges_from((int(graph.src[e]), int(graph.dst[e])) for e in idx)
    comp = {}
    for k, c in enumerate(nx.strongly_connected_components(g)):
        for v in c:
            comp[v] = k
    return [int(e) for e in idx if comp[int(graph.src[e])] == comp[int(graph.dst[e])]]


def calibrated_subaction(graph: WeightedDigraph, weight=None, rel_tol: float = 1e-10) -> CalibratedSubaction:
    """Canonical calibrated sub-action of ``weight`` (default: the potential).

    ``u(y)`` is the heaviest normalised walk from the anchor to ``y``, the
    anchor being the smallest critical vertex; |V| - 1 Bellman sweeps suffice
    because normalised cycle weights are <= 0.
    """
    if not graph.strongly_connected:
        raise NotStronglyConnectedError("calibrated sub-actions need a strongly connected graph")
    w = graph.a if weight is None else np.ascontiguousarray(weight, dtype=np.float64)
    lam, witness = max_mean_cycle(graph, w)
    wn = np.ascontiguousarray(w - lam)
    n = graph.n_vertices
    tol = rel_tol * max(1.0, abs(lam), float(np.max(np.abs(w))))
    u0 = kernels.longest_walks(n, graph.src, graph.dst, wn, witness.vertices[0], max(n - 1, 1))
    tight = np.abs(wn + u0[graph.src] - u0[graph.dst]) <= tol
    critical = _critical_edges(graph, tight)
    anchor = min(int(graph.src[e]) for e in critical)
    u = kernels.longest_walks(n, graph.src, graph.dst, wn, anchor, max(n - 1, 1))
    u = u - u[anchor]
    u.setflags(write=False)
    w = np.array(w)
    w.setflags(write=False)
    # recompute critical set against the anchored u (same set up to round-off)
    tight = np.abs(wn + u[graph.src] - u[graph.dst]) <= tol
    critical = _critical_edges(graph, tight)
    return CalibratedSubaction(u, lam, tuple(sorted(critical)), w, anchor)


def contact_locus(graph: WeightedDigraph, sub: CalibratedSubaction, tol: float = 1e-9) -> tuple[int, ...]:
    """Edges where the sub-action inequality is an equality (within ``tol``)."""
    r = sub.normalized(graph)
    return tuple(int(e) for e in np.flatnonzero(np.abs(r) <= tol))


def calibrating_preimages(graph: WeightedDigraph, sub: CalibratedSubaction, tol: float = 1e-9) -> np.ndarray:
    """For each vertex, the calibrating incoming edge with the smallest source word."""
    r = sub.normalized(graph)
    pred = np.full(graph.n_vertices, -1, dtype=np.int64)
    for y in range(graph.n_vertices):
        incoming = graph.in_edges[y]
        best = r[incoming].max()
        ok = [int(e) for e in incoming if r[e] >= best - tol]
        pred[y] = min(ok, key=lambda e: graph.vertices[graph.src[e]])
    return pred


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Backward orbit ``x_0, x_1, ...`` with ``edges[j]`` going from x_{j+1} to x_j.

    Running means use the constraint along ``edges[0..k-1]``: the k points
    ``x_1 .. x_k`` (the value at ``x_0`` needs a forward coordinate the
    vertex does not fix).  ``phi_cumsum`` is exact: integers over ``Q``.
    """

    vertices: np.ndarray
    edges: np.ndarray
    phi_cumsum: np.ndarray
    Q: int
    a_cumsum: np.ndarray

    @property
    def steps(self) -> int:
        return int(self.edges.shape[0])

    def running_phi_mean(self, k: int) -> tuple[Fraction, ...]:
        return tuple(Fraction(int(x), self.Q * k) for x in self.phi_cumsum[k - 1])

    def running_phi_means(self) -> np.ndarray:
        k = np.arange(1, self.steps + 1, dtype=np.float64)[:, None]
        return self.phi_cumsum / float(self.Q) / k

    def running_a_means(self) -> np.ndarray:
        return self.a_cumsum / np.arange(1, self.steps + 1, dtype=np.float64)

    def absorption(self) -> tuple[int, int]:
        """(first index on the eventual cycle, eventual period)."""
        seen: dict[int, int] = {}
        for j, v in enumerate(self.vertices.tolist()):
            if v in seen:
                return seen[v], j - seen[v]
            seen[v] = j
        raise ValueError("trajectory too short to close a cycle")

    def to_json(self, graph: WeightedDigraph) -> dict:
        return {
            "convention": "backward orbit: edge j joins x_{j+1} -> x_j (x_j = shift of x_{j+1})",
            "vertices": [format_word(graph.vertices[v]) for v in self.vertices],
        }


def optimal_trajectory(graph: WeightedDigraph, sub: CalibratedSubaction, x0: int, steps: int) -> Trajectory:
    """Backward orbit from ``x0`` that attains the calibration maximum at every step."""
    if not 0 <= x0 < graph.n_vertices:
        raise ValueError(f"vertex {x0} out of range")
    pred = calibrating_preimages(graph, sub)
    edges = kernels.follow_predecessors(pred, graph.src, int(x0), int(steps))
    vertices = np.empty(steps + 1, dtype=np.int64)
    vertices[0] = x0
    vertices[1:] = graph.src[edges]
    phi_cumsum = np.cumsum(graph.phi_num[edges], axis=0)
    a_cumsum = np.cumsum(graph.a[edges])
    for arr in (vertices, edges, phi_cumsum, a_cumsum):
        arr.setflags(write=False)
    return Trajectory(vertices, edges, phi_cumsum, graph.Q, a_cumsum)


@dataclass(frozen=True, eq=False)
class DifferentialCheck:
    errors: np.ndarray  # errors[k-1] = |S_k phi / k - gradient|
    unique: bool
    gradient: tuple[Fraction, ...]
    absorption_step: int  # -1 when the trajectory never closes up
    period: int
    trajectory: Trajectory

    def bound(self, graph: WeightedDigraph) -> np.ndarray:
        """``2 |phi|_0 (j0 + period) / k``; valid for k past absorption when unique."""
        k = np.arange(1, self.errors.size + 1, dtype=np.float64)
        return 2.0 * graph.phi_norm * (self.absorption_step + self.period) / k


def verify_alpha_differential(graph: WeightedDigraph, c, steps: int, x0: int = 0) -> DifferentialCheck:
    """Compare running constraint means on an optimal trajectory with the gradient of alpha.

    The trajectory is optimal for ``A - <c, phi>``, whose maximisers are the
    minimisers defining alpha at ``c``.
    """
    cv = np.array([float(x) for x in (c if isinstance(c, (list, tuple, np.ndarray)) else [c])])
    weight = graph.a - graph.phi_float @ cv
    sub = calibrated_subaction(graph, weight)
    traj = optimal_trajectory(graph, sub, x0, steps)
    grad, unique = alpha_gradient(graph, cv)
    g = np.array([float(x) for x in grad])
    diff = traj.running_phi_means() - g[None, :]
    errors = np.sqrt(np.sum(diff * diff, axis=1))
    try:
        j0, period = traj.absorption()
    except ValueError:  # too few steps to revisit a vertex
        j0, period = -1, 0
    return DifferentialCheck(errors, unique, grad, j0, period, traj)


@dataclass(frozen=True)
class RecurrenceStats:
    status: str  # "ok" or "NoVisits"
    eps_grid: tuple[float, ...]
    fractions: tuple[float, ...]
    visits: int
    min_deviation: tuple[float, ...] = ()


def _cylinder_visits(symbols: np.ndarray, cylinder: Sequence[int]) -> np.ndarray:
    d = len(cylinder)
    if d == 0:
        return np.arange(symbols.size, dtype=np.int64)
    hits = np.ones(symbols.size - d + 1, dtype=bool)
    for i, s in enumerate(cylinder):
        hits &= symbols[i:symbols.size - d + 1 + i] == s
    return np.flatnonzero(hits).astype(np.int64)


def recurrence_defect(
    graph: WeightedDigraph,
    source: Cycle | MarkovChain,
    cylinder: Sequence[int],
    L_max: int,
    samples: int,
    eps_grid: Sequence[float] = (0.5, 0.2, 0.1, 0.05, 0.01),
    seed: int = 0,
    rotation=None,
) -> RecurrenceStats:
    """Fraction of visits to ``[cylinder]`` that return within ``L_max`` steps
    with ``|S_L phi - L rot| < eps``, for each ``eps`` in ``eps_grid``.

    A Cycle source gives the exact periodic orbit; a MarkovChain source gives
    one stationary sample path whose first ``samples`` visits are examined.
    ``rotation`` defaults to the source's rotation vector (exact for cycles).
    """
    eps_grid = tuple(float(e) for e in eps_grid)
    d = len(cylinder)
    if isinstance(source, Cycle):
        rot = source.rotation_vector if rotation is None else rotation
        period_edges = np.array(source.edges, dtype=np.int64)
        reps = math.ceil((L_max + d + source.period) / source.period) + 1
        edges = np.tile(period_edges, reps)
        visits = _cylinder_visits(graph.symbols_arr[edges], cylinder)
        visits = visits[visits < source.period]
        n_samples = visits.size
        full_visits = _cylinder_visits(graph.symbols_arr[edges], cylinder)
    else:
        rng = np.random.default_rng(seed)
        if rotation is None:
            p = np.zeros(graph.n_edges)
            flows = source.stationary[:, None] * source.P
            mask = source.edge_of >= 0
            p[source.edge_of[mask]] = flows[mask]
            rotation = p @ graph.phi_float
        rot = rotation
        chunk = max(4 * (L_max + d), 1024)
        edges = source.sample_edges(chunk, rng)
        while True:
            full_visits = _cylinder_visits(graph.symbols_arr[edges], cylinder)
            usable = full_visits[full_visits + L_max + d <= edges.size]
            if usable.size >= samples or full_visits.size == 0 and edges.size > 64 * chunk:
                break
            more = source.sample_edges(chunk, rng, start=_state_after(source, edges[-1]))
            edges = np.concatenate([edges, more])
        n_samples = min(samples, usable.size)
    if n_samples == 0:
        return RecurrenceStats("NoVisits", eps_grid, tuple(0.0 for _ in eps_grid), 0)

    exact = all(isinstance(x, (Fraction, int)) for x in rot)
    if exact:
        den = math.lcm(graph.Q, *(Fraction(x).denominator for x in rot))
        inc = graph.phi_num[edges] * (den // graph.Q) - np.array([int(Fraction(x) * den) for x in rot])
        scale = float(den)
    else:
        inc = graph.phi_float[edges] - np.asarray(rot, dtype=np.float64)[None, :]
        scale = 1.0
    prefix = np.zeros((edges.size + 1, graph.dim))
    prefix[1:] = np.cumsum(inc, axis=0)
    dev = kernels.min_return_deviation(
        np.ascontiguousarray(prefix, dtype=np.float64), full_visits, int(n_samples), int(L_max)
    ) / scale
    fractions = tuple(float(np.mean(dev < e)) for e in eps_grid)
    return RecurrenceStats("ok", eps_grid, fractions, int(n_samples), tuple(dev.tolist()))


def _state_after(chain: MarkovChain, edge: int) -> int:
    pos = np.flatnonzero(chain.edge_of == edge)
    return int(pos[0] % chain.edge_of.shape[1])
