"""Periodic orbits as closed walks: enumeration and maximum/minimum mean cycles."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import networkx as nx
import numpy as np

from ._backend import kernels
from .edge_measure import StationaryEdgeMeasure
from .sft import WeightedDigraph, format_word

DEFAULT_CYCLE_CAP = 10**6


class CapExceeded(RuntimeError):
    def __init__(self, count: int, message: str | None = None):
        self.count = count
        super().__init__(message or f"more than {count} items; raise the cap or use a non-enumerative route")


@dataclass(frozen=True)
class Cycle:
    """A closed walk: the support data of the periodic measure it carries.

    ``vertices[i]`` is the source of ``edges[i]``.  Simple cycles are stored
    rotated to start at their smallest vertex.
    """

    edges: tuple[int, ...]
    vertices: tuple[int, ...]
    period: int
    mean_potential: float
    rotation_vector: tuple[Fraction, ...]

    @classmethod
    def from_edges(cls, graph: WeightedDigraph, edges: Sequence[int], canonical: bool = True) -> "Cycle":
        edges = [int(e) for e in edges]
        if not edges:
            raise ValueError("empty cycle")
        for e, f in zip(edges, edges[1:] + edges[:1]):
            if not 0 <= e < graph.n_edges or not 0 <= f < graph.n_edges:
                raise ValueError(f"edge index out of range in {edges}")
            if graph.dst[e] != graph.src[f]:
                raise ValueError(f"edges {e} and {f} do not chain")
        if canonical:
            edges = _canonical_rotation(graph, edges)
        m = len(edges)
        mean = math.fsum(graph.a[e] for e in edges) / m
        rot = tuple(sum((graph.phi[e][i] for e in edges), Fraction(0)) / m for i in range(graph.dim))
        verts = tuple(int(graph.src[e]) for e in edges)
        return cls(tuple(edges), verts, m, mean, rot)

    @property
    def is_simple(self) -> bool:
        return len(set(self.vertices)) == len(self.vertices)

    def mean(self, weight) -> float:
        """Mean of an arbitrary per-edge weight along the cycle."""
        return math.fsum(float(weight[e]) for e in self.edges) / self.period

    def word(self, graph: WeightedDigraph) -> tuple[int, ...]:
        """Symbol word whose periodic repetition is the orbit."""
        return graph.symbols_of(self.edges)

    def to_json(self, graph: WeightedDigraph) -> dict:
        return {
            "word": format_word(self.word(graph)),
            "period": self.period,
            "vertices": [format_word(graph.vertices[v]) for v in self.vertices],
            "mean_potential": self.mean_potential,
            "rotation_vector": [str(x) for x in self.rotation_vector],
        }


def _least_rotation(seq: Sequence[int]) -> int:
    """Start index of the lexicographically least rotation (Booth's algorithm)."""
    s = list(seq) * 2
    fail = [-1] * len(s)
    k = 0
    for j in range(1, len(s)):
        c = s[j]
        i = fail[j - k - 1]
        while i != -1 and c != s[k + i + 1]:
            if c < s[k + i + 1]:
                k = j - i - 1
            i = fail[i]
        if i == -1 and c != s[k]:
            if c < s[k]:
                k = j
            fail[j - k] = -1
        else:
            fail[j - k] = i + 1
    return k % len(seq)


def _canonical_rotation(graph: WeightedDigraph, edges: list[int]) -> list[int]:
    best = _least_rotation([int(graph.src[e]) for e in edges])
    return edges[best:] + edges[:best]


def enumerate_simple_cycles(graph: WeightedDigraph, cap: int = DEFAULT_CYCLE_CAP) -> list[Cycle]:
    """Every simple directed cycle once, sorted by vertex sequence.

    Raises CapExceeded when the graph has more than ``cap`` simple cycles.
    """
    g = nx.DiGraph()
    g.add_nodes_from(range(graph.n_vertices))
    g.add_edges_from(zip(graph.src.tolist(), graph.dst.tolist()))
    found = []
    for count, verts in enumerate(nx.simple_cycles(g), start=1):
        if count > cap:
            raise CapExceeded(cap)
        i = verts.index(min(verts))
        verts = verts[i:] + verts[:i]
        edges = [graph.edge_index[(s, t)] for s, t in zip(verts, verts[1:] + verts[:1])]
        found.append(Cycle.from_edges(graph, edges, canonical=False))
    found.sort(key=lambda c: c.vertices)
    return found


def _split_walk(graph: WeightedDigraph, walk: Sequence[int]) -> list[list[int]]:
    """Decompose a walk (edge list) into the simple cycles it closes."""
    cycles = []
    stack: list[int] = []
    position: dict[int, int] = {}
    v = int(graph.src[walk[0]])
    position[v] = 0
    for e in walk:
        stack.append(int(e))
        t = int(graph.dst[e])
        if t in position:
            i = position[t]
            cyc = stack[i:]
            del stack[i:]
            for f in cyc:
                position.pop(int(graph.dst[f]), None)
            position[t] = i
            cycles.append(cyc)
        else:
            position[t] = len(stack)
    return cycles


def max_mean_cycle(graph: WeightedDigraph, weight=None) -> tuple[float, Cycle]:
    """Maximum cycle mean of ``weight`` (default: the potential) with a simple witness.

    Karp's table is built once; the walk realising ``D[n, v]`` is split into
    simple cycles for every ``v`` and the best of those is the witness.  The
    returned value is the witness mean, summed with ``math.fsum``.  Exact ties
    go to the lexicographically smallest vertex sequence among the candidates.
    """
    w = graph.a if weight is None else np.ascontiguousarray(weight, dtype=np.float64)
    if w.shape != (graph.n_edges,):
        raise ValueError(f"weight must have one entry per edge ({graph.n_edges})")
    n = graph.n_vertices
    D, pred = kernels.karp_table(n, graph.src, graph.dst, w)
    candidates: dict[tuple[int, ...], list[int]] = {}
    for v in range(n):
        if pred[n, v] < 0:
            continue
        walk = []
        x = v
        for k in range(n, 0, -1):
            e = int(pred[k, x])
            walk.append(e)
            x = int(graph.src[e])
        walk.reverse()
        for cyc in _split_walk(graph, walk):
            cyc = _canonical_rotation(graph, cyc)
            key = tuple(int(graph.src[e]) for e in cyc)
            candidates.setdefault(key, cyc)
    best_key = None
    best_val = -math.inf
    for key in sorted(candidates):
        cyc = candidates[key]
        val = math.fsum(w[e] for e in cyc) / len(cyc)
        if val > best_val:
            best_val, best_key = val, key
    witness = Cycle.from_edges(graph, candidates[best_key], canonical=False)
    return best_val, witness


def min_mean_cycle(graph: WeightedDigraph, weight=None) -> tuple[float, Cycle]:
    """Minimum cycle mean; computed as ``-max_mean_cycle(-weight)``."""
    w = graph.a if weight is None else np.asarray(weight, dtype=np.float64)
    val, witness = max_mean_cycle(graph, -w)
    return -val, witness


def karp_value(graph: WeightedDigraph, weight) -> float:
    """Karp's min-max formula alone (no witness), for cross-checks."""
    w = np.ascontiguousarray(weight, dtype=np.float64)
    n = graph.n_vertices
    D, _ = kernels.karp_table(n, graph.src, graph.dst, w)
    best = -math.inf
    for v in range(n):
        if D[n, v] == -math.inf:
            continue
        worst = min(
            (D[n, v] - D[k, v]) / (n - k) for k in range(n) if D[k, v] != -math.inf
        )
        best = max(best, worst)
    return best


def cycle_measure(cycle: Cycle, graph: WeightedDigraph) -> StationaryEdgeMeasure:
    """Uniform measure on the orbit: mass 1/M per traversal of each edge."""
    weights = np.zeros(graph.n_edges)
    for e in cycle.edges:
        if not 0 <= e < graph.n_edges:
            raise ValueError(f"edge {e} not in graph")
        weights[e] += 1.0
    weights /= cycle.period
    return StationaryEdgeMeasure.from_weights(graph, weights)
