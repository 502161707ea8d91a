"""Stationary edge-frequency vectors: the finite surrogate of invariant measures."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .sft import WeightedDigraph


@dataclass(frozen=True, eq=False)
class StationaryEdgeMeasure:
    weights: np.ndarray
    rotation_vector: np.ndarray
    potential_integral: float

    @classmethod
    def from_weights(cls, graph: WeightedDigraph, weights) -> "StationaryEdgeMeasure":
        w = np.asarray(weights, dtype=np.float64).copy()
        w.setflags(write=False)
        rot = w @ graph.phi_float if graph.dim else np.zeros(0)
        return cls(w, rot, float(w @ graph.a))

    def vertex_marginal(self, graph: WeightedDigraph) -> np.ndarray:
        """Outflow at each vertex (equals inflow for a stationary measure)."""
        return np.bincount(graph.src, weights=self.weights, minlength=graph.n_vertices)

    def residuals(self, graph: WeightedDigraph) -> dict[str, float]:
        """Violations of nonnegativity, total mass and flow conservation."""
        w = self.weights
        out = np.bincount(graph.src, weights=w, minlength=graph.n_vertices)
        inn = np.bincount(graph.dst, weights=w, minlength=graph.n_vertices)
        return {
            "negativity": float(max(0.0, -w.min())) if w.size else 0.0,
            "mass": abs(float(w.sum()) - 1.0),
            "flow": float(np.max(np.abs(out - inn))) if w.size else 0.0,
        }

    def is_valid(self, graph: WeightedDigraph, tol: float = 1e-9) -> bool:
        return all(v <= tol for v in self.residuals(graph).values())

    def support(self, tol: float = 1e-12) -> np.ndarray:
        return np.flatnonzero(self.weights > tol)

    def expectation(self, weight) -> float:
        return float(self.weights @ np.asarray(weight, dtype=np.float64))

    def to_json(self, graph: WeightedDigraph, tol: float = 1e-12) -> dict:
        from .sft import format_word

        return {
            "edges": {
                format_word(graph.edge_words[e]): float(self.weights[e]) for e in self.support(tol)
            },
            "rotation_vector": [float(x) for x in self.rotation_vector],
            "potential_integral": self.potential_integral,
        }
