"""Rotation sets, the alpha function and its gradient, the dual route to beta.

Conventions: ``alpha(c) = min over invariant mu of integral(<c, phi> - A)``,
which is the minimum cycle mean of ``<c, phi_e> - a_e``; ``beta(h)`` is the
LP value from :mod:`relmax.lp`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .cycles import CapExceeded, Cycle, enumerate_simple_cycles, max_mean_cycle, min_mean_cycle
from .lp import Status, maximizing_face_extents, solve_beta_primal
from .sft import WeightedDigraph, format_rational
from .simplex import LpStatus, linprog_min

UNIQUE_WIDTH = 1e-8
INTERIOR_MARGIN = 1e-8


class NotInteriorError(ValueError):
    pass


class InfeasibleError(ValueError):
    pass


class MaxItersError(RuntimeError):
    def __init__(self, lower: float, upper: float, iterations: int):
        self.lower, self.upper, self.iterations = lower, upper, iterations
        super().__init__(f"no convergence after {iterations} cuts: {lower} <= beta <= {upper}")


@dataclass(frozen=True)
class SupportSample:
    direction: tuple[float, ...]
    value: float
    witness: tuple[Fraction, ...]


@dataclass(frozen=True)
class RotationSet:
    dim: int
    support_samples: tuple[SupportSample, ...]
    exact_polygon: tuple[tuple[Fraction, ...], ...] | None
    exact: bool

    def contains(self, point, tol: float = 1e-9) -> bool:
        p = np.array([float(x) for x in point])
        if self.exact and self.exact_polygon is not None:
            return _distance_to_hull(p, self.exact_polygon) <= tol
        return all(np.dot(s.direction, p) <= s.value + tol for s in self.support_samples)

    def hausdorff(self, other: "RotationSet") -> float:
        """Hausdorff distance between two exact rotation sets."""
        if not (self.exact and other.exact):
            raise ValueError("Hausdorff distance needs exact rotation sets")
        P, Q = self.exact_polygon, other.exact_polygon
        d1 = max(_distance_to_hull(np.array([float(x) for x in v]), Q) for v in P)
        d2 = max(_distance_to_hull(np.array([float(x) for x in v]), P) for v in Q)
        return max(d1, d2)

    def to_json(self) -> dict:
        doc: dict = {"dim": self.dim, "exact": self.exact}
        if self.exact_polygon is not None:
            doc["vertices"] = [[format_rational(x) for x in v] for v in self.exact_polygon]
        doc["support"] = [
            {
                "direction": list(s.direction),
                "value": s.value,
                "witness": [format_rational(x) for x in s.witness],
            }
            for s in self.support_samples
        ]
        return doc


def default_directions(dim: int, count: int = 64, seed: int = 0) -> list[np.ndarray]:
    """±1 for n=1, a uniform angular grid for n=2, seeded random unit vectors above."""
    if dim == 1:
        return [np.array([1.0]), np.array([-1.0])]
    if dim == 2:
        angles = 2 * math.pi * np.arange(count) / count
        return [np.array([math.cos(t), math.sin(t)]) for t in angles]
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(max(count, 2 * dim)):
        v = rng.normal(size=dim)
        out.append(v / np.linalg.norm(v))
    return out


def _hull_exact(points: Sequence[tuple[Fraction, ...]]) -> tuple[tuple[Fraction, ...], ...]:
    """Exact convex hull: [min, max] for n=1, counter-clockwise polygon for n=2."""
    pts = sorted(set(points))
    if len(pts[0]) == 1:
        return (pts[0],) if len(pts) == 1 else (pts[0], pts[-1])
    if len(pts) <= 2:
        return tuple(pts)

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower: list = []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list = []
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    hull = lower[:-1] + upper[:-1]
    return tuple(hull)


def _distance_to_hull(p: np.ndarray, hull: Sequence[tuple[Fraction, ...]]) -> float:
    verts = np.array([[float(x) for x in v] for v in hull])
    if verts.shape[1] == 1:
        lo, hi = verts[:, 0].min(), verts[:, 0].max()
        return float(max(lo - p[0], p[0] - hi, 0.0))
    if len(verts) == 1:
        return float(np.linalg.norm(p - verts[0]))
    if len(verts) == 2:
        return _segment_distance(p, verts[0], verts[1])
    inside = True
    for i in range(len(verts)):
        a, b = verts[i], verts[(i + 1) % len(verts)]
        if (b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0]) < 0:
            inside = False
            break
    if inside:
        return 0.0
    return min(_segment_distance(p, verts[i], verts[(i + 1) % len(verts)]) for i in range(len(verts)))


def _segment_distance(p, a, b) -> float:
    ab = b - a
    denom = float(ab @ ab)
    t = 0.0 if denom == 0 else min(1.0, max(0.0, float((p - a) @ ab) / denom))
    return float(np.linalg.norm(p - (a + t * ab)))


def _boundary_distance(p: np.ndarray, hull: Sequence[tuple[Fraction, ...]]) -> float:
    """Distance from an interior point to the boundary of a convex polygon (n=2)."""
    verts = np.array([[float(x) for x in v] for v in hull])
    if len(verts) < 3:
        return 0.0
    dists = []
    for i in range(len(verts)):
        a, b = verts[i], verts[(i + 1) % len(verts)]
        edge = b - a
        normal = np.array([edge[1], -edge[0]]) / np.linalg.norm(edge)
        dists.append(float(normal @ (a - p)))
    return min(dists)


def rotation_set(
    graph: WeightedDigraph,
    mode: str = "exact",
    directions: Sequence | None = None,
    cap: int = 10**6,
) -> RotationSet:
    """The set of rotation vectors of invariant measures.

    ``mode="exact"`` (n <= 2) takes the exact hull of all simple-cycle rotation
    vectors; ``mode="sampled"`` evaluates the support function by maximum mean
    cycles of ``<c, phi_e>`` along ``directions``.
    """
    n = graph.dim
    if n == 0:
        raise ValueError("graph carries no constraint")
    dirs = [np.asarray(d, dtype=np.float64) for d in (directions or default_directions(n))]
    if mode == "exact":
        if n > 2:
            raise ValueError("exact rotation sets are only computed for n <= 2")
        cycles = enumerate_simple_cycles(graph, cap=cap)
        rots = [c.rotation_vector for c in cycles]
        hull = _hull_exact(rots)
        samples = []
        for d in dirs:
            vals = [sum(float(x) * di for x, di in zip(r, d)) for r in hull]
            i = int(np.argmax(vals))
            samples.append(SupportSample(tuple(d.tolist()), vals[i], hull[i]))
        return RotationSet(n, tuple(samples), hull, True)
    if mode != "sampled":
        raise ValueError(f"unknown mode {mode!r}")
    samples = []
    for d in dirs:
        val, wit = max_mean_cycle(graph, graph.phi_float @ d)
        samples.append(SupportSample(tuple(d.tolist()), val, wit.rotation_vector))
    return RotationSet(n, tuple(samples), None, False)


def alpha(graph: WeightedDigraph, c) -> float:
    """``min over mu of integral(<c, phi> - A)``: a minimum cycle mean."""
    return alpha_witness(graph, c)[0]


def alpha_witness(graph: WeightedDigraph, c) -> tuple[float, Cycle]:
    cv = _vector(c, graph.dim)
    return min_mean_cycle(graph, graph.phi_float @ cv - graph.a)


def _vector(x, dim: int) -> np.ndarray:
    if isinstance(x, (int, float, Fraction)):
        x = [x]
    v = np.array([float(t) for t in x], dtype=np.float64)
    if v.shape != (dim,):
        raise ValueError(f"expected a vector of length {dim}")
    return v


def beta(graph: WeightedDigraph, h) -> float:
    sol = solve_beta_primal(graph, h)
    if sol.status is Status.INFEASIBLE:
        raise InfeasibleError(f"h = {h} lies outside the rotation set")
    return sol.value


def _interior_radius(graph: WeightedDigraph, hv: np.ndarray) -> tuple[float, list[Cycle]]:
    """Certify ``h`` interior; return a lower estimate of its distance to the boundary."""
    n = graph.dim
    margins, witnesses, points = [], [], []
    for d in default_directions(n):
        val, wit = max_mean_cycle(graph, graph.phi_float @ d)
        margins.append(val - float(d @ hv))
        witnesses.append(wit)
        points.append(wit.rotation_vector)
    slack = min(margins)
    if slack <= INTERIOR_MARGIN:
        raise NotInteriorError(f"h is within {slack:.3g} of the sampled boundary")
    if n == 1:
        return slack, witnesses
    if n == 2:
        inner = _hull_exact(points)
        if len(inner) >= 3 and _distance_to_hull(hv, inner) == 0.0:
            return max(_boundary_distance(hv, inner), 1e-300), witnesses
    return slack, witnesses


def beta_dual(graph: WeightedDigraph, h, tol: float = 1e-7, max_iters: int = 500) -> float:
    """``beta(h)`` as ``min over c of <c, h> + max cycle mean of (a - <c, phi>)``.

    Kelley cutting planes inside the box ``|c_i| <= R``: every oracle call
    returns a maximising cycle, whose affine function of ``c`` is a cut.  The
    objective is a max of finitely many affine pieces, so the loop ends once
    the model's minimum meets the best evaluated value.  ``R`` comes from the
    distance of ``h`` to the boundary and is large enough to contain the
    minimiser.
    """
    n = graph.dim
    hv = _vector(h, n)
    radius, seeds = _interior_radius(graph, hv)
    R = 2.0 * (1.0 + graph.a_norm) / radius

    cut_slopes: list[np.ndarray] = []
    cut_consts: list[float] = []
    seen: set[tuple[int, ...]] = set()

    def add_cut(cycle: Cycle) -> None:
        if cycle.edges in seen:
            return
        seen.add(cycle.edges)
        cut_slopes.append(hv - np.array([float(x) for x in cycle.rotation_vector]))
        cut_consts.append(cycle.mean_potential)

    for cyc in seeds:
        add_cut(cyc)

    def evaluate(c: np.ndarray) -> tuple[float, Cycle]:
        val, wit = max_mean_cycle(graph, graph.a - graph.phi_float @ c)
        return float(c @ hv) + val, wit

    upper, wit = evaluate(np.zeros(n))
    add_cut(wit)
    lower = -math.inf
    bounds = [(-R, R)] * n + [(None, None)]
    obj = np.zeros(n + 1)
    obj[-1] = 1.0
    for it in range(1, max_iters + 1):
        # cut k:  const_k + slope_k . c - t <= 0
        A_ub = np.hstack([np.array(cut_slopes), -np.ones((len(cut_slopes), 1))])
        b_ub = -np.array(cut_consts)
        res = linprog_min(obj, A_ub, b_ub, bounds=bounds)
        if res.status is not LpStatus.OPTIMAL:
            raise RuntimeError(f"cutting-plane master LP failed: {res.status}")
        c, lower = res.x[:n], res.value
        val, wit = evaluate(c)
        upper = min(upper, val)
        if upper - lower <= tol:
            return upper
        add_cut(wit)
    raise MaxItersError(lower, upper, max_iters)


def alpha_gradient(graph: WeightedDigraph, c) -> tuple[tuple[Fraction, ...], bool]:
    """Rotation vector of the minimisers of ``<c, phi> - A`` and whether it is unique.

    Uniqueness (face width <= 1e-8 per coordinate) is a numerical certificate
    that alpha is differentiable at ``c``; the vector is then its gradient.
    """
    _, witness = alpha_witness(graph, c)
    extents = maximizing_face_extents(graph, _vector(c, graph.dim))
    unique = bool(np.all(extents[:, 1] - extents[:, 0] <= UNIQUE_WIDTH))
    return witness.rotation_vector, unique


@dataclass(frozen=True)
class FenchelRecord:
    h: tuple
    c: tuple
    beta_h: float
    alpha_c: float
    gap: float


def fenchel_check(graph: WeightedDigraph, h, c) -> FenchelRecord:
    """``gap = <c, h> - beta(h) - alpha(c)``; nonnegative by the Fenchel inequality."""
    hv = _vector(h, graph.dim)
    cv = _vector(c, graph.dim)
    b = beta(graph, h)
    a = alpha(graph, cv)
    return FenchelRecord(tuple(h) if not isinstance(h, (int, float, Fraction)) else (h,),
                         tuple(cv.tolist()), b, a, float(cv @ hv) - b - a)


def is_cohomologous_to_constant(graph: WeightedDigraph, weight, tol: float = 1e-10) -> bool:
    """True iff every cycle mean of ``weight`` is the same (Livšic criterion for locally constant data)."""
    w = np.asarray(weight, dtype=np.float64)
    hi, _ = max_mean_cycle(graph, w)
    lo, _ = min_mean_cycle(graph, w)
    return hi - lo <= tol


def rotation_interval(graph: WeightedDigraph, coordinate: int = 0) -> tuple[Fraction, Fraction]:
    """Exact endpoints of one coordinate's rotation range (witness cycles are exact)."""
    col = graph.phi_float[:, coordinate]
    _, lo = min_mean_cycle(graph, col)
    _, hi = max_mean_cycle(graph, col)
    return lo.rotation_vector[coordinate], hi.rotation_vector[coordinate]
