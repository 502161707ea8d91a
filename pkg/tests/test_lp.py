import itertools
from fractions import Fraction

import numpy as np
import pytest
from scipy.optimize import linprog

from relmax.cycles import Cycle, cycle_measure, enumerate_simple_cycles
from relmax.edge_measure import StationaryEdgeMeasure
from relmax.instances import random_problems, two_shift
from relmax.lp import (
    Status,
    decompose_into_cycles,
    markov_extension,
    maximizing_face_extents,
    recompose,
    solve_beta_primal,
)
from relmax.simplex import LpStatus, linprog_min, simplex_max


def cycle_combination_beta(graph, h):
    """max sum lam mean_A s.t. sum lam rot = h, lam >= 0, sum lam = 1 over simple cycles."""
    cycles = enumerate_simple_cycles(graph)
    c = -np.array([cy.mean_potential for cy in cycles])
    A = np.vstack([np.ones(len(cycles)), np.array([[float(x) for x in cy.rotation_vector] for cy in cycles]).T])
    b = np.concatenate([[1.0], np.atleast_1d(h)])
    res = linprog(c, A_eq=A, b_eq=b, bounds=(0, None), method="highs")
    return None if res.status == 2 else -res.fun


def test_simplex_small():
    res = simplex_max([1, 1], [[1, 2], [3, 1]], [4, 6])
    assert res.status is LpStatus.OPTIMAL
    assert np.allclose(res.x, [1.6, 1.2]) and res.value == pytest.approx(2.8)


def test_simplex_infeasible_and_unbounded():
    assert simplex_max([1], [[1], [1]], [1, 2]).status is LpStatus.INFEASIBLE
    assert simplex_max([1, 0], [[1, -1]], [0]).status is LpStatus.UNBOUNDED


def test_simplex_against_scipy():
    rng = np.random.default_rng(0)
    for _ in range(30):
        m, n = 4, 9
        A = rng.uniform(-1, 1, (m, n))
        x0 = rng.uniform(0, 1, n)
        b = A @ x0
        c = rng.uniform(-1, 1, n)
        ours = simplex_max(np.append(c, 0), np.hstack([A, np.zeros((m, 1))]), b)
        ref = linprog(-c, A_eq=A, b_eq=b, bounds=[(0, 5)] * n, method="highs")
        box = simplex_max(np.concatenate([c, np.zeros(n)]), np.block([[A, np.zeros((m, n))], [np.eye(n), np.eye(n)]]), np.concatenate([b, 5 * np.ones(n)]))
        assert box.value == pytest.approx(-ref.fun, abs=1e-9)
        assert ours.status in (LpStatus.OPTIMAL, LpStatus.UNBOUNDED)


def test_linprog_min_bounds():
    res = linprog_min([1, -1], A_ub=[[1, 1]], b_ub=[3], bounds=[(-2, None), (None, 4)])
    ref = linprog([1, -1], A_ub=[[1, 1]], b_ub=[3], bounds=[(-2, None), (None, 4)], method="highs")
    assert res.value == pytest.approx(ref.fun, abs=1e-12)
    free = linprog_min([1], A_eq=[[1]], b_eq=[-3], bounds=[(None, None)])
    assert free.x[0] == pytest.approx(-3)


def test_example_values(three_shift):
    sol = solve_beta_primal(three_shift, 1)
    assert sol.optimal and sol.value == pytest.approx(0, abs=1e-12)
    assert list(sol.measure.support()) == [three_shift.edge_index[(0, 0)]]
    sol = solve_beta_primal(three_shift, 0)
    assert sol.value == pytest.approx(1, abs=1e-12)
    assert set(sol.measure.support()) == {three_shift.edge_index[(1, 2)], three_shift.edge_index[(2, 1)]}
    assert solve_beta_primal(three_shift, 0.5).value == pytest.approx(0.5, abs=1e-12)
    assert solve_beta_primal(three_shift, 1.5).status is Status.INFEASIBLE


def test_objective_equals_constraint():
    p = two_shift({(0,): 1.0})
    g = p.graph()
    for h in np.linspace(0, 1, 7):
        assert solve_beta_primal(g, h).value == pytest.approx(h, abs=1e-12)


def test_primal_matches_cycle_oracle(random_graphs):
    rng = np.random.default_rng(1)
    for g in random_graphs:
        rots = [float(c.rotation_vector[0]) for c in enumerate_simple_cycles(g)]
        for h in rng.uniform(min(rots) - 0.2, max(rots) + 0.2, 4):
            ref = cycle_combination_beta(g, h)
            sol = solve_beta_primal(g, h)
            if ref is None:
                assert not sol.optimal
                continue
            assert sol.optimal and sol.value == pytest.approx(ref, abs=1e-8)
            assert sol.measure.is_valid(g)
            assert sol.measure.rotation_vector[0] == pytest.approx(h, abs=1e-9)
            assert sol.value == pytest.approx(sol.measure.potential_integral, abs=1e-12)


def test_primal_two_dimensional(random_graphs_2d):
    for g in random_graphs_2d:
        cycles = enumerate_simple_cycles(g)
        h = np.mean([[float(x) for x in c.rotation_vector] for c in cycles], axis=0)
        ref = cycle_combination_beta(g, h)
        assert solve_beta_primal(g, h).value == pytest.approx(ref, abs=1e-8)


def test_concavity_and_supergradient(random_graphs):
    rng = np.random.default_rng(2)
    for g in random_graphs[:20]:
        rots = [float(c.rotation_vector[0]) for c in enumerate_simple_cycles(g)]
        lo, hi = min(rots), max(rots)
        h1, h2 = rng.uniform(lo, hi, 2)
        t = rng.uniform()
        b = lambda h: solve_beta_primal(g, h).value
        assert b(t * h1 + (1 - t) * h2) >= t * b(h1) + (1 - t) * b(h2) - 1e-8
        sol = solve_beta_primal(g, h1)
        for hp in rng.uniform(lo, hi, 5):
            assert b(hp) <= sol.value + float(sol.dual_multipliers[0]) * (hp - h1) + 1e-8


def test_decompose_simple_cases():
    g = two_shift().graph()
    loop = Cycle.from_edges(g, [g.edge_index[(0, 0)]])
    parts = decompose_into_cycles(cycle_measure(loop, g), g)
    assert len(parts) == 1 and parts[0][0] == loop and parts[0][1] == pytest.approx(1.0)
    w = np.zeros(g.n_edges)
    w[g.edge_index[(0, 0)]] = 0.5
    w[g.edge_index[(1, 1)]] = 0.5
    parts = decompose_into_cycles(StationaryEdgeMeasure.from_weights(g, w), g)
    assert sorted((c.vertices, lam) for c, lam in parts) == [((0,), 0.5), ((1,), 0.5)]


def test_decompose_recompose(random_graphs):
    for g in random_graphs:
        sol = solve_beta_primal(g)
        parts = decompose_into_cycles(sol.measure, g)
        assert len(parts) <= g.n_edges
        assert sum(lam for _, lam in parts) == pytest.approx(1.0, abs=1e-12)
        assert np.max(np.abs(recompose(parts, g) - sol.measure.weights)) <= 1e-9


def test_decompose_rejects_invalid(three_shift):
    bad = StationaryEdgeMeasure.from_weights(three_shift, np.full(9, 0.5))
    with pytest.raises(ValueError):
        decompose_into_cycles(bad, three_shift)


def test_face_extents_examples(three_shift):
    g = two_shift().graph()
    assert np.allclose(maximizing_face_extents(g, 0.0), [[0.0, 1.0]])
    ext = maximizing_face_extents(three_shift, -2.0)
    assert np.allclose(ext, [[1.0, 1.0]])


def test_face_extents_against_enumeration(random_graphs):
    rng = np.random.default_rng(4)
    for g in random_graphs[:20]:
        c = float(rng.uniform(-2, 2))
        w = g.a - g.phi_float[:, 0] * c
        cycles = enumerate_simple_cycles(g)
        means = np.array([cy.mean(w) for cy in cycles])
        best = means.max()
        rots = [float(cy.rotation_vector[0]) for cy, m in zip(cycles, means) if m >= best - 1e-12]
        ext = maximizing_face_extents(g, c)
        assert ext[0, 0] == pytest.approx(min(rots), abs=1e-8)
        assert ext[0, 1] == pytest.approx(max(rots), abs=1e-8)


def test_markov_extension_examples():
    g = two_shift().graph()
    loop = Cycle.from_edges(g, [g.edge_index[(1, 1)]])
    mc = markov_extension(cycle_measure(loop, g), g)
    assert mc.P.tolist() == [[1.0]]
    two = Cycle.from_edges(g, [g.edge_index[(0, 1)], g.edge_index[(1, 0)]])
    mc = markov_extension(cycle_measure(two, g), g)
    assert mc.P.tolist() == [[0.0, 1.0], [1.0, 0.0]]


def test_markov_stationarity(random_graphs):
    for g in random_graphs:
        sol = solve_beta_primal(g)
        w = sol.measure.weights + 0.0
        mc = markov_extension(sol.measure, g)
        assert np.max(np.abs(mc.stationary @ mc.P - mc.stationary)) <= 1e-9
        assert np.allclose(mc.P.sum(axis=1), 1.0)
