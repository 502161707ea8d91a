from fractions import Fraction

import numpy as np
import pytest

from relmax.beta_alpha import (
    MaxItersError,
    NotInteriorError,
    alpha,
    alpha_gradient,
    beta,
    beta_dual,
    fenchel_check,
    is_cohomologous_to_constant,
    rotation_interval,
    rotation_set,
)
from relmax.cycles import enumerate_simple_cycles
from relmax.instances import random_problems, two_shift
from relmax.lp import solve_beta_primal
from relmax.sft import LocallyConstantFn, SftSpec, add_coboundary, build_graph


def test_rotation_set_examples(three_shift):
    g = two_shift().graph()
    assert rotation_set(g).exact_polygon == ((Fraction(0),), (Fraction(1),))
    assert rotation_set(three_shift).exact_polygon == ((Fraction(0),), (Fraction(1),))
    const = build_graph(
        SftSpec(3),
        LocallyConstantFn.potential(3, 0),
        LocallyConstantFn.constraint(3, 1, {}, default=(Fraction(2, 3), Fraction(-1)), dim=2),
    )
    assert rotation_set(const).exact_polygon == ((Fraction(2, 3), Fraction(-1)),)


def test_rotation_set_exact_vs_sampled(random_graphs_2d):
    for g in random_graphs_2d:
        exact = rotation_set(g)
        sampled = rotation_set(g, mode="sampled")
        for s in sampled.support_samples:
            best = max(float(np.dot(s.direction, [float(x) for x in v])) for v in exact.exact_polygon)
            assert s.value == pytest.approx(best, abs=1e-12)
            assert exact.contains(s.witness)
        rots = {c.rotation_vector for c in enumerate_simple_cycles(g)}
        assert set(exact.exact_polygon) <= rots


def test_rotation_set_exact_needs_small_dim():
    g = next(random_problems(seed=1, count=1, dim=3))[1]
    with pytest.raises(ValueError):
        rotation_set(g)


def test_alpha_example(three_shift):
    for c, want in [(-3, -3), (-2, -2), (-1, -1), (0, -1), (1, -1), (-1.5, -1.5), (0.5, -1)]:
        assert alpha(three_shift, c) == pytest.approx(want, abs=1e-12)
    assert alpha(two_shift().graph(), 0.0) == 0.0


def test_alpha_against_enumeration(random_graphs):
    rng = np.random.default_rng(0)
    for g in random_graphs:
        cycles = enumerate_simple_cycles(g)
        for c in rng.uniform(-3, 3, 3):
            ref = min(c * float(cy.rotation_vector[0]) - cy.mean_potential for cy in cycles)
            assert alpha(g, c) == pytest.approx(ref, abs=1e-12)


def test_beta_dual_examples(three_shift):
    g = two_shift({(0,): 1.0}).graph()
    assert beta_dual(g, Fraction(1, 3)) == pytest.approx(1 / 3, abs=1e-6)
    assert beta_dual(three_shift, 0.5) == pytest.approx(0.5, abs=1e-6)


def test_beta_dual_refuses_boundary(three_shift):
    with pytest.raises(NotInteriorError):
        beta_dual(three_shift, 1.0)


def test_beta_dual_max_iters(three_shift):
    with pytest.raises(MaxItersError) as err:
        beta_dual(three_shift, 0.3, tol=-1.0, max_iters=3)
    assert err.value.lower <= err.value.upper + 1e-9


def test_beta_dual_two_dimensional(random_graphs_2d):
    checked = 0
    for g in random_graphs_2d:
        rs = rotation_set(g)
        if len(rs.exact_polygon) < 3:
            continue
        h = np.mean([[float(x) for x in v] for v in rs.exact_polygon], axis=0)
        assert beta_dual(g, h) == pytest.approx(solve_beta_primal(g, h).value, abs=1e-6)
        checked += 1
    assert checked > 0


def test_alpha_gradient_examples(three_shift):
    g = two_shift().graph()
    assert alpha_gradient(g, 1.0) == ((Fraction(0),), True)
    assert alpha_gradient(g, 0.0)[1] is False
    assert alpha_gradient(three_shift, -2.0) == ((Fraction(1),), True)


def test_fenchel_examples(three_shift):
    rec = fenchel_check(three_shift, 0, 0)
    assert (rec.beta_h, rec.alpha_c) == pytest.approx((1.0, -1.0)) and abs(rec.gap) <= 1e-12


def test_fenchel_random(random_graphs):
    rng = np.random.default_rng(3)
    for g in random_graphs:
        lo, hi = (float(x) for x in rotation_interval(g))
        for h in rng.uniform(lo, hi, 2):
            for c in rng.uniform(-3, 3, 3):
                assert fenchel_check(g, h, c).gap >= -1e-9
            y = solve_beta_primal(g, h).dual_multipliers
            assert fenchel_check(g, h, y).gap <= 1e-6


def test_livsic_examples():
    spec = SftSpec(2)
    g = LocallyConstantFn.potential(2, 0, {(0,): 0.7})
    f = add_coboundary(LocallyConstantFn.potential(2, 0), g, 0.25)
    graph = build_graph(spec, f, LocallyConstantFn.cylinder_indicator(2, (0,)))
    assert is_cohomologous_to_constant(graph, graph.a)
    assert not is_cohomologous_to_constant(graph, graph.phi_float[:, 0])


def test_alpha_lipschitz_and_concave(random_graphs):
    rng = np.random.default_rng(6)
    for g in random_graphs:
        c1, c2 = rng.uniform(-3, 3, 2)
        a1, a2 = alpha(g, c1), alpha(g, c2)
        assert abs(a1 - a2) <= g.phi_norm * abs(c1 - c2) + 1e-9
        assert alpha(g, (c1 + c2) / 2) >= (a1 + a2) / 2 - 1e-9
        B = g.a + rng.uniform(-0.5, 0.5, g.n_edges)
        gb = g.with_weights(a=B)
        assert abs(alpha(g, c1) - alpha(gb, c1)) <= np.max(np.abs(B - g.a)) + 1e-9
        t = rng.uniform()
        gm = g.with_weights(a=t * g.a + (1 - t) * B)
        assert alpha(gm, c1) >= t * alpha(g, c1) + (1 - t) * alpha(gb, c1) - 1e-9
