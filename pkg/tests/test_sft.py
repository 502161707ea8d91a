from fractions import Fraction

import itertools

import numpy as np
import pytest

from relmax.cycles import enumerate_simple_cycles, max_mean_cycle
from relmax.instances import golden_mean, random_problems
from relmax.sft import (
    LocallyConstantFn,
    NoCycleError,
    NotTransitiveError,
    SftSpec,
    SpecError,
    add_coboundary,
    build_graph,
    load_problem,
    parse_rational,
    validate_spec,
)


def test_two_shift_depth_zero_graph():
    A = LocallyConstantFn.potential(2, 0, {(0,): 1.0, (1,): 0.0})
    phi = LocallyConstantFn.cylinder_indicator(2, (0,))
    g = build_graph(SftSpec(2), A, phi)
    assert (g.n_vertices, g.n_edges) == (2, 4)
    for e, w in enumerate(g.edge_words):
        assert g.a[e] == (1.0 if w[0] == 0 else 0.0)


def test_three_shift_example_graph(three_shift):
    g = three_shift
    assert (g.n_vertices, g.n_edges) == (3, 9)
    ones = {g.edge_words[e] for e in range(g.n_edges) if g.a[e] == 1.0}
    assert ones == {(1, 2), (2, 1)}
    assert {g.edge_words[e] for e in range(g.n_edges) if g.phi[e] == (1,)} == {(0, 0), (0, 1), (0, 2)}


def test_upper_triangular_has_no_cycle():
    with pytest.raises(NoCycleError):
        SftSpec(3, ((0, 1, 1), (0, 0, 1), (0, 0, 0)))


def test_two_recurrent_classes_rejected():
    with pytest.raises(NotTransitiveError):
        SftSpec(2, ((1, 0), (0, 1)))


def test_validate_spec_reports_row():
    with pytest.raises(SpecError) as err:
        validate_spec({"alphabet": 2, "transitions": [[1, 1], [1]]})
    assert any("row 1" in p for p in err.value.problems)
    with pytest.raises(SpecError):
        validate_spec({"alphabet": 0})


def test_golden_mean_valid():
    spec = validate_spec({"alphabet": 2, "transitions": [[1, 1], [1, 0]]})
    g = build_graph(spec, LocallyConstantFn.potential(2, 0), LocallyConstantFn.cylinder_indicator(2, (0,)))
    assert g.strongly_connected and (g.n_vertices, g.n_edges) == (2, 3)
    assert len(enumerate_simple_cycles(g)) == 2


@pytest.mark.parametrize("text,value", [("1/2", Fraction(1, 2)), ("-3", Fraction(-3)), ("0.25", Fraction(1, 4)), (7, Fraction(7))])
def test_parse_rational(text, value):
    assert parse_rational(text) == value


@pytest.mark.parametrize("bad", ["1/0", "1/2.5", 0.5, True, "abc"])
def test_parse_rational_rejects(bad):
    with pytest.raises(ValueError):
        parse_rational(bad)


def test_load_problem_lists_every_violation():
    raw = {
        "alphabet": 2,
        "transitions": [[1, 1], [1, 0]],
        "potential": {"depth": 1, "words": {"1,1": 1.0, "0,x": 2.0}},
        "constraint": {"depth": 0, "dim": 1, "default": ["1/0"]},
    }
    with pytest.raises(SpecError) as err:
        load_problem(raw)
    assert len(err.value.problems) == 3


def test_load_problem_round_trip(three_shift):
    from relmax.instances import three_shift_alternation

    p = three_shift_alternation()
    q = load_problem(p.to_json())
    g = q.graph()
    assert np.array_equal(g.a, three_shift.a) and g.phi == three_shift.phi


def test_add_coboundary_identity_and_definition():
    f = LocallyConstantFn.potential(2, 1, {(0, 1): 0.5})
    zero = LocallyConstantFn.potential(2, 0)
    h = add_coboundary(f, zero, 0.0)
    assert all(h(w) == f(w) for w in itertools.product(range(2), repeat=2))
    g = LocallyConstantFn.potential(2, 0, {(0,): 1.0, (1,): 0.0})
    k = add_coboundary(LocallyConstantFn.potential(2, 0), g)
    assert k.depth == 1
    assert k((0, 1)) == (-1.0,) and k((1, 0)) == (1.0,) and k((0, 0)) == (0.0,)


def test_add_coboundary_dimension_mismatch():
    with pytest.raises(ValueError):
        add_coboundary(LocallyConstantFn.potential(2, 0), LocallyConstantFn.constraint(2, 0, dim=2))


def test_add_coboundary_exact_for_rationals():
    f = LocallyConstantFn.constraint(2, 0, {(0,): Fraction(1, 3)})
    g = LocallyConstantFn.constraint(2, 0, {(1,): Fraction(2, 7)})
    h = add_coboundary(f, g, Fraction(1, 2))
    assert h.is_exact


def test_coboundary_shifts_every_cycle_mean():
    rng = np.random.default_rng(0)
    for problem, graph in random_problems(seed=3, count=15, max_depth=1, max_edges=30):
        n = problem.spec.alphabet_size
        g = LocallyConstantFn.potential(n, 0, {(s,): float(rng.uniform(-1, 1)) for s in range(n)})
        A2 = add_coboundary(problem.potential, g, 0.375, spec=problem.spec)
        g2 = build_graph(problem.spec, A2, problem.constraint)
        for cyc in enumerate_simple_cycles(g2):
            word = cyc.word(g2)
            base = graph.lift_periodic_word(word)
            mean = sum(graph.a[e] for e in base) / len(base)
            assert abs(cyc.mean_potential - mean - 0.375) <= 1e-12


def test_birkhoff_sum_equivalence():
    rng = np.random.default_rng(5)
    for problem, graph in random_problems(seed=4, count=10):
        spec = problem.spec
        syms = spec.essential_symbols
        tried = 0
        while tried < 100:
            M = int(rng.integers(1, 9))
            word = [int(rng.choice(syms)) for _ in range(M)]
            if not spec.is_allowed(word + word[:1]):
                continue
            try:
                edges = graph.lift_periodic_word(word)
            except ValueError:
                continue
            tried += 1
            ext = word * (M + 4)
            SA = sum(problem.potential(ext[j:])[0] for j in range(M))
            Sphi = sum(problem.constraint(ext[j:])[0] for j in range(M))
            assert abs(SA - sum(graph.a[e] for e in edges)) <= 1e-12
            assert Sphi == sum(graph.phi[e][0] for e in edges)


def test_depth_lift_keeps_cycle_means():
    for problem, graph in random_problems(seed=8, count=10, max_edges=40):
        A = problem.potential.lift(problem.potential.depth + 1).restrict(problem.spec)
        g2 = build_graph(problem.spec, A, problem.constraint)
        assert abs(max_mean_cycle(g2)[0] - max_mean_cycle(graph)[0]) <= 1e-12


def test_graph_arrays_read_only(three_shift):
    with pytest.raises(ValueError):
        three_shift.a[0] = 5.0
