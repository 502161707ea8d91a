"""Both kernel backends must give identical results."""
import numpy as np
import pytest

from relmax import _kernels_py
from relmax._backend import available, kernels
from relmax.instances import random_problems

BACKENDS = available()


def test_selected_backend_is_available():
    assert kernels.NAME in BACKENDS


@pytest.fixture(scope="module")
def graphs():
    return [g for _, g in random_problems(seed=21, count=12)]


def _pairs():
    if "cython" not in BACKENDS:
        pytest.skip("compiled kernels not built")
    return BACKENDS["python"], BACKENDS["cython"]


def test_karp_table(graphs):
    py, cy = _pairs()
    rng = np.random.default_rng(0)
    for g in graphs:
        w = rng.uniform(-1, 1, g.n_edges)
        D1, p1 = py.karp_table(g.n_vertices, g.src, g.dst, w)
        D2, p2 = cy.karp_table(g.n_vertices, g.src, g.dst, w)
        assert np.array_equal(D1, D2) and np.array_equal(p1, p2)


def test_longest_walks(graphs):
    py, cy = _pairs()
    for g in graphs:
        w = g.a - g.a.max()
        assert np.array_equal(
            py.longest_walks(g.n_vertices, g.src, g.dst, w, 0, g.n_vertices),
            cy.longest_walks(g.n_vertices, g.src, g.dst, w, 0, g.n_vertices),
        )


def test_follow_predecessors(graphs):
    py, cy = _pairs()
    for g in graphs:
        pred = np.array([int(g.in_edges[v][-1]) for v in range(g.n_vertices)], dtype=np.int64)
        assert np.array_equal(py.follow_predecessors(pred, g.src, 0, 500), cy.follow_predecessors(pred, g.src, 0, 500))


def test_periodic_dp(graphs):
    py, cy = _pairs()
    for g in graphs:
        d1 = g.phi_num[:, 0] * 3 - g.Q
        zero = np.zeros(g.n_edges, dtype=np.int64)
        B = 6 * int(np.abs(d1).max())
        for store in (False, True):
            c1, p1 = py.periodic_dp(0, 12, g.n_vertices, g.src, g.dst, g.a, d1, zero, B, 0, store)
            c2, p2 = cy.periodic_dp(0, 12, g.n_vertices, g.src, g.dst, g.a, d1, zero, B, 0, store)
            assert np.array_equal(c1, c2) and np.array_equal(p1, p2)


def test_periodic_dp_two_dimensional(random_graphs_2d):
    py, cy = _pairs()
    for g in random_graphs_2d[:5]:
        d1 = g.phi_num[:, 0] * 2 - g.Q
        d2 = g.phi_num[:, 1] * 2
        B1, B2 = 4 * int(np.abs(d1).max()), 4 * int(np.abs(d2).max())
        c1, p1 = py.periodic_dp(0, 8, g.n_vertices, g.src, g.dst, g.a, d1, d2, B1, B2, True)
        c2, p2 = cy.periodic_dp(0, 8, g.n_vertices, g.src, g.dst, g.a, d1, d2, B1, B2, True)
        assert np.array_equal(c1, c2) and np.array_equal(p1, p2)


def test_min_return_deviation():
    py, cy = _pairs()
    rng = np.random.default_rng(3)
    steps = rng.integers(0, 2, 5000)
    prefix = np.zeros((5001, 2))
    prefix[1:, 0] = np.cumsum(steps - 0.5)
    prefix[1:, 1] = np.cumsum(rng.normal(size=5000))
    visits = np.flatnonzero(steps == 1).astype(np.int64)
    a = py.min_return_deviation(prefix, visits, 100, 300)
    b = cy.min_return_deviation(prefix, visits, 100, 300)
    assert np.allclose(a, b, rtol=0, atol=1e-12)


def test_min_return_deviation_no_return():
    prefix = np.zeros((11, 1))
    visits = np.array([9], dtype=np.int64)
    out = _kernels_py.min_return_deviation(prefix, visits, 1, 5)
    assert np.isinf(out[0])
