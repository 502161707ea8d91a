"""Small named systems and seeded random problem generators."""
from __future__ import annotations

from fractions import Fraction
from typing import Iterator

import numpy as np

from .sft import (
    LocallyConstantFn,
    NotTransitiveError,
    Problem,
    SftError,
    SftSpec,
    WeightedDigraph,
    build_graph,
)


def full_shift(alphabet: int) -> SftSpec:
    return SftSpec(alphabet)


def golden_mean() -> SftSpec:
    """Two symbols, the word ``1,1`` forbidden."""
    return SftSpec(2, ((1, 1), (1, 0)))


def three_shift_alternation() -> Problem:
    """Full 3-shift; potential 1 on the words ``1,2`` and ``2,1``, constraint the indicator of [0].

    The fixed point at 0 has rotation 1 and value 0; the orbit alternating
    1 and 2 has rotation 0 and value 1; beta(h) = 1 - h on [0, 1].
    """
    spec = SftSpec(3)
    A = LocallyConstantFn.potential(3, 1, {(1, 2): 1.0, (2, 1): 1.0})
    phi = LocallyConstantFn.cylinder_indicator(3, (0,))
    return Problem(spec, A, phi)


def two_shift(potential: dict | None = None, depth: int = 0, constraint_word=(0,)) -> Problem:
    """Full 2-shift with the indicator of ``[constraint_word]`` as constraint."""
    A = LocallyConstantFn.potential(2, depth, potential or {})
    phi = LocallyConstantFn.cylinder_indicator(2, constraint_word)
    return Problem(SftSpec(2), A, phi)


def _random_spec(rng: np.random.Generator, alphabet: int) -> SftSpec:
    while True:
        if rng.random() < 0.4:
            return SftSpec(alphabet)
        m = rng.random((alphabet, alphabet)) < 0.7
        try:
            spec = SftSpec(alphabet, tuple(tuple(bool(x) for x in row) for row in m))
        except SftError:
            continue
        if spec.essential_symbols:
            return spec


def random_rational(rng: np.random.Generator, max_den: int = 4, span: int = 2) -> Fraction:
    q = int(rng.integers(1, max_den + 1))
    return Fraction(int(rng.integers(-span * q, span * q + 1)), q)


def random_problem(
    rng: np.random.Generator,
    dim: int = 1,
    max_alphabet: int = 4,
    max_depth: int = 2,
    max_edges: int = 60,
    max_den: int = 4,
    sparse: bool = True,
) -> tuple[Problem, WeightedDigraph]:
    """A random transitive instance whose graph has at most ``max_edges`` edges.

    Potential values are uniform in [-1, 1]; constraint values are small
    rationals.  ``sparse`` sets most words to the defaults, as in hand-written
    specs.
    """
    while True:
        alphabet = int(rng.integers(2, max_alphabet + 1))
        spec = _random_spec(rng, alphabet)
        dA = int(rng.integers(0, max_depth + 1))
        dphi = int(rng.integers(0, max_depth + 1))
        wordsA = spec.allowed_words(dA + 1)
        wordsP = spec.allowed_words(dphi + 1)
        if len(spec.allowed_words(max(1, dA, dphi) + 1)) > max_edges:
            continue
        keepA = [w for w in wordsA if not sparse or rng.random() < 0.6]
        keepP = [w for w in wordsP if not sparse or rng.random() < 0.6]
        A = LocallyConstantFn.potential(
            alphabet, dA, {w: float(rng.uniform(-1, 1)) for w in keepA}, default=float(rng.uniform(-1, 1))
        )
        phi = LocallyConstantFn.constraint(
            alphabet,
            dphi,
            {w: tuple(random_rational(rng, max_den) for _ in range(dim)) for w in keepP},
            default=tuple(random_rational(rng, max_den) for _ in range(dim)),
            dim=dim,
        )
        problem = Problem(spec, A, phi)
        try:
            graph = problem.graph()
        except (SftError, NotTransitiveError):
            continue
        if graph.n_edges > max_edges:
            continue
        return problem, graph


def random_problems(seed: int, count: int, **kw) -> Iterator[tuple[Problem, WeightedDigraph]]:
    rng = np.random.default_rng(seed)
    for _ in range(count):
        yield random_problem(rng, **kw)


def graph_of(problem: Problem) -> WeightedDigraph:
    return build_graph(problem.spec, problem.potential, problem.constraint)
