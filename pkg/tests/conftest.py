from __future__ import annotations

import numpy as np
import pytest

from relmax.instances import golden_mean, random_problems, three_shift_alternation, two_shift
from relmax.sft import LocallyConstantFn, Problem, build_graph


@pytest.fixture(scope="session")
def three_shift():
    return three_shift_alternation().graph()


@pytest.fixture(scope="session")
def two_shift_loop():
    """2-shift, potential 1 on edges leaving vertex 0, constraint the indicator of [0]."""
    return two_shift({(0,): 1.0}).graph()


@pytest.fixture(scope="session")
def golden():
    spec = golden_mean()
    A = LocallyConstantFn.potential(2, 0, {(0,): 0.3})
    phi = LocallyConstantFn.cylinder_indicator(2, (0,))
    return build_graph(spec, A, phi)


@pytest.fixture(scope="session")
def random_graphs():
    return [g for _, g in random_problems(seed=11, count=40)]


@pytest.fixture(scope="session")
def random_graphs_2d():
    return [g for _, g in random_problems(seed=12, count=15, dim=2, max_edges=30)]


def pytest_make_parametrize_id(config, val, argname):
    if isinstance(val, Problem):
        return f"{argname}"
    return None


CRITERION_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if CRITERION_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(CRITERION_LINES, key=lambda s: int(s.split("criterion")[1].split(":")[0])):
            terminalreporter.write_line(line)
