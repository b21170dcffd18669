"""Shared fixtures: converged shapes are expensive, so solve each once."""

import sys

import numpy as np
import pytest

from gsod import fixture_a, fixture_b, make_constants
from gsod.dirichlet import default_basis
from gsod.euler import assemble
from gsod.harness import Sweep
from gsod.shape import solve_shape


@pytest.fixture(scope="session")
def prof_a():
    return fixture_a()


@pytest.fixture(scope="session")
def prof_b():
    return fixture_b()


@pytest.fixture(scope="session")
def basis():
    return default_basis()


def _solved(profile, R, eps):
    k = make_constants(profile, R, eps)
    state = solve_shape(k, profile)
    bundle, field = assemble(state, k, profile)
    return k, state, bundle, field


@pytest.fixture(scope="session")
def solved_a(prof_a):
    """``(consts, state, bundle, field)`` for fixture A at eps = 0.01."""
    return _solved(prof_a, 2.0, 0.01)


@pytest.fixture(scope="session")
def solved_b(prof_b):
    return _solved(prof_b, 1.0, 0.01)


@pytest.fixture(scope="session")
def sweep_a():
    return Sweep("A")


@pytest.fixture(scope="session")
def sweep_b():
    return Sweep("B")


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.summary_lines():
        terminalreporter.write_line(line)
