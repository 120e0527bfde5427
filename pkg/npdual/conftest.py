"""Pytest configuration shared by every npdual test package: the named instances and random generators."""
from typing import Callable, Optional, Sequence

import numpy as np
import pytest

from npdual.model import (HypothesisFamily, ReferenceMeasure, Side,
                          TestingProblem, validate_problem)


def make_problem(weights: Sequence[float], null: Sequence[Sequence[float]], alt: Sequence[Sequence[float]],
                 alpha, atoms: Optional[Sequence[str]] = None, generalized: bool = False) -> TestingProblem:
    """Build and validate a problem from plain lists."""
    if atoms is None:
        atoms = [f'w{index + 1}' for index in range(len(weights))]
    problem = TestingProblem(
        reference=ReferenceMeasure(atoms=tuple(atoms), weights=np.asarray(weights, dtype=float)),
        null_family=HypothesisFamily(members=tuple(null), side=Side.NULL),
        alt_family=HypothesisFamily(members=tuple(alt), side=Side.ALTERNATIVE),
        alpha=alpha,
        generalized=generalized,
    )
    return validate_problem(problem)


def random_problem(rng: np.random.Generator, max_atoms: int = 12, max_null: int = 6, max_alt: int = 6,
                   alphas: Sequence[float] = (0.05, 0.1, 0.25, 0.5), null_count: Optional[int] = None,
                   alt_count: Optional[int] = None, atoms: Optional[int] = None) -> TestingProblem:
    """Draw a random valid problem: Dirichlet reference weights and Dirichlet member distributions."""
    size = atoms if atoms is not None else int(rng.integers(2, max_atoms + 1))
    weights = rng.dirichlet(np.ones(size))
    weights = weights / weights.sum()

    def members(count: int) -> list:
        result = []
        for _ in range(count):
            probabilities = rng.dirichlet(np.full(size, 0.7))
            result.append(probabilities / weights)
        return result

    null = members(null_count if null_count is not None else int(rng.integers(1, max_null + 1)))
    alt = members(alt_count if alt_count is not None else int(rng.integers(1, max_alt + 1)))
    alpha = float(rng.choice(alphas))
    return make_problem(weights, null, alt, alpha)


@pytest.fixture
def instance_t1() -> TestingProblem:
    """One atom, identical hypotheses."""
    return make_problem([1.0], [[1.0]], [[1.0]], 0.3)


@pytest.fixture
def instance_t2() -> TestingProblem:
    """Two atoms, null and alternative with disjoint supports."""
    return make_problem([0.5, 0.5], [[2.0, 0.0]], [[0.0, 2.0]], 0.1)


@pytest.fixture
def instance_d1() -> TestingProblem:
    """Three atoms, simple versus simple with a randomized boundary atom."""
    third = 1.0 / 3.0
    return make_problem([third, third, third], [[1.5, 0.9, 0.6]], [[0.6, 0.9, 1.5]], 0.3, atoms=['a', 'b', 'c'])


@pytest.fixture
def instance_two_alt() -> TestingProblem:
    """Two atoms, uniform null against two point-mass alternatives."""
    return make_problem([0.5, 0.5], [[1.0, 1.0]], [[2.0, 0.0], [0.0, 2.0]], 0.25, atoms=['a', 'b'])


@pytest.fixture
def rng() -> np.random.Generator:
    """Seeded generator so every run draws the same instances."""
    return np.random.default_rng(20240611)


@pytest.fixture
def problem_factory() -> Callable[..., TestingProblem]:
    """Expose random_problem to tests."""
    return random_problem
