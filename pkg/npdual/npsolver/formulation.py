"""Linear programs behind the max-min testing problem.

Variables are the reference masses psi(w) = R(w) phi(w) for every atom followed by the scalar t.
Working with psi puts the reduced cost of an atom on the density scale, Z_Q(w) - mix(w), so atoms
of tiny reference weight are priced like any other. Rows come in three blocks, in this order: one
per alternative member (t - sum_w Z_Qj(w) psi(w) <= 0), one per null member
(sum_w Z_Pi(w) psi(w) <= alpha_i) and one per atom (psi(w) <= R(w)). Keeping the unit bounds as
rows makes their multipliers, (Z_Q - mix)^+ at optimality, available to the caller.
"""
from dataclasses import dataclass

import numpy as np

from npdual.model import TestingProblem
from npdual.simplex import LinearProgram, RowSense


@dataclass(frozen=True)
class RowBlocks:
    """Slices of the row multipliers belonging to each block."""

    alternative: slice
    null: slice
    unit: slice


def row_blocks(problem: TestingProblem) -> RowBlocks:
    """Where each block of rows sits in build_maxmin_lp."""
    alt_count, null_count = len(problem.alt_family), len(problem.null_family)
    return RowBlocks(
        alternative=slice(0, alt_count),
        null=slice(alt_count, alt_count + null_count),
        unit=slice(alt_count + null_count, alt_count + null_count + problem.size),
    )


def phi_from_masses(problem: TestingProblem, masses: np.ndarray) -> np.ndarray:
    """phi(w) = psi(w) / R(w)."""
    return np.asarray(masses, dtype=float) / problem.reference.weights


def build_maxmin_lp(problem: TestingProblem) -> LinearProgram:
    """maximize t subject to min_j E^R[phi Z_Qj] >= t, sizes within the levels and 0 <= phi <= 1."""
    atoms = problem.size
    alt_count, null_count = len(problem.alt_family), len(problem.null_family)

    alternative = np.hstack([-problem.alt_family.matrix, np.ones((alt_count, 1))])
    null = np.hstack([problem.null_family.matrix, np.zeros((null_count, 1))])
    unit = np.hstack([np.eye(atoms), np.zeros((atoms, 1))])

    objective = np.zeros(atoms + 1)
    objective[-1] = 1.0
    lower = np.zeros(atoms + 1)
    lower[-1] = -np.inf

    return LinearProgram(
        objective=objective,
        matrix=np.vstack([alternative, null, unit]),
        senses=(RowSense.LE,) * (alt_count + null_count + atoms),
        rhs=np.concatenate([np.zeros(alt_count), problem.levels, problem.reference.weights]),
        lower=lower,
    )


def build_middle_lp(problem: TestingProblem, alt_weights: np.ndarray) -> LinearProgram:
    """maximize E^R[phi Z_Q] for the mixed alternative Z_Q = sum_j q_j Z_Qj over the size-feasible tests.

    The variables are the masses psi = R phi, bounded by R.
    """
    return LinearProgram(
        objective=alt_weights @ problem.alt_family.matrix,
        matrix=problem.null_family.matrix,
        senses=(RowSense.LE,) * len(problem.null_family),
        rhs=problem.levels,
        upper=problem.reference.weights,
    )
