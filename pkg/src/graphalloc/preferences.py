"""Preference vectors and the sampling schemes the benchmark runs on.

A preference is a point on the probability simplex: non-negative components
summing to one, one weight per objective. Evaluation uses a deterministic
simplex lattice; the ordering-score protocol sweeps one component at a time
while splitting the remainder along a random direction.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, InvalidPreference, NonPositiveAlpha

__all__ = [
    "validate_preference",
    "das_dennis",
    "lattice_size",
    "default_divisions",
    "sample_dirichlet",
    "SweepSet",
    "build_sweeps",
]

SIMPLEX_TOL = 1e-9


def validate_preference(preference) -> np.ndarray:
    """Check simplex membership: components in [0, 1], sum within 1e-9 of 1."""
    preference = np.asarray(preference, dtype=np.float64)
    if preference.ndim != 1 or preference.shape[0] < 2:
        raise DimensionMismatch(
            f"preference must be a vector of at least 2 weights, got shape {preference.shape}"
        )
    if np.any(~np.isfinite(preference)):
        raise InvalidPreference("preference contains non-finite components")
    if np.any(preference < 0.0) or np.any(preference > 1.0):
        raise InvalidPreference(f"preference components must lie in [0, 1], got {preference}")
    total = float(preference.sum())
    if abs(total - 1.0) > SIMPLEX_TOL:
        raise InvalidPreference(f"preference components sum to {total}, expected 1")
    return preference


def lattice_size(num_objectives: int, divisions: int) -> int:
    """Number of lattice points: C(divisions + N - 1, N - 1)."""
    return math.comb(divisions + num_objectives - 1, num_objectives - 1)


def das_dennis(num_objectives: int, divisions: int) -> np.ndarray:
    """Uniform simplex lattice with components k / divisions.

    Rows come out in lexicographic order of the integer compositions, so the
    first weight ascends from 0 to 1; the output shape is
    (C(divisions + N - 1, N - 1), N) and rows are exact to within one float
    division each.
    """
    if num_objectives < 2:
        raise DimensionMismatch("need at least 2 objectives for a preference lattice")
    if divisions < 1:
        raise InvalidPreference(f"divisions must be >= 1, got {divisions}")

    rows: list[tuple[int, ...]] = []

    def compose(prefix: list[int], remaining: int, slots: int) -> None:
        if slots == 1:
            rows.append(tuple(prefix) + (remaining,))
            return
        for k in range(remaining + 1):
            compose(prefix + [k], remaining - k, slots - 1)

    compose([], divisions, num_objectives)
    return np.array(rows, dtype=np.float64) / float(divisions)


# Lattice divisions per objective count used by the default evaluation
# protocol. Chosen so the point count stays near 100 (2 objectives get the
# full 100-point sweep; beyond 6 the largest lattice within 130 points wins).
_DEFAULT_DIVISIONS = {2: 99, 3: 12, 4: 7, 5: 5, 6: 4}
_MAX_DEFAULT_POINTS = 130


def default_divisions(num_objectives: int) -> int:
    if num_objectives < 2:
        raise DimensionMismatch("need at least 2 objectives")
    if num_objectives in _DEFAULT_DIVISIONS:
        return _DEFAULT_DIVISIONS[num_objectives]
    divisions = 1
    while lattice_size(num_objectives, divisions + 1) <= _MAX_DEFAULT_POINTS:
        divisions += 1
    return divisions


def sample_dirichlet(
    num_objectives: int, count: int, alpha: float, rng: np.random.Generator
) -> np.ndarray:
    """(count, N) draws from a symmetric Dirichlet with concentration alpha."""
    if alpha <= 0:
        raise NonPositiveAlpha(f"alpha must be positive, got {alpha}")
    if num_objectives < 2:
        raise DimensionMismatch("need at least 2 objectives")
    return rng.dirichlet(np.full(num_objectives, float(alpha)), size=count)


@dataclass
class SweepSet:
    """Preference sweeps for the ordering-score protocol.

    ``sweeps[i][j]`` is an (n_step, N) array in which component ``i`` walks
    0, 1/(n_step-1), ..., 1 while the other components share the remainder
    along one random simplex direction drawn per repetition ``j``.
    """

    num_objectives: int
    n_samp: int
    n_step: int
    alpha: float
    sweeps: list[list[np.ndarray]]


def build_sweeps(
    num_objectives: int,
    n_samp: int,
    n_step: int,
    alpha: float,
    rng: np.random.Generator,
) -> SweepSet:
    """Draw the sweep preferences for every (objective, repetition) pair.

    With two objectives the remainder direction is the single point [1.0], so
    no random numbers are consumed and the sweeps are identical for every
    alpha. Each repetition draws exactly one direction, shared across the
    n_step points of that sweep.
    """
    if alpha <= 0:
        raise NonPositiveAlpha(f"alpha must be positive, got {alpha}")
    if n_samp < 1 or n_step < 2:
        raise InvalidPreference(
            f"need n_samp >= 1 and n_step >= 2, got n_samp={n_samp} n_step={n_step}"
        )
    n = num_objectives
    if n < 2:
        raise DimensionMismatch("need at least 2 objectives")

    sweeps: list[list[np.ndarray]] = []
    for i in range(n):
        per_objective = []
        for _ in range(n_samp):
            if n == 2:
                direction = np.ones(1)
            else:
                direction = rng.dirichlet(np.full(n - 1, float(alpha)))
            block = np.empty((n_step, n), dtype=np.float64)
            others = [k for k in range(n) if k != i]
            for row, k in enumerate(range(n_step)):
                w_i = k / (n_step - 1)
                block[row, i] = w_i
                block[row, others] = (1.0 - w_i) * direction
            per_objective.append(block)
        sweeps.append(per_objective)
    return SweepSet(n, n_samp, n_step, alpha, sweeps)
