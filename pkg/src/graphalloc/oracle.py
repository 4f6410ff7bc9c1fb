"""Brute-force ground truth: feasible-set enumeration and ideal fronts.

Production vectors are feasible when every resource budget covers the demands
drawing on it and the total stays within the episode horizon (one action can
add at most one production unit per step). Enumerating the whole feasible set
is exponential in the number of demands, so a cheap cardinality guard refuses
oversized problems before any work happens; for everything else the set is
small enough to enumerate exactly and read the true Pareto front off it.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import ProblemConfig
from .errors import TooLarge
from .metrics import hypervolume, non_dominated_indices

__all__ = [
    "FeasibleSet",
    "IdealFront",
    "enumerate_feasible",
    "ideal_front",
    "DEFAULT_SIZE_LIMIT",
]

DEFAULT_SIZE_LIMIT = 2_000_000


@dataclass
class FeasibleSet:
    """All feasible production vectors, in ascending lexicographic order."""

    productions: np.ndarray
    horizon_bound_applied: bool = True

    @property
    def size(self) -> int:
        return self.productions.shape[0]


@dataclass
class IdealFront:
    """Oracle Pareto front: the non-dominated objective vectors over the whole
    feasible set, each paired with a production vector attaining it."""

    points: np.ndarray
    productions: np.ndarray
    hv: float
    feasible_size: int
    horizon_bound_applied: bool = True

    @property
    def size(self) -> int:
        return self.points.shape[0]


def _cardinality_lower_bound(config: ProblemConfig) -> int:
    """Count of the guaranteed-feasible simplex {P >= 0 : sum P <= m} where m
    is the loosest bound that every resource and the horizon both cover."""
    m = min(int(config.budgets.min()), int(config.horizon))
    return math.comb(m + config.num_demands, config.num_demands)


def enumerate_feasible(
    config: ProblemConfig, size_limit: int = DEFAULT_SIZE_LIMIT
) -> FeasibleSet:
    """Depth-first enumeration of every feasible production vector.

    Prunes on per-resource remaining budget and on the remaining horizon;
    output order is lexicographic ascending, so reruns are byte-identical.
    Raises TooLarge as soon as the cardinality provably exceeds size_limit,
    including via a closed-form lower bound checked before any enumeration.
    """
    num_d = config.num_demands
    if _cardinality_lower_bound(config) > size_limit:
        raise TooLarge(
            f"feasible set provably exceeds {size_limit} vectors; "
            "raise size_limit or skip exact oracle metrics"
        )

    # consumers[i] lists demands drawing on resource i
    remaining = [int(b) for b in config.budgets]
    horizon_left = int(config.horizon)
    out: list[tuple[int, ...]] = []
    current = [0] * num_d

    def descend(j: int, horizon_left: int) -> None:
        if j == num_d:
            out.append(tuple(current))
            if len(out) > size_limit:
                raise TooLarge(
                    f"feasible set exceeds {size_limit} vectors; "
                    "raise size_limit or skip exact oracle metrics"
                )
            return
        deps = config.dependencies[j]
        cap = min(min(remaining[i] for i in deps), horizon_left)
        for units in range(cap + 1):
            current[j] = units
            for i in deps:
                remaining[i] -= units
            descend(j + 1, horizon_left - units)
            for i in deps:
                remaining[i] += units
        current[j] = 0

    descend(0, horizon_left)
    return FeasibleSet(productions=np.array(out, dtype=np.int64).reshape(-1, num_d))


def ideal_front(
    config: ProblemConfig, size_limit: int = DEFAULT_SIZE_LIMIT
) -> IdealFront:
    """Evaluate every feasible production vector and keep the non-dominated
    objective vectors, plus their exact hypervolume at the origin."""
    feasible = enumerate_feasible(config, size_limit=size_limit)
    images = config.objectives.evaluate_many(feasible.productions)
    keep = non_dominated_indices(images)
    points = images[keep]
    return IdealFront(
        points=points,
        productions=feasible.productions[keep],
        hv=hypervolume(points),
        feasible_size=feasible.size,
        horizon_bound_applied=feasible.horizon_bound_applied,
    )
