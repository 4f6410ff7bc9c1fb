"""Multi-objective evaluation metrics.

Everything here is exact: dominance filtering, hypervolume by recursive
dimension sweep (no Monte Carlo), rank correlation with standard tie
correction, and the preference-ordering score. All metrics treat larger
objective values as better and measure hypervolume against the origin.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.stats import rankdata

from . import core
from .errors import (
    DegenerateAfterRanking,
    DimensionMismatch,
    EmptyInput,
    LengthMismatch,
    PointBelowReference,
    UnsupportedDimension,
    ZeroIdealHV,
)
from .preferences import build_sweeps

__all__ = [
    "SolutionRecord",
    "dominates",
    "non_dominated_indices",
    "pareto_filter",
    "hypervolume",
    "hv_ratio",
    "pnds",
    "spearman",
    "ordering_score",
    "ordering_score_from_responses",
    "MAX_HV_DIMENSIONS",
]

MAX_HV_DIMENSIONS = 8


@dataclass(frozen=True)
class SolutionRecord:
    """One evaluated preference: the weights, the final production vector the
    policy reached, and its objective values."""

    preference: tuple[float, ...]
    production: tuple[int, ...]
    objectives: tuple[float, ...]


def dominates(a, b) -> bool:
    """True iff a is at least b everywhere and strictly better somewhere."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape or a.ndim != 1:
        raise DimensionMismatch(
            f"cannot compare objective vectors of shapes {a.shape} and {b.shape}"
        )
    return bool(np.all(a >= b) and np.any(a > b))


def _as_points(points) -> np.ndarray:
    arr = np.asarray(points, dtype=np.float64)
    if arr.size == 0:
        raise EmptyInput("need at least one point")
    if arr.ndim != 2:
        raise DimensionMismatch(f"expected a 2-D point array, got shape {arr.shape}")
    return arr


def non_dominated_indices(points) -> list[int]:
    """Indices of points no other point dominates. Duplicates are all kept:
    identical points never dominate each other."""
    arr = _as_points(points)
    keep = []
    for i in range(arr.shape[0]):
        ge = np.all(arr >= arr[i], axis=1)
        gt = np.any(arr > arr[i], axis=1)
        if not np.any(ge & gt):
            keep.append(i)
    return keep


def pareto_filter(points) -> np.ndarray:
    arr = _as_points(points)
    return arr[non_dominated_indices(arr)]


def _hv_boxes(points: np.ndarray) -> float:
    """Exclusive-volume recursion over a list of mutually non-dominated,
    strictly positive points (maximization, origin reference)."""
    m, n = points.shape
    if m == 0:
        return 0.0
    if m == 1:
        return float(np.prod(points[0]))
    if m == 2:
        a, b = points
        return float(np.prod(a) + np.prod(b) - np.prod(np.minimum(a, b)))
    if n == 1:
        return float(points.max())
    if n == 2:
        order = np.argsort(-points[:, 0], kind="stable")
        total, prev_y = 0.0, 0.0
        for x, y in points[order]:
            if y > prev_y:
                total += x * (y - prev_y)
                prev_y = y
        return total

    order = np.argsort(-points[:, 0], kind="stable")
    pts = points[order]
    total = 0.0
    for k in range(m):
        p = pts[k]
        clipped = np.minimum(pts[k + 1 :], p)
        clipped = clipped[np.all(clipped > 0, axis=1)]
        if clipped.shape[0]:
            clipped = clipped[non_dominated_indices(clipped)]
        total += float(np.prod(p)) - _hv_boxes(clipped)
    return total


def hypervolume(points, reference=None) -> float:
    """Exact hypervolume of the region the points dominate, down to the
    reference point (origin by default). Supports up to 8 objectives; larger
    sets deserve an approximate indicator this library deliberately omits.
    """
    arr = _as_points(points)
    n = arr.shape[1]
    if n > MAX_HV_DIMENSIONS:
        raise UnsupportedDimension(
            f"exact hypervolume supports up to {MAX_HV_DIMENSIONS} objectives, got {n}"
        )
    if reference is None:
        reference = np.zeros(n)
    reference = np.asarray(reference, dtype=np.float64)
    if reference.shape != (n,):
        raise DimensionMismatch(
            f"reference has shape {reference.shape}, points have {n} objectives"
        )
    if np.any(arr < reference):
        raise PointBelowReference(
            "every point must be component-wise at or above the reference point"
        )
    shifted = arr - reference
    shifted = shifted[np.all(shifted > 0, axis=1)]
    if shifted.shape[0] == 0:
        return 0.0
    shifted = shifted[non_dominated_indices(shifted)]
    return _hv_boxes(shifted)


def hv_ratio(predicted, ideal_hv: float) -> float:
    """Hypervolume of the predicted set divided by the oracle value."""
    if ideal_hv <= 0:
        raise ZeroIdealHV(f"ideal hypervolume must be positive, got {ideal_hv}")
    ratio = hypervolume(predicted) / float(ideal_hv)
    assert ratio <= 1.0 + 1e-9, (
        f"measured hypervolume exceeds the ideal ({ratio}); "
        "the ideal value does not cover the same feasible set"
    )
    return ratio


def pnds(points) -> float:
    """Proportion of the set that is non-dominated within the set itself."""
    arr = _as_points(points)
    return len(non_dominated_indices(arr)) / arr.shape[0]


def spearman(x, y) -> float:
    """Spearman rank correlation: Pearson correlation of average ranks.

    Exactly 1.0 (or -1.0) whenever the two rank sequences are identical
    (or exactly reversed), which keeps perfectly ordered sweeps at the
    boundary values without floating-point slack. A side whose ranks carry no
    variance while the other side does has no defined correlation and raises
    instead of returning a silent 0.
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.ndim != 1 or y.ndim != 1 or x.shape != y.shape:
        raise LengthMismatch(f"sequences have shapes {x.shape} and {y.shape}")
    n = x.shape[0]
    if n < 2:
        raise DegenerateAfterRanking("rank correlation needs at least 2 values")
    rx = rankdata(x)
    ry = rankdata(y)
    if np.array_equal(rx, ry):
        return 1.0
    if np.array_equal(rx, (n + 1) - ry):
        return -1.0
    if np.ptp(rx) == 0 or np.ptp(ry) == 0:
        raise DegenerateAfterRanking(
            "one side has constant ranks; correlation is undefined"
        )
    rho = float(np.corrcoef(rx, ry)[0, 1])
    return float(np.clip(rho, -1.0, 1.0))


def ordering_score_from_responses(
    response_fn,
    num_objectives: int,
    n_samp: int = 5,
    n_step: int = 11,
    alpha: float = 1.0,
    rng: np.random.Generator | None = None,
) -> float:
    """Ordering score over an arbitrary preference -> objective-vector map.

    For each objective i and repetition j, sweep component i from 0 to 1 in
    n_step points (remainder split along one random direction per
    repetition), query the map at each preference, and score how well the
    i-th objective responses follow the sweep: 1 when all responses are
    equal, otherwise (rank correlation against the ascending sort + 1) / 2.
    Returns the mean over all N * n_samp sweeps.
    """
    if rng is None:
        rng = np.random.default_rng()
    sweep_set = build_sweeps(num_objectives, n_samp, n_step, alpha, rng)
    total = 0.0
    for i in range(num_objectives):
        for j in range(n_samp):
            values = np.array(
                [float(np.asarray(response_fn(w))[i]) for w in sweep_set.sweeps[i][j]]
            )
            if np.all(values == values[0]):
                s = 1.0
            else:
                s = (spearman(values, np.sort(values)) + 1.0) / 2.0
            total += s
    return total / (num_objectives * n_samp)


def ordering_score(
    policy,
    config,
    n_samp: int = 5,
    n_step: int = 11,
    alpha: float = 1.0,
    rng: np.random.Generator | None = None,
) -> float:
    """Ordering score of a preference-conditioned policy on one problem.

    Each queried preference runs a full episode from reset to the horizon;
    the response is the objective vector of the final state.
    """

    def respond(preference: np.ndarray) -> np.ndarray:
        state, obs = core.reset(config, preference)
        policy.start_episode(config, preference)
        reward = config.objectives.evaluate(state.production)
        for _ in range(config.horizon):
            action = policy.act(obs, preference)
            state, reward, _ = core.step(state, action, config)
            obs = core.build_observation(state, config, preference)
        return reward

    return ordering_score_from_responses(
        respond, config.num_objectives, n_samp=n_samp, n_step=n_step, alpha=alpha, rng=rng
    )
