"""Independent reference implementations used to cross-check the library.

Everything here is written directly from the closed-form definitions with
plain ``math`` calls and exhaustive loops, deliberately sharing no code with
the package: closed-form evaluators for the four encoded problems,
inclusion-exclusion hypervolume, and a quadratic-time dominance filter.
"""
import math
from itertools import combinations

EPS = 1e-8


def _clamp(*values):
    return [max(v, 0.0) for v in values]


def problem_0(p0, p1):
    j0 = 10.0 * math.log(p0 + EPS + 1.0)
    j1 = 10.0 * math.log(p1 + EPS + 1.0)
    return _clamp(j0, j1)


def problem_1a(p0, p1):
    j0 = min(0.6 * p0**2, 18.0) + max(5.0 * math.exp(-0.9 * (p1 - 7.0) ** 2), 0.1)
    j1 = (
        -1.5 * p0**2
        + 0.8 * p0
        + 12.0
        + 5.0 * math.exp(-0.1 * (p1 - 3.0) ** 2)
        + 0.2 * p1 * math.log(2.0 * p1 + EPS + 1.0)
    )
    return _clamp(j0, j1)


def problem_1b(p0, p1):
    j0 = (
        0.5 * p0
        + 3.0
        + 3.0 * math.sin(3.0 * p0)
        - math.log(1.5 * p1 + EPS + 2.0)
        + 2.5 * math.exp(-1.2 * (p1 - 7.0) ** 2)
    )
    j1 = (
        -1.5 * math.log(5.5 * p0 + EPS + 1.0)
        + 9.0 * math.exp(-0.5 * (p0 - 2.0) ** 2)
        + 5.0
        + (0.5 * p1 + 1.2) * math.sin(0.9 * p1 + 0.6)
    )
    return _clamp(j0, j1)


def problem_1c(p0, p1):
    j0 = -p0 + 20.0 / (1.0 + math.exp(p1 - 3.0))
    j1 = (
        1.0 / (1.0 + math.exp(p0 - 6.0))
        + 5.0
        - 15.0 / (1.0 + math.exp(0.7 * (p1 - 5.0)))
    )
    return _clamp(j0, j1)


ENCODED_EVALUATORS = {
    "0": problem_0,
    "1a": problem_1a,
    "1b": problem_1b,
    "1c": problem_1c,
}


def hypervolume_inclusion_exclusion(points, reference=None):
    """Union-of-boxes measure by inclusion-exclusion over all subsets."""
    points = [tuple(float(c) for c in p) for p in points]
    if not points:
        raise ValueError("need at least one point")
    dims = len(points[0])
    if reference is None:
        reference = (0.0,) * dims
    total = 0.0
    indices = range(len(points))
    for size in range(1, len(points) + 1):
        sign = 1.0 if size % 2 == 1 else -1.0
        for subset in combinations(indices, size):
            volume = 1.0
            for axis in range(dims):
                edge = min(points[i][axis] for i in subset) - reference[axis]
                if edge <= 0.0:
                    volume = 0.0
                    break
                volume *= edge
            total += sign * volume
    return total


def dominates_brute(a, b):
    at_least = all(x >= y for x, y in zip(a, b))
    strict = any(x > y for x, y in zip(a, b))
    return at_least and strict


def pareto_indices_brute(points):
    points = [tuple(p) for p in points]
    keep = []
    for i, candidate in enumerate(points):
        if not any(dominates_brute(other, candidate) for other in points):
            keep.append(i)
    return keep
