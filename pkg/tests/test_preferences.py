"""Preference vectors: simplex lattice, Dirichlet sampling, ordered sweeps."""
import math

import numpy as np
import pytest

from graphalloc.errors import DimensionMismatch, InvalidPreference, NonPositiveAlpha
from graphalloc.preferences import (
    build_sweeps,
    das_dennis,
    default_divisions,
    lattice_size,
    sample_dirichlet,
    validate_preference,
)


def test_das_dennis_two_objectives_four_divisions():
    got = das_dennis(2, 4)
    expected = np.array(
        [
            [0.0, 1.0],
            [0.25, 0.75],
            [0.5, 0.5],
            [0.75, 0.25],
            [1.0, 0.0],
        ]
    )
    assert got.shape == (5, 2)
    assert np.array_equal(got, expected)


def test_das_dennis_known_counts():
    assert das_dennis(2, 4).shape[0] == math.comb(5, 1) == 5
    assert das_dennis(3, 4).shape[0] == math.comb(6, 2) == 15
    assert das_dennis(5, 6).shape[0] == math.comb(10, 4) == 210


@pytest.mark.parametrize("num_objectives", [2, 3, 4, 5, 6])
@pytest.mark.parametrize("divisions", [1, 2, 3, 5, 8, 12])
def test_das_dennis_cardinality_formula(num_objectives, divisions):
    points = das_dennis(num_objectives, divisions)
    expected = math.comb(divisions + num_objectives - 1, num_objectives - 1)
    assert points.shape == (expected, num_objectives)
    assert lattice_size(num_objectives, divisions) == expected


def test_das_dennis_rows_are_valid_preferences_in_order():
    points = das_dennis(4, 6)
    for row in points:
        validate_preference(row)
    first_coord = points[:, 0]
    assert np.all(np.diff(first_coord) >= 0)
    # rows are unique
    assert len({tuple(row) for row in points}) == points.shape[0]


def test_default_divisions_table():
    assert default_divisions(2) == 99
    assert default_divisions(3) == 12
    assert default_divisions(4) == 7
    assert default_divisions(5) == 5
    assert default_divisions(6) == 4


def test_default_divisions_high_dimension_cap():
    for n in range(7, 11):
        h = default_divisions(n)
        assert lattice_size(n, h) <= 130
        assert lattice_size(n, h + 1) > 130
        assert h >= 1


def test_validate_preference_errors():
    with pytest.raises(DimensionMismatch):
        validate_preference([1.0])
    with pytest.raises(DimensionMismatch):
        validate_preference([[0.5, 0.5]])
    with pytest.raises(InvalidPreference):
        validate_preference([0.5, np.nan])
    with pytest.raises(InvalidPreference):
        validate_preference([0.7, 0.7])
    with pytest.raises(InvalidPreference):
        validate_preference([1.2, -0.2])
    validate_preference([0.25, 0.75])


def test_sample_dirichlet():
    rng = np.random.default_rng(7)
    draws = sample_dirichlet(3, 50, 1.0, rng)
    assert draws.shape == (50, 3)
    assert np.all(draws >= 0)
    assert draws.sum(axis=1) == pytest.approx(np.ones(50))
    again = sample_dirichlet(3, 50, 1.0, np.random.default_rng(7))
    assert np.array_equal(draws, again)
    with pytest.raises(NonPositiveAlpha):
        sample_dirichlet(3, 1, 0.0, rng)
    with pytest.raises(NonPositiveAlpha):
        sample_dirichlet(3, 1, -1.0, rng)


def test_build_sweeps_two_objectives_exact_grid():
    sweeps = build_sweeps(2, n_samp=3, n_step=11, alpha=1.0, rng=np.random.default_rng(0))
    assert sweeps.num_objectives == 2
    assert len(sweeps.sweeps) == 2
    for objective, per_objective in enumerate(sweeps.sweeps):
        assert len(per_objective) == 3
        for block in per_objective:
            assert block.shape == (11, 2)
            # swept coordinate takes exactly k / (n_step - 1)
            assert np.array_equal(block[:, objective], np.arange(11) / 10)
            assert block.sum(axis=1) == pytest.approx(np.ones(11))
            assert np.all(block >= 0.0) and np.all(block <= 1.0)


def test_build_sweeps_two_objectives_ignores_rng():
    """The off-axis direction is trivial for two objectives, so the sweep set
    is identical whatever the generator state (exact alpha invariance)."""
    a = build_sweeps(2, n_samp=4, n_step=7, alpha=0.2, rng=np.random.default_rng(3))
    b = build_sweeps(2, n_samp=4, n_step=7, alpha=5.0, rng=np.random.default_rng(3))
    for per_a, per_b in zip(a.sweeps, b.sweeps):
        for block_a, block_b in zip(per_a, per_b):
            assert np.array_equal(block_a, block_b)

    rng = np.random.default_rng(3)
    state_before = rng.bit_generator.state
    build_sweeps(2, n_samp=4, n_step=7, alpha=1.0, rng=rng)
    assert rng.bit_generator.state == state_before


def test_build_sweeps_three_objectives_structure():
    sweeps = build_sweeps(3, n_samp=2, n_step=5, alpha=1.0, rng=np.random.default_rng(12))
    assert len(sweeps.sweeps) == 3
    for objective, per_objective in enumerate(sweeps.sweeps):
        assert len(per_objective) == 2
        for block in per_objective:
            assert block.shape == (5, 3)
            assert block.sum(axis=1) == pytest.approx(np.ones(5))
            assert np.array_equal(block[:, objective], np.arange(5) / 4)
            # one direction per repetition: off-axis components stay
            # proportional across all steps with mass to share
            rest = np.delete(block, objective, axis=1)
            directions = rest[:4] / rest[:4].sum(axis=1, keepdims=True)
            for row in directions[1:]:
                assert row == pytest.approx(directions[0])


def test_build_sweeps_distinct_directions_across_repetitions():
    sweeps = build_sweeps(3, n_samp=2, n_step=5, alpha=1.0, rng=np.random.default_rng(12))
    # same objective, different repetition: directions should differ
    first_rep = sweeps.sweeps[0][0]
    second_rep = sweeps.sweeps[0][1]
    assert not np.allclose(first_rep, second_rep)


def test_build_sweeps_argument_errors():
    rng = np.random.default_rng(0)
    with pytest.raises(InvalidPreference):
        build_sweeps(2, n_samp=0, n_step=5, alpha=1.0, rng=rng)
    with pytest.raises(InvalidPreference):
        build_sweeps(2, n_samp=1, n_step=1, alpha=1.0, rng=rng)
    with pytest.raises(NonPositiveAlpha):
        build_sweeps(3, n_samp=1, n_step=5, alpha=0.0, rng=rng)
