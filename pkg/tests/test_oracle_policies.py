"""Brute-force oracle enumeration, ideal fronts, and the baseline policies."""
import numpy as np
import pytest

from graphalloc.core import (
    ProblemConfig,
    action_mask,
    build_observation,
    num_actions,
    reset,
    step,
    validate_config,
)
from graphalloc.errors import DimensionMismatch, TooLarge
from graphalloc.metrics import dominates
from graphalloc.objectives import Const, Log, Mul, ObjectiveSet, Prod
from graphalloc.oracle import enumerate_feasible, ideal_front
from graphalloc.policies import (
    ExhaustivePlanner,
    GreedyPolicy,
    RandomPolicy,
    warmed_normalizer,
)
from graphalloc.problems import load_problem
from graphalloc.scalarize import Normalizer, ScalarizationMethod, ScalarizerSpec


def fully_connected(budgets, horizon, objectives=None):
    r = len(budgets)
    if objectives is None:
        objectives = ObjectiveSet((Prod(0), Prod(1)), 2)
    return validate_config(
        ProblemConfig(
            resource_names=tuple(f"R{i}" for i in range(r)),
            budgets=np.array(budgets),
            demand_names=("D0", "D1"),
            dependencies=(tuple(range(r)), tuple(range(r))),
            objectives=objectives,
            horizon=horizon,
        )
    )


class TestEnumerateFeasible:
    def test_budget_three_fully_connected(self):
        feasible = enumerate_feasible(fully_connected((3, 3), horizon=10))
        got = {tuple(row) for row in feasible.productions}
        want = {(a, b) for a in range(4) for b in range(4) if a + b <= 3}
        assert got == want
        assert feasible.size == 10

    def test_zero_budget(self):
        feasible = enumerate_feasible(fully_connected((0, 0), horizon=5))
        assert feasible.productions.tolist() == [[0, 0]]

    def test_horizon_caps_total_production(self):
        feasible = enumerate_feasible(fully_connected((9, 9), horizon=3))
        got = {tuple(row) for row in feasible.productions}
        assert got == {(a, b) for a in range(4) for b in range(4) if a + b <= 3}
        assert feasible.horizon_bound_applied

    def test_lexicographic_order_and_determinism(self):
        config = fully_connected((4, 4), horizon=10)
        first = enumerate_feasible(config).productions
        second = enumerate_feasible(config).productions
        assert np.array_equal(first, second)
        as_tuples = [tuple(row) for row in first]
        assert as_tuples == sorted(as_tuples)

    def test_downward_closure(self):
        config = load_problem("2a")
        feasible = enumerate_feasible(config)
        members = {tuple(row) for row in feasible.productions}
        rng = np.random.default_rng(8)
        rows = feasible.productions[rng.integers(0, len(feasible.productions), size=40)]
        for row in rows:
            vec = row.copy()
            positive = np.flatnonzero(vec)
            if positive.size == 0:
                continue
            vec[rng.choice(positive)] -= 1
            assert tuple(vec) in members

    def test_too_large_aborts(self):
        config = load_problem("6a")
        with pytest.raises(TooLarge):
            enumerate_feasible(config)
        with pytest.raises(TooLarge):
            enumerate_feasible(fully_connected((50, 50), horizon=50), size_limit=10)

    def test_every_member_is_reachable(self):
        # replay each production vector as an action sequence
        config = fully_connected((3, 3), horizon=10)
        for target in enumerate_feasible(config).productions:
            state, _ = reset(config, [0.5, 0.5])
            for demand, units in enumerate(target):
                for _ in range(units):
                    state, _, _ = step(state, 1 + demand, config)
            assert np.array_equal(state.production, target)


class TestIdealFront:
    def test_problem_zero_front(self):
        front = ideal_front(load_problem("0"))
        assert front.feasible_size == 55
        assert front.size == 10
        # the front of problem 0 is the maximal-budget diagonal
        got = {tuple(row) for row in front.productions}
        assert got == {(a, 9 - a) for a in range(10)}
        assert front.hv == pytest.approx(406.12377075928833)

    def test_small_config_front_has_four_points(self):
        config = fully_connected(
            (3, 3),
            horizon=10,
            objectives=ObjectiveSet(
                (
                    Mul((Const(10.0), Log(Prod(0), offset=2.0))),
                    Mul((Const(10.0), Log(Prod(1), offset=2.0))),
                ),
                2,
            ),
        )
        front = ideal_front(config)
        assert front.size == 4
        got = {tuple(row) for row in front.productions}
        assert got == {(0, 3), (1, 2), (2, 1), (3, 0)}

    def test_front_is_mutually_non_dominated(self):
        front = ideal_front(load_problem("2a"))
        for i, a in enumerate(front.points):
            for j, b in enumerate(front.points):
                if i != j:
                    assert not dominates(a, b)

    def test_front_covers_every_feasible_image(self):
        config = load_problem("2a")
        front = ideal_front(config)
        feasible = enumerate_feasible(config)
        images = config.objectives.evaluate_many(feasible.productions)
        for image in images:
            assert any(
                dominates(point, image) or np.array_equal(point, image)
                for point in front.points
            )

    def test_points_match_objective_evaluation(self):
        config = load_problem("1a")
        front = ideal_front(config)
        recomputed = config.objectives.evaluate_many(front.productions)
        assert np.array_equal(front.points, recomputed)

    def test_too_large_propagates(self):
        with pytest.raises(TooLarge):
            ideal_front(load_problem("6a"), size_limit=50_000)


def rollout(policy, config, preference, record_actions=False):
    preference = np.asarray(preference, dtype=np.float64)
    policy.start_episode(config, preference)
    state, obs = reset(config, preference)
    actions = []
    for _ in range(config.horizon):
        code = policy.act(obs, preference)
        actions.append(code)
        state, _, terminated = step(state, code, config)
        obs = build_observation(state, config, preference)
    assert terminated
    return (state, actions) if record_actions else state


class TestRandomPolicy:
    def test_only_valid_actions(self):
        config = load_problem("0")
        policy = RandomPolicy(seed=3)
        preference = np.array([0.25, 0.75])
        policy.start_episode(config, preference)
        state, obs = reset(config, preference)
        for _ in range(config.horizon):
            code = policy.act(obs, preference)
            assert action_mask(state, config)[code]
            state, _, _ = step(state, code, config)
            obs = build_observation(state, config, preference)

    def test_deterministic_per_seed_and_preference(self):
        config = load_problem("0")
        _, first = rollout(RandomPolicy(seed=3), config, [0.5, 0.5], record_actions=True)
        _, second = rollout(RandomPolicy(seed=3), config, [0.5, 0.5], record_actions=True)
        _, other_seed = rollout(RandomPolicy(seed=4), config, [0.5, 0.5], record_actions=True)
        _, other_pref = rollout(RandomPolicy(seed=3), config, [0.3, 0.7], record_actions=True)
        assert first == second
        assert first != other_seed
        assert first != other_pref

    def test_act_requires_started_episode(self):
        policy = RandomPolicy(seed=0)
        with pytest.raises(RuntimeError):
            policy.act(np.zeros(6), np.array([0.5, 0.5]))


class TestGreedyPolicy:
    def test_axis_preference_maxes_out_that_objective(self):
        config = load_problem("0")
        policy = GreedyPolicy(
            ScalarizerSpec(ScalarizationMethod.SMOOTH_TCHEBYCHEFF, mu=0.1),
            warmed_normalizer(config),
        )
        state = rollout(policy, config, [1.0, 0.0])
        assert state.production.tolist() == [9, 0]
        state = rollout(policy, config, [0.0, 1.0])
        assert state.production.tolist() == [0, 9]

    def test_final_point_matches_front_endpoint(self):
        config = load_problem("0")
        front = ideal_front(config)
        policy = GreedyPolicy(
            ScalarizerSpec(ScalarizationMethod.SMOOTH_TCHEBYCHEFF, mu=0.1),
            warmed_normalizer(config),
        )
        state = rollout(policy, config, [1.0, 0.0])
        best_j0 = front.points[np.argmax(front.points[:, 0])]
        assert config.objectives.evaluate(state.production) == pytest.approx(best_j0)

    def test_deterministic(self):
        config = load_problem("1a")
        spec = ScalarizerSpec(ScalarizationMethod.SMOOTH_TCHEBYCHEFF, mu=0.1)
        states = [
            rollout(GreedyPolicy(spec, warmed_normalizer(config)), config, [0.4, 0.6])
            for _ in range(2)
        ]
        assert np.array_equal(states[0].allocation, states[1].allocation)

    def test_episodes_do_not_leak_normalizer_state(self):
        config = load_problem("0")
        prototype = warmed_normalizer(config)
        snapshot = prototype.running_ideal.copy()
        policy = GreedyPolicy(
            ScalarizerSpec(ScalarizationMethod.SMOOTH_TCHEBYCHEFF, mu=0.1), prototype
        )
        rollout(policy, config, [0.5, 0.5])
        assert np.array_equal(prototype.running_ideal, snapshot)

    def test_rejects_mismatched_normalizer(self):
        config = load_problem("0")
        policy = GreedyPolicy(
            ScalarizerSpec(ScalarizationMethod.SMOOTH_TCHEBYCHEFF, mu=0.1),
            Normalizer.fresh(3),
        )
        with pytest.raises(DimensionMismatch):
            policy.start_episode(config, np.array([0.5, 0.5]))


class TestExhaustivePlanner:
    def test_reaches_ideal_point_for_each_preference(self):
        config = load_problem("0")
        planner = ExhaustivePlanner(config)
        front = {tuple(row) for row in ideal_front(config).productions}
        for preference in [[1.0, 0.0], [0.0, 1.0], [0.5, 0.5], [0.25, 0.75]]:
            state = rollout(planner, config, preference)
            assert tuple(state.production) in front

    def test_plan_matches_precomputed_argmax(self):
        config = load_problem("0")
        planner = ExhaustivePlanner(config)
        preference = np.array([1.0, 0.0])
        state = rollout(planner, config, preference)
        assert state.production.tolist() == [9, 0]

    def test_deterministic(self):
        config = load_problem("1c")
        planner = ExhaustivePlanner(config)
        first = rollout(planner, config, [0.6, 0.4])
        second = rollout(planner, config, [0.6, 0.4])
        assert np.array_equal(first.production, second.production)

    def test_too_large_at_construction(self):
        with pytest.raises(TooLarge):
            ExhaustivePlanner(load_problem("6a"), size_limit=50_000)

    def test_warmed_normalizer_covers_axis_maxima(self):
        config = load_problem("0")
        norm = warmed_normalizer(config)
        front = ideal_front(config)
        axis_max = front.points.max(axis=0)
        assert np.all(norm.running_ideal >= axis_max - 1e-12)
