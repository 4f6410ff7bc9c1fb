"""Baseline preference-conditioned policies.

A policy is a deterministic map (observation, preference) -> action code,
with a ``start_episode`` hook that pins the problem config and lets the
policy reset any per-episode state. Every policy here selects actions purely
from the observation and the preference, so any learned agent implementing
the same two methods can drop into the evaluation harness unchanged.
"""
from __future__ import annotations

import hashlib

import numpy as np

from .core import (
    ProblemConfig,
    action_mask,
    decode_action,
    ActionKind,
    state_from_observation,
)
from .errors import DimensionMismatch
from .oracle import DEFAULT_SIZE_LIMIT, enumerate_feasible
from .scalarize import (
    DEFAULT_MU,
    Normalizer,
    ScalarizationMethod,
    ScalarizerSpec,
    scalarize,
)

__all__ = [
    "PreferencePolicy",
    "RandomPolicy",
    "GreedyPolicy",
    "ExhaustivePlanner",
    "random_policy",
    "greedy_policy",
    "exhaustive_planner",
    "warmed_normalizer",
]


def warmed_normalizer(config: ProblemConfig) -> Normalizer:
    """Normalizer pre-loaded with per-axis objective maxima.

    Sweeps each demand's production alone from zero to its budget/horizon cap
    and absorbs every objective vector seen. A fresh normalizer saturates as
    soon as the current state holds the running maximum (every improving
    candidate then normalizes to the utopia point and ties with no-op), so
    greedy search needs this rough sense of scale to keep climbing.
    """
    norm = Normalizer.fresh(config.num_objectives)
    production = np.zeros(config.num_demands, dtype=np.int64)
    for j in range(config.num_demands):
        cap = min(
            min(int(config.budgets[i]) for i in config.dependencies[j]),
            int(config.horizon),
        )
        for units in range(cap + 1):
            production[j] = units
            norm.normalize(config.objectives.evaluate(production))
        production[j] = 0
    return norm


class PreferencePolicy:
    """Base policy contract used by the harness and the metrics."""

    name = "policy"

    def start_episode(self, config: ProblemConfig, preference: np.ndarray) -> None:
        """Called once per episode before the first action."""

    def act(self, observation: np.ndarray, preference: np.ndarray) -> int:
        raise NotImplementedError

    def describe(self) -> dict:
        return {"name": self.name}


class RandomPolicy(PreferencePolicy):
    """Uniform over the currently valid actions.

    The per-episode stream is seeded from the base seed and the preference
    bytes, so evaluating the same preference twice replays the identical
    episode while distinct preferences get independent streams.
    """

    name = "random"

    def __init__(self, seed: int = 0):
        self.seed = int(seed)
        self._config: ProblemConfig | None = None
        self._rng: np.random.Generator | None = None

    def start_episode(self, config: ProblemConfig, preference: np.ndarray) -> None:
        self._config = config
        digest = hashlib.blake2b(digest_size=8)
        digest.update(self.seed.to_bytes(8, "little", signed=True))
        digest.update(np.asarray(preference, dtype=np.float64).tobytes())
        episode_seed = int.from_bytes(digest.digest(), "little")
        self._rng = np.random.Generator(np.random.PCG64(episode_seed))

    def act(self, observation: np.ndarray, preference: np.ndarray) -> int:
        if self._config is None or self._rng is None:
            raise RuntimeError("start_episode must run before act")
        state = state_from_observation(observation, self._config)
        valid = np.flatnonzero(action_mask(state, self._config))
        return int(self._rng.choice(valid))

    def describe(self) -> dict:
        return {"name": self.name, "seed": self.seed}


class GreedyPolicy(PreferencePolicy):
    """One-step lookahead: simulate every valid action and take the one whose
    post-action objective vector scalarizes best.

    Candidates are compared through a pure normalizer peek so the comparison
    itself never mutates the running ideal; only the chosen action's
    objectives are absorbed. Ties go to the lowest action code, which makes
    the policy fully deterministic.
    """

    name = "greedy"

    def __init__(self, spec: ScalarizerSpec, normalizer: Normalizer):
        self.spec = spec
        self._prototype = normalizer
        self._config: ProblemConfig | None = None
        self._norm: Normalizer | None = None

    def start_episode(self, config: ProblemConfig, preference: np.ndarray) -> None:
        self._config = config
        if self._prototype.running_ideal.shape[0] != config.num_objectives:
            raise DimensionMismatch(
                "normalizer width does not match the problem's objective count"
            )
        self._norm = self._prototype.copy()

    def act(self, observation: np.ndarray, preference: np.ndarray) -> int:
        if self._config is None or self._norm is None:
            raise RuntimeError("start_episode must run before act")
        config = self._config
        state = state_from_observation(observation, config)
        mask = action_mask(state, config)

        best_code, best_value, best_objectives = -1, -np.inf, None
        for code in np.flatnonzero(mask):
            production = state.production.copy()
            act = decode_action(int(code), config.num_demands)
            if act.kind is ActionKind.ADD:
                production[act.demand] += 1
            elif act.kind is ActionKind.REMOVE:
                production[act.demand] -= 1
            objectives = config.objectives.evaluate(production)
            value = scalarize(self._norm.peek(objectives), preference, self.spec)
            if value > best_value:
                best_code, best_value, best_objectives = int(code), value, objectives
        self._norm.normalize(best_objectives)
        return best_code

    def describe(self) -> dict:
        return {"name": self.name, "scalarizer": self.spec.describe()}


class ExhaustivePlanner(PreferencePolicy):
    """Plans against the full feasible set, then replays the plan.

    At episode start it scores every feasible production vector with smooth
    Tchebycheff (objectives normalized by their true maxima over the feasible
    set) and walks straight to the best one, demand by demand; feasible
    vectors are downward closed, so every intermediate add is valid. Ties
    resolve to the lexicographically smallest production vector.
    """

    name = "planner"

    def __init__(
        self,
        config: ProblemConfig,
        mu: float = DEFAULT_MU,
        size_limit: int = DEFAULT_SIZE_LIMIT,
    ):
        self.mu = float(mu)
        self._feasible = enumerate_feasible(config, size_limit=size_limit)
        self._images = config.objectives.evaluate_many(self._feasible.productions)
        maxima = self._images.max(axis=0)
        self._scale = np.maximum(maxima, 1e-12)
        self._spec = ScalarizerSpec(ScalarizationMethod.SMOOTH_TCHEBYCHEFF, mu=self.mu)
        self._plan: list[int] = []
        self._cursor = 0

    def start_episode(self, config: ProblemConfig, preference: np.ndarray) -> None:
        normalized = self._images / self._scale
        scores = np.array(
            [scalarize(j_hat, preference, self._spec) for j_hat in normalized]
        )
        # first maximum in enumeration order = lexicographic tie-break
        target = self._feasible.productions[int(np.argmax(scores))]
        self._plan = []
        for demand, units in enumerate(target):
            self._plan.extend([1 + demand] * int(units))
        self._cursor = 0

    def act(self, observation: np.ndarray, preference: np.ndarray) -> int:
        if self._cursor < len(self._plan):
            code = self._plan[self._cursor]
            self._cursor += 1
            return code
        return 0

    def describe(self) -> dict:
        return {"name": self.name, "mu": self.mu}


def random_policy(rng) -> RandomPolicy:
    """Policy factory: rng may be a Generator (a base seed is drawn from it)
    or a plain integer seed."""
    if isinstance(rng, np.random.Generator):
        seed = int(rng.integers(0, 2**62))
    else:
        seed = int(rng)
    return RandomPolicy(seed)


def greedy_policy(spec: ScalarizerSpec, normalizer: Normalizer) -> GreedyPolicy:
    return GreedyPolicy(spec, normalizer)


def exhaustive_planner(config: ProblemConfig, **kwargs) -> ExhaustivePlanner:
    return ExhaustivePlanner(config, **kwargs)
