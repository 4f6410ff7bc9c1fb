"""Episodic-protocol wrapper around the benchmark environment.

The binding holds no benchmark logic of its own: observations, rewards,
masks, and termination all come straight from the core package, so a
trajectory driven through :class:`BoundEnvironment` is bit-identical to one
driven through the core functions directly. The only additions are episode
bookkeeping, an optional per-step scalarized reward for training, and a
Dirichlet preference draw when the caller supplies none.
"""
from __future__ import annotations

import numpy as np

from graphalloc import (
    Normalizer,
    ProblemConfig,
    ScalarizationMethod,
    ScalarizerSpec,
    action_mask,
    build_observation,
    encode_graph_observation,
    load_problem,
    num_actions,
    reset,
    sample_dirichlet,
    scalarize,
    step,
    validate_config,
)
from graphalloc.errors import EpisodeOver, InvalidSpec

__all__ = ["BoundEnvironment"]

_MODES = ("vector", "graph")


def _resolve_config(problem, problem_dir=None) -> ProblemConfig:
    if isinstance(problem, ProblemConfig):
        return validate_config(problem)
    if isinstance(problem, str):
        return load_problem(problem, problem_dir)
    raise InvalidSpec(
        f"problem must be a ProblemConfig or a problem id string, got {type(problem).__name__}"
    )


class BoundEnvironment:
    """One episodic environment over one problem configuration.

    ``mode`` selects the observation encoding: ``"vector"`` yields the flat
    allocation-plus-preference array, ``"graph"`` a dict of plain arrays
    (node features, node types, edge index pairs, edge features, preference)
    so graph-learning stacks can consume it without a mandated dependency.

    With ``scalarize_on_step`` the reward is the scalarized normalized
    objective value (training mode); otherwise it is the raw objective
    vector exactly as the core emits it. The normalizer is shared across
    episodes of this instance and may be supplied, so vectorized training
    can pool running statistics through the core's merge contract.
    """

    def __init__(
        self,
        problem,
        mode: str = "vector",
        scalarize_on_step: bool = False,
        scalarizer: ScalarizerSpec | None = None,
        normalizer: Normalizer | None = None,
        problem_dir=None,
    ):
        if mode not in _MODES:
            raise InvalidSpec(f"mode must be one of {_MODES}, got {mode!r}")
        self.config = _resolve_config(problem, problem_dir)
        self.mode = mode
        self.scalarize_on_step = bool(scalarize_on_step)
        self.scalarizer = scalarizer or ScalarizerSpec(ScalarizationMethod.WEIGHTED_SUM)
        self.normalizer = normalizer or Normalizer.fresh(self.config.num_objectives)
        if self.normalizer.running_ideal.shape[0] != self.config.num_objectives:
            raise InvalidSpec(
                "normalizer width does not match the problem's objective count"
            )
        self._state = None
        self._preference = None

    @property
    def num_actions(self) -> int:
        return num_actions(self.config)

    @property
    def preference(self) -> np.ndarray | None:
        return None if self._preference is None else self._preference.copy()

    def _observe(self):
        if self.mode == "vector":
            return build_observation(self._state, self.config, self._preference)
        graph = encode_graph_observation(self._state, self.config, self._preference)
        return {
            "node_features": graph.node_features,
            "node_types": graph.node_types,
            "edge_index": graph.edge_index,
            "edge_features": graph.edge_features,
            "preference": graph.preference,
        }

    def reset(self, seed: int | None = None, options: dict | None = None):
        """Start a new episode; returns ``(observation, info)``.

        ``options`` may carry an explicit ``"preference"``; otherwise one is
        drawn from a flat Dirichlet using the supplied seed.
        """
        preference = (options or {}).get("preference")
        if preference is None:
            rng = np.random.default_rng(seed)
            preference = sample_dirichlet(
                self.config.num_objectives, 1, 1.0, rng
            )[0]
        self._state, observation = reset(self.config, preference)
        self._preference = np.asarray(preference, dtype=np.float64).copy()
        if self.mode == "graph":
            observation = self._observe()
        info = {
            "preference": self._preference.copy(),
            "action_mask": action_mask(self._state, self.config),
        }
        return observation, info

    def step(self, action):
        """Advance one step; returns ``(obs, reward, terminated, truncated, info)``."""
        if self._state is None:
            raise EpisodeOver("no active episode; call reset first")
        self._state, objectives, terminated = step(self._state, action, self.config)
        if self.scalarize_on_step:
            normalized = self.normalizer.normalize(objectives)
            reward = scalarize(normalized, self._preference, self.scalarizer)
        else:
            reward = objectives
        info = {
            "objectives": objectives.copy(),
            "action_mask": action_mask(self._state, self.config),
        }
        return self._observe(), reward, terminated, False, info
