"""Evaluate externally supplied policies through the native harness.

An external policy is either a plain callable ``(observation, preference) ->
action`` or any object already implementing the policy protocol
(``start_episode`` / ``act``). Plain callables get a thin adapter with a
no-op episode hook; everything else is passed through untouched, so the
produced report is identical in schema and content to a native run.
"""
from __future__ import annotations

import numpy as np

from graphalloc import (
    PreferencePolicy,
    build_observation,
    evaluate_policy,
    reset,
    step,
)
from graphalloc.errors import GraphAllocError

from .env import _resolve_config

__all__ = ["ExternalPolicyError", "NonDeterministicPolicy", "evaluate_external_policy"]


class NonDeterministicPolicy(GraphAllocError):
    """The callable returned different actions on identical rollouts."""


class ExternalPolicyError(GraphAllocError):
    """The callable raised; the offending preference is in the message and
    the original exception rides along as the cause."""


class _CallableAdapter(PreferencePolicy):
    name = "external"

    def __init__(self, fn):
        self._fn = fn

    def act(self, observation, preference) -> int:
        try:
            return int(self._fn(observation, preference))
        except GraphAllocError:
            raise
        except Exception as exc:
            raise ExternalPolicyError(
                "external policy raised at preference "
                f"{np.asarray(preference, dtype=np.float64).tolist()}: {exc!r}"
            ) from exc


def _action_trace(policy, config, preference) -> list[int]:
    policy.start_episode(config, preference)
    state, obs = reset(config, preference)
    actions = []
    for _ in range(config.horizon):
        code = int(policy.act(obs, preference))
        actions.append(code)
        state, _, _ = step(state, code, config)
        obs = build_observation(state, config, preference)
    return actions


def evaluate_external_policy(
    policy,
    problem,
    problem_dir=None,
    divisions: int | None = None,
    os_samples: int = 5,
    os_steps: int = 11,
    os_alpha: float = 1.0,
    seed: int = 0,
    ideal_hv: float | None = None,
    probe_determinism: bool = True,
):
    """Score an external policy with the native evaluation protocol.

    The determinism probe rolls one episode twice at the uniform preference
    and requires identical action sequences before the full evaluation runs;
    stochastic-in-eval policies would otherwise corrupt the lattice results
    silently.
    """
    config = _resolve_config(problem, problem_dir)
    if hasattr(policy, "act") and hasattr(policy, "start_episode"):
        adapted = policy
    elif callable(policy):
        adapted = _CallableAdapter(policy)
    else:
        raise NonDeterministicPolicy(
            f"policy must be callable or implement the policy protocol, got "
            f"{type(policy).__name__}"
        )

    if probe_determinism:
        n = config.num_objectives
        center = np.full(n, 1.0 / n)
        first = _action_trace(adapted, config, center)
        second = _action_trace(adapted, config, center)
        if first != second:
            raise NonDeterministicPolicy(
                "policy produced different action sequences on identical "
                f"rollouts at preference {center.tolist()}; evaluation "
                "requires deterministic behavior"
            )

    return evaluate_policy(
        adapted,
        config,
        divisions=divisions,
        os_samples=os_samples,
        os_steps=os_steps,
        os_alpha=os_alpha,
        seed=seed,
        ideal_hv=ideal_hv,
    )
