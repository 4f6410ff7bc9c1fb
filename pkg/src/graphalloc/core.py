"""Resource-allocation episode dynamics.

A problem instance has a set of resources with integer unit budgets and a set
of demands, each depending on a non-empty subset of resources. One unit of
production for a demand consumes one unit of every resource it depends on.
Episodes run for a fixed horizon; at each step the agent adds a production
unit to one demand, removes one, or does nothing, and receives the raw
objective vector of the post-action state as reward.

State transitions are exactly invertible (add then remove restores the prior
allocation) and conserve every resource: ``unallocated + allocated == budget``
holds after every step.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DimensionMismatch,
    EmptyDependencySet,
    EpisodeOver,
    FewerThanTwoObjectives,
    IndexOutOfRange,
    InvalidHorizon,
    NegativeBudget,
    ZeroBudget,
)
from .objectives import ObjectiveSet
from .preferences import validate_preference

__all__ = [
    "ProblemConfig",
    "AllocationState",
    "ActionKind",
    "Action",
    "GraphObservation",
    "encode_action",
    "decode_action",
    "num_actions",
    "validate_config",
    "reset",
    "step",
    "action_mask",
    "build_observation",
    "state_from_observation",
    "encode_graph_observation",
    "resource_utilization",
    "check_state",
]


@dataclass(eq=False)
class ProblemConfig:
    """Immutable description of one benchmark problem.

    ``dependencies[j]`` lists the resource indices demand ``j`` consumes, as a
    sorted tuple. Treat instances as frozen once validated; they are safe to
    share across parallel episodes.
    """

    resource_names: tuple[str, ...]
    budgets: np.ndarray
    demand_names: tuple[str, ...]
    dependencies: tuple[tuple[int, ...], ...]
    objectives: ObjectiveSet
    horizon: int
    problem_id: str = ""
    family: str = "custom"
    notes: str = ""

    def __post_init__(self):
        self.resource_names = tuple(self.resource_names)
        self.demand_names = tuple(self.demand_names)
        self.dependencies = tuple(tuple(sorted(deps)) for deps in self.dependencies)
        self.budgets = np.asarray(self.budgets, dtype=np.int64)

    @property
    def num_resources(self) -> int:
        return len(self.resource_names)

    @property
    def num_demands(self) -> int:
        return len(self.demand_names)

    @property
    def num_objectives(self) -> int:
        return self.objectives.num_objectives


@dataclass
class AllocationState:
    """Mutable per-episode state.

    ``allocation[i, j]`` is the amount of resource ``i`` currently assigned to
    demand ``j``; ``production[j]`` equals the minimum allocation across the
    resources demand ``j`` depends on.
    """

    allocation: np.ndarray
    unallocated: np.ndarray
    production: np.ndarray
    step: int = 0

    def copy(self) -> "AllocationState":
        return AllocationState(
            allocation=self.allocation.copy(),
            unallocated=self.unallocated.copy(),
            production=self.production.copy(),
            step=self.step,
        )


class ActionKind(enum.Enum):
    NOOP = "noop"
    ADD = "add"
    REMOVE = "remove"


@dataclass(frozen=True)
class Action:
    kind: ActionKind
    demand: int = 0


def num_actions(config: ProblemConfig) -> int:
    return 2 * config.num_demands + 1


def encode_action(action: Action, num_demands: int) -> int:
    """Flat code: 0 is no-op, 1..D adds, D+1..2D removes."""
    if action.kind is ActionKind.NOOP:
        return 0
    if not 0 <= action.demand < num_demands:
        raise IndexOutOfRange(f"demand index {action.demand} out of range for {num_demands} demands")
    if action.kind is ActionKind.ADD:
        return 1 + action.demand
    return 1 + num_demands + action.demand


def decode_action(code: int, num_demands: int) -> Action:
    code = int(code)
    if code == 0:
        return Action(ActionKind.NOOP)
    if 1 <= code <= num_demands:
        return Action(ActionKind.ADD, code - 1)
    if num_demands < code <= 2 * num_demands:
        return Action(ActionKind.REMOVE, code - num_demands - 1)
    raise IndexOutOfRange(f"action code {code} out of range [0, {2 * num_demands}]")


def validate_config(config: ProblemConfig) -> ProblemConfig:
    """Check every structural invariant; raises a ConfigError subclass on the
    first violation and returns the config unchanged otherwise."""
    num_r, num_d = config.num_resources, config.num_demands
    if num_r < 1:
        raise IndexOutOfRange("a problem needs at least one resource")
    if num_d < 1:
        raise IndexOutOfRange("a problem needs at least one demand")
    if np.any(config.budgets < 0):
        bad = int(np.argmax(config.budgets < 0))
        raise NegativeBudget(f"resource {config.resource_names[bad]!r} has negative budget")
    if len(config.budgets) != num_r:
        raise DimensionMismatch("budgets and resource names disagree in length")
    if len(config.dependencies) != num_d:
        raise DimensionMismatch("dependencies and demand names disagree in length")
    for j, deps in enumerate(config.dependencies):
        if len(deps) == 0:
            raise EmptyDependencySet(
                f"demand {config.demand_names[j]!r} has no required resource"
            )
        for i in deps:
            if not 0 <= i < num_r:
                raise IndexOutOfRange(
                    f"demand {config.demand_names[j]!r} depends on resource index {i}, "
                    f"but there are only {num_r} resources"
                )
    if config.num_objectives < 2:
        raise FewerThanTwoObjectives(
            f"need at least 2 objectives, got {config.num_objectives}"
        )
    if config.objectives.num_inputs != num_d:
        raise DimensionMismatch(
            f"objective set expects {config.objectives.num_inputs} productions, "
            f"problem has {num_d} demands"
        )
    for k, expr in enumerate(config.objectives.expressions):
        for j in expr.production_indices():
            if not 0 <= j < num_d:
                raise IndexOutOfRange(
                    f"objective {k} references production index {j}, "
                    f"but there are only {num_d} demands"
                )
    if not isinstance(config.horizon, (int, np.integer)) or config.horizon < 1:
        raise InvalidHorizon(f"horizon must be a positive integer, got {config.horizon!r}")
    return config


def reset(config: ProblemConfig, preference) -> tuple[AllocationState, np.ndarray]:
    """Fresh episode state (empty allocation, full budgets) plus observation."""
    preference = np.asarray(preference, dtype=np.float64)
    if preference.shape != (config.num_objectives,):
        raise DimensionMismatch(
            f"preference has shape {preference.shape}, "
            f"problem has {config.num_objectives} objectives"
        )
    validate_preference(preference)
    state = AllocationState(
        allocation=np.zeros((config.num_resources, config.num_demands), dtype=np.int64),
        unallocated=config.budgets.copy(),
        production=np.zeros(config.num_demands, dtype=np.int64),
        step=0,
    )
    return state, build_observation(state, config, preference)


def step(
    state: AllocationState, action, config: ProblemConfig
) -> tuple[AllocationState, np.ndarray, bool]:
    """Apply one action in place; returns (state, reward vector, terminated).

    Invalid actions (add without enough unallocated units, remove at zero
    production) leave the allocation unchanged and behave as no-ops. The
    reward is the raw objective vector of the post-action state.
    """
    if state.step >= config.horizon:
        raise EpisodeOver(f"episode already ended at step {state.step}")
    if isinstance(action, Action):
        act = action
    else:
        act = decode_action(action, config.num_demands)

    if act.kind is ActionKind.ADD:
        deps = config.dependencies[act.demand]
        if all(state.unallocated[i] >= 1 for i in deps):
            for i in deps:
                state.unallocated[i] -= 1
                state.allocation[i, act.demand] += 1
            state.production[act.demand] += 1
    elif act.kind is ActionKind.REMOVE:
        if state.production[act.demand] >= 1:
            deps = config.dependencies[act.demand]
            for i in deps:
                state.unallocated[i] += 1
                state.allocation[i, act.demand] -= 1
            state.production[act.demand] -= 1

    state.step += 1
    terminated = state.step == config.horizon
    reward = config.objectives.evaluate(state.production)
    return state, reward, terminated


def action_mask(state: AllocationState, config: ProblemConfig) -> np.ndarray:
    """Boolean vector over flat action codes; true iff the action would change
    the state. The no-op entry is always true."""
    num_d = config.num_demands
    mask = np.zeros(2 * num_d + 1, dtype=bool)
    mask[0] = True
    for j in range(num_d):
        deps = config.dependencies[j]
        mask[1 + j] = all(state.unallocated[i] >= 1 for i in deps)
        mask[1 + num_d + j] = state.production[j] >= 1
    return mask


def build_observation(
    state: AllocationState, config: ProblemConfig, preference
) -> np.ndarray:
    """Flat observation: row-normalized allocation matrix then the preference.

    Row ``i`` is divided by ``budgets[i]``; zero-budget rows map to zeros so
    every allocation entry stays within [0, 1].
    """
    budgets = config.budgets.astype(np.float64)
    norm = np.divide(
        state.allocation.astype(np.float64),
        budgets[:, None],
        out=np.zeros_like(state.allocation, dtype=np.float64),
        where=budgets[:, None] > 0,
    )
    return np.concatenate([norm.ravel(), np.asarray(preference, dtype=np.float64)])


def state_from_observation(flat, config: ProblemConfig) -> AllocationState:
    """Reconstruct the integer allocation state a flat observation encodes.

    The step counter is not part of the observation and comes back as 0.
    """
    num_r, num_d = config.num_resources, config.num_demands
    flat = np.asarray(flat, dtype=np.float64)
    if flat.shape[0] != num_r * num_d + config.num_objectives:
        raise DimensionMismatch(
            f"observation has length {flat.shape[0]}, expected "
            f"{num_r * num_d + config.num_objectives}"
        )
    block = flat[: num_r * num_d].reshape(num_r, num_d)
    allocation = np.rint(block * config.budgets[:, None].astype(np.float64)).astype(np.int64)
    production = np.array(
        [min(allocation[i, j] for i in config.dependencies[j]) for j in range(num_d)],
        dtype=np.int64,
    )
    unallocated = config.budgets - allocation.sum(axis=1)
    return AllocationState(allocation, unallocated, production, step=0)


NODE_TYPE_RESOURCE = 0
NODE_TYPE_DEMAND = 1
NODE_TYPE_POOL = 2


@dataclass
class GraphObservation:
    """Bipartite graph view of an allocation state, as plain arrays.

    Nodes are ordered resources, then demands, then one unallocated-pool
    node. Each node carries two features: resources get (unallocated
    fraction, budget), demands get (production count, production fraction of
    the tightest dependency budget), and the pool gets the totals. Edges run
    resource -> demand for every dependency, carrying the budget-normalized
    allocation, and the preference rides along as a graph-level feature.
    """

    node_features: np.ndarray
    node_types: np.ndarray
    edge_index: np.ndarray
    edge_features: np.ndarray
    preference: np.ndarray

    @property
    def num_nodes(self) -> int:
        return self.node_features.shape[0]

    @property
    def num_edges(self) -> int:
        return self.edge_index.shape[1]


def encode_graph_observation(
    state: AllocationState, config: ProblemConfig, preference
) -> GraphObservation:
    num_r, num_d = config.num_resources, config.num_demands
    budgets = config.budgets.astype(np.float64)

    features = np.zeros((num_r + num_d + 1, 2), dtype=np.float64)
    types = np.empty(num_r + num_d + 1, dtype=np.int64)
    types[:num_r] = NODE_TYPE_RESOURCE
    types[num_r : num_r + num_d] = NODE_TYPE_DEMAND
    types[-1] = NODE_TYPE_POOL

    for i in range(num_r):
        frac = state.unallocated[i] / budgets[i] if budgets[i] > 0 else 0.0
        features[i] = (frac, budgets[i])
    for j in range(num_d):
        cap = min(budgets[i] for i in config.dependencies[j])
        frac = state.production[j] / cap if cap > 0 else 0.0
        features[num_r + j] = (state.production[j], frac)
    total_budget = float(budgets.sum())
    pool_frac = state.unallocated.sum() / total_budget if total_budget > 0 else 0.0
    features[-1] = (pool_frac, total_budget)

    sources, targets, values = [], [], []
    for i in range(num_r):
        for j in range(num_d):
            if i in config.dependencies[j]:
                sources.append(i)
                targets.append(num_r + j)
                values.append(
                    state.allocation[i, j] / budgets[i] if budgets[i] > 0 else 0.0
                )
    edge_index = np.array([sources, targets], dtype=np.int64).reshape(2, -1)
    return GraphObservation(
        node_features=features,
        node_types=types,
        edge_index=edge_index,
        edge_features=np.asarray(values, dtype=np.float64),
        preference=np.asarray(preference, dtype=np.float64),
    )


def resource_utilization(state: AllocationState, config: ProblemConfig) -> float:
    """Fraction of all budgeted units currently allocated."""
    total = int(config.budgets.sum())
    if total == 0:
        raise ZeroBudget("resource utilization is undefined with a zero total budget")
    return float(state.allocation.sum()) / total


def check_state(state: AllocationState, config: ProblemConfig) -> None:
    """Assert every state invariant; used by tests and debugging hooks."""
    assert state.allocation.shape == (config.num_resources, config.num_demands)
    assert np.all(state.allocation >= 0)
    assert np.all(state.unallocated >= 0)
    got = state.unallocated + state.allocation.sum(axis=1)
    assert np.array_equal(got, config.budgets), "resource conservation violated"
    for j in range(config.num_demands):
        deps = set(config.dependencies[j])
        for i in range(config.num_resources):
            if i in deps:
                assert state.allocation[i, j] == state.production[j]
            else:
                assert state.allocation[i, j] == 0
        assert state.production[j] == min(state.allocation[i, j] for i in deps)
    assert 0 <= state.step <= config.horizon
    assert state.production.sum() <= state.step
