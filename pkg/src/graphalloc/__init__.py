"""Preference-conditioned multi-objective resource-allocation benchmark.

The package splits into an environment core (allocation dynamics and
observations), an objective expression DSL, preference sampling,
scalarization, exact metrics, brute-force oracles with baseline policies, a
problem suite, and the evaluation harness behind the ``graphalloc`` CLI.
"""
from . import errors
from .core import (
    Action,
    ActionKind,
    AllocationState,
    GraphObservation,
    ProblemConfig,
    action_mask,
    build_observation,
    decode_action,
    encode_action,
    encode_graph_observation,
    num_actions,
    reset,
    resource_utilization,
    state_from_observation,
    step,
    validate_config,
)
from .harness import (
    EvaluationReport,
    evaluate_policy,
    front_rows,
    os_sensitivity,
    run_episode,
    write_front_csv,
)
from .metrics import (
    SolutionRecord,
    dominates,
    hv_ratio,
    hypervolume,
    non_dominated_indices,
    ordering_score,
    ordering_score_from_responses,
    pareto_filter,
    pnds,
    spearman,
)
from .objectives import (
    ObjectiveSet,
    evaluate_objectives,
    expression_to_node,
    parse_expression,
)
from .oracle import FeasibleSet, IdealFront, enumerate_feasible, ideal_front
from .policies import (
    ExhaustivePlanner,
    GreedyPolicy,
    PreferencePolicy,
    RandomPolicy,
    exhaustive_planner,
    greedy_policy,
    random_policy,
)
from .preferences import (
    SweepSet,
    build_sweeps,
    das_dennis,
    default_divisions,
    lattice_size,
    sample_dirichlet,
    validate_preference,
)
from .problems import (
    GeneratorSpec,
    config_from_document,
    config_to_document,
    generate_problem,
    list_problems,
    load_problem,
)
from .scalarize import (
    Normalizer,
    ScalarizationMethod,
    ScalarizerSpec,
    merge_normalizers,
    scalarize,
)

__version__ = "0.1.0"
