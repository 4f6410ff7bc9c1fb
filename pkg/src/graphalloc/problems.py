"""The shipped problem suite: encoded instances and seeded generators.

Problems live as JSON documents. An encoded file spells out budgets,
dependencies, and objective expression trees exactly; a generator manifest
instead names a family and a seed, and the instance is rebuilt
deterministically on load. Both forms share one id namespace and resolve
through ``load_problem``.

Generator families:

``random-deps``
    Dependency edges sampled per demand at a given density (resampled until
    non-empty), budgets uniform over a range, objectives assembled per
    objective from a term bank (linear, log, bump, s-curve, capped quadratic,
    ripple) over a random non-empty subset of demands. Every objective keeps
    at least one increasing term so it cannot collapse to a constant.

``large-graph``
    Sparse wide bipartite graphs; every objective is a monotone sum of
    log and linear terms over a random non-empty subset of productions.

``monotone-scaling``
    One private resource per demand and exactly one objective per demand,
    J_i strictly increasing in P_i alone; built for studying how ordering
    metrics behave as the objective count grows with the demand count.
"""
from __future__ import annotations

import json
import os
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .core import ProblemConfig, validate_config
from .errors import InvalidSpec, UnknownProblem
from .objectives import ObjectiveSet, expression_to_node, parse_expression

__all__ = [
    "GeneratorSpec",
    "generate_problem",
    "load_problem",
    "list_problems",
    "config_to_document",
    "config_from_document",
    "packaged_problem_dir",
    "PROBLEM_DIR_ENV",
]

PROBLEM_DIR_ENV = "GRAPHALLOC_PROBLEM_DIR"
_FILE_PREFIX = "problem_"
EPSILON = 1e-8

GENERATOR_FAMILIES = ("random-deps", "large-graph", "monotone-scaling")


def packaged_problem_dir() -> Path:
    return Path(__file__).parent / "data"


@dataclass(frozen=True)
class GeneratorSpec:
    """Seeded recipe for one random problem instance.

    The RNG is PCG64 seeded with ``rng_seed``; identical specs rebuild
    byte-identical configs on any platform.
    """

    family: str
    num_resources: int
    num_demands: int
    num_objectives: int
    budget_range: tuple[int, int]
    density: float
    horizon: int
    rng_seed: int

    def __post_init__(self):
        if self.family not in GENERATOR_FAMILIES:
            raise InvalidSpec(
                f"unknown generator family {self.family!r}; valid: "
                + ", ".join(GENERATOR_FAMILIES)
            )
        if self.num_resources < 1 or self.num_demands < 1:
            raise InvalidSpec("need at least one resource and one demand")
        if self.num_objectives < 2:
            raise InvalidSpec("need at least 2 objectives")
        if not (0.0 < self.density <= 1.0):
            raise InvalidSpec(f"density must lie in (0, 1], got {self.density}")
        lo, hi = self.budget_range
        if lo < 0 or hi < lo:
            raise InvalidSpec(f"budget range must satisfy 0 <= lo <= hi, got {self.budget_range}")
        if self.horizon < 1:
            raise InvalidSpec(f"horizon must be >= 1, got {self.horizon}")
        if self.family == "monotone-scaling":
            if self.num_objectives != self.num_demands:
                raise InvalidSpec(
                    "monotone-scaling pins one objective per demand; "
                    f"got {self.num_objectives} objectives for {self.num_demands} demands"
                )
            if self.num_resources != self.num_demands:
                raise InvalidSpec(
                    "monotone-scaling uses one private resource per demand; "
                    "num_resources must equal num_demands"
                )

    def to_dict(self) -> dict:
        return {
            "family": self.family,
            "num_resources": self.num_resources,
            "num_demands": self.num_demands,
            "num_objectives": self.num_objectives,
            "budget_range": list(self.budget_range),
            "density": self.density,
            "horizon": self.horizon,
            "rng_seed": self.rng_seed,
        }

    @classmethod
    def from_dict(cls, payload: dict) -> "GeneratorSpec":
        try:
            return cls(
                family=payload["family"],
                num_resources=int(payload["num_resources"]),
                num_demands=int(payload["num_demands"]),
                num_objectives=int(payload["num_objectives"]),
                budget_range=tuple(int(v) for v in payload["budget_range"]),
                density=float(payload["density"]),
                horizon=int(payload["horizon"]),
                rng_seed=int(payload["rng_seed"]),
            )
        except KeyError as missing:
            raise InvalidSpec(f"generator spec is missing field {missing}") from None


def _sample_dependencies(spec: GeneratorSpec, rng: np.random.Generator):
    deps = []
    for _ in range(spec.num_demands):
        while True:
            mask = rng.random(spec.num_resources) < spec.density
            if mask.any():
                break
        deps.append(tuple(int(i) for i in np.flatnonzero(mask)))
    return tuple(deps)


def _log_term(coeff: float, index: int) -> dict:
    return {
        "op": "mul",
        "args": [
            {"op": "const", "value": coeff},
            {"op": "log", "offset": 1.0 + EPSILON, "arg": {"op": "prod", "index": index}},
        ],
    }


def _linear_term(coeff: float, index: int) -> dict:
    return {
        "op": "mul",
        "args": [{"op": "const", "value": coeff}, {"op": "prod", "index": index}],
    }


def _subset(rng: np.random.Generator, count: int, probability: float) -> list[int]:
    while True:
        mask = rng.random(count) < probability
        if mask.any():
            return [int(j) for j in np.flatnonzero(mask)]


def _random_deps_objective(spec: GeneratorSpec, rng: np.random.Generator) -> dict:
    terms: list[dict] = []
    members = _subset(rng, spec.num_demands, 0.5)
    # one increasing backbone term keeps the objective from flattening to zero
    anchor = int(rng.choice(members))
    if rng.random() < 0.5:
        terms.append(_log_term(float(np.round(rng.uniform(1.0, 5.0), 3)), anchor))
    else:
        terms.append(_linear_term(float(np.round(rng.uniform(0.2, 2.0), 3)), anchor))
    for j in members:
        kind = rng.choice(["gaussian", "logistic", "capped-quad", "ripple", "linear", "none"])
        if kind == "gaussian":
            terms.append(
                {
                    "op": "gaussian",
                    "amplitude": float(np.round(rng.uniform(1.0, 8.0), 3)),
                    "width": float(np.round(rng.uniform(0.1, 1.5), 3)),
                    "center": float(np.round(rng.uniform(1.0, 8.0), 3)),
                    "arg": {"op": "prod", "index": j},
                }
            )
        elif kind == "logistic":
            slope = float(np.round(rng.uniform(0.4, 1.2), 3))
            if rng.random() < 0.5:
                slope = -slope  # rising s-curve
            terms.append(
                {
                    "op": "logistic",
                    "amplitude": float(np.round(rng.uniform(2.0, 12.0), 3)),
                    "slope": slope,
                    "center": float(np.round(rng.uniform(2.0, 7.0), 3)),
                    "arg": {"op": "prod", "index": j},
                }
            )
        elif kind == "capped-quad":
            terms.append(
                {
                    "op": "min",
                    "args": [
                        {
                            "op": "mul",
                            "args": [
                                {"op": "const", "value": float(np.round(rng.uniform(0.3, 1.0), 3))},
                                {"op": "pow", "exponent": 2.0, "arg": {"op": "prod", "index": j}},
                            ],
                        },
                        {"op": "const", "value": float(np.round(rng.uniform(8.0, 25.0), 3))},
                    ],
                }
            )
        elif kind == "ripple":
            terms.append(
                {
                    "op": "mul",
                    "args": [
                        {"op": "const", "value": float(np.round(rng.uniform(0.5, 3.0), 3))},
                        {
                            "op": "sin",
                            "frequency": float(np.round(rng.uniform(0.5, 3.0), 3)),
                            "phase": float(np.round(rng.uniform(0.0, 3.0), 3)),
                            "arg": {"op": "prod", "index": j},
                        },
                    ],
                }
            )
        elif kind == "linear":
            terms.append(_linear_term(float(np.round(rng.uniform(0.2, 1.5), 3)), j))
    if len(terms) == 1:
        return terms[0]
    return {"op": "add", "args": terms}


def _large_graph_objective(spec: GeneratorSpec, rng: np.random.Generator) -> dict:
    members = _subset(rng, spec.num_demands, min(0.1, max(2.0 / spec.num_demands, 0.02)))
    terms = []
    for j in members:
        terms.append(_log_term(float(np.round(rng.uniform(0.5, 3.0), 3)), j))
        terms.append(_linear_term(float(np.round(rng.uniform(0.05, 0.5), 3)), j))
    if len(terms) == 1:
        return terms[0]
    return {"op": "add", "args": terms}


def _monotone_objective(index: int, rng: np.random.Generator) -> dict:
    log_coeff = float(np.round(rng.uniform(1.0, 5.0), 3))
    lin_coeff = float(np.round(rng.uniform(0.1, 1.0), 3))
    return {"op": "add", "args": [_log_term(log_coeff, index), _linear_term(lin_coeff, index)]}


def generate_problem(spec: GeneratorSpec, problem_id: str = "", notes: str = "") -> ProblemConfig:
    """Build a problem instance from a generator spec, deterministically."""
    rng = np.random.Generator(np.random.PCG64(spec.rng_seed))

    if spec.family == "monotone-scaling":
        dependencies = tuple((j,) for j in range(spec.num_demands))
    else:
        dependencies = _sample_dependencies(spec, rng)

    lo, hi = spec.budget_range
    budgets = rng.integers(lo, hi + 1, size=spec.num_resources)

    nodes: list[dict] = []
    for i in range(spec.num_objectives):
        if spec.family == "random-deps":
            nodes.append(_random_deps_objective(spec, rng))
        elif spec.family == "large-graph":
            nodes.append(_large_graph_objective(spec, rng))
        else:
            nodes.append(_monotone_objective(i, rng))

    objectives = ObjectiveSet(
        expressions=tuple(parse_expression(node) for node in nodes),
        num_inputs=spec.num_demands,
    )
    config = ProblemConfig(
        resource_names=tuple(f"R{i}" for i in range(spec.num_resources)),
        budgets=budgets,
        demand_names=tuple(f"D{j}" for j in range(spec.num_demands)),
        dependencies=dependencies,
        objectives=objectives,
        horizon=spec.horizon,
        problem_id=problem_id,
        family=spec.family,
        notes=notes,
    )
    return validate_config(config)


def config_to_document(config: ProblemConfig) -> dict:
    """Serializable problem document; stable key order under sort_keys."""
    return {
        "schema_version": 1,
        "problem_id": config.problem_id,
        "family": config.family,
        "notes": config.notes,
        "horizon": int(config.horizon),
        "resources": [
            {"name": name, "budget": int(budget)}
            for name, budget in zip(config.resource_names, config.budgets)
        ],
        "demands": list(config.demand_names),
        "dependencies": {
            config.demand_names[j]: [config.resource_names[i] for i in deps]
            for j, deps in enumerate(config.dependencies)
        },
        "objectives": [expression_to_node(expr) for expr in config.objectives.expressions],
    }


def config_from_document(doc: dict) -> ProblemConfig:
    resource_names = tuple(entry["name"] for entry in doc["resources"])
    budgets = np.array([int(entry["budget"]) for entry in doc["resources"]], dtype=np.int64)
    demand_names = tuple(doc["demands"])
    index_of = {name: i for i, name in enumerate(resource_names)}
    dependencies = tuple(
        tuple(sorted(index_of[res] for res in doc["dependencies"][demand]))
        for demand in demand_names
    )
    objectives = ObjectiveSet(
        expressions=tuple(parse_expression(node) for node in doc["objectives"]),
        num_inputs=len(demand_names),
    )
    config = ProblemConfig(
        resource_names=resource_names,
        budgets=budgets,
        demand_names=demand_names,
        dependencies=dependencies,
        objectives=objectives,
        horizon=int(doc["horizon"]),
        problem_id=str(doc.get("problem_id", "")),
        family=str(doc.get("family", "custom")),
        notes=str(doc.get("notes", "")),
    )
    return validate_config(config)


def _search_dirs(problem_dir: str | Path | None) -> list[Path]:
    dirs = []
    if problem_dir is not None:
        dirs.append(Path(problem_dir))
    env_dir = os.environ.get(PROBLEM_DIR_ENV)
    if env_dir:
        dirs.append(Path(env_dir))
    dirs.append(packaged_problem_dir())
    return dirs


def _load_document(problem_id: str, problem_dir) -> dict:
    filename = f"{_FILE_PREFIX}{problem_id}.json"
    for directory in _search_dirs(problem_dir):
        path = directory / filename
        if path.is_file():
            return json.loads(path.read_text())
    raise UnknownProblem(
        f"no problem named {problem_id!r}; run the list-problems command to see "
        "what ships, or point GRAPHALLOC_PROBLEM_DIR at a directory of problem files"
    )


def load_problem(problem_id: str, problem_dir: str | Path | None = None) -> ProblemConfig:
    """Resolve a problem id to a validated config.

    Directories are searched in order: the explicit argument, the
    GRAPHALLOC_PROBLEM_DIR environment variable, then the packaged suite.
    Manifest documents (those carrying a "generator" key) are regenerated
    from their seed on every load.
    """
    doc = _load_document(str(problem_id), problem_dir)
    if "generator" in doc:
        spec = GeneratorSpec.from_dict(doc["generator"])
        return generate_problem(
            spec,
            problem_id=str(doc.get("problem_id", problem_id)),
            notes=str(doc.get("notes", "")),
        )
    return config_from_document(doc)


def list_problems(problem_dir: str | Path | None = None) -> list[dict]:
    """Enumerate every resolvable problem id with its family tag and notes."""
    rows: dict[str, dict] = {}
    for directory in reversed(_search_dirs(problem_dir)):
        if not directory.is_dir():
            continue
        for path in sorted(directory.glob(f"{_FILE_PREFIX}*.json")):
            problem_id = path.stem[len(_FILE_PREFIX) :]
            try:
                doc = json.loads(path.read_text())
            except json.JSONDecodeError:
                continue
            family = doc.get("family")
            if family is None and "generator" in doc:
                family = doc["generator"].get("family", "generated")
            rows[problem_id] = {
                "problem_id": problem_id,
                "family": family or "custom",
                "generated": "generator" in doc,
                "notes": doc.get("notes", ""),
            }
    return [rows[key] for key in sorted(rows)]
