"""End-to-end evaluation: lattice rollouts, metrics, reports, exports.

A policy is evaluated on a deterministic preference lattice; each preference
gets one fresh episode rolled out for the full horizon, and the final
objective vectors become the solution set scored by hypervolume and
non-domination. The ordering score runs afterwards on its own separately
sampled preference sweeps and never reuses the lattice rollouts.

Reports serialize to JSON with a stable field order. Wall time is recorded
for humans but excluded from the canonical byte stream, so identical inputs
produce byte-identical canonical reports.
"""
from __future__ import annotations

import csv
import io
import json
import time
from dataclasses import dataclass

import numpy as np

from . import core
from .core import ProblemConfig
from .errors import GraphAllocError
from .metrics import (
    SolutionRecord,
    hv_ratio,
    hypervolume,
    non_dominated_indices,
    ordering_score,
    pnds,
)
from .preferences import das_dennis, default_divisions, lattice_size

__all__ = [
    "EvaluationReport",
    "run_episode",
    "evaluate_policy",
    "os_sensitivity",
    "front_rows",
    "write_front_csv",
    "DEFAULT_OS_SAMPLES",
    "DEFAULT_OS_STEPS",
    "DEFAULT_OS_ALPHA",
]

DEFAULT_OS_SAMPLES = 5
DEFAULT_OS_STEPS = 11
DEFAULT_OS_ALPHA = 1.0


@dataclass
class EvaluationReport:
    """Everything one evaluation run produced, in serializable form."""

    problem_id: str
    seed: int
    lattice: dict
    scalarizer: dict | None
    policy: dict
    solutions: list[SolutionRecord]
    hv: float
    hv_ratio: float | None
    pnds: float
    ordering_score: dict
    resource_utilization: float
    wall_time: float
    schema_version: int = 1

    def to_dict(self, include_wall_time: bool = True) -> dict:
        doc = {
            "schema_version": self.schema_version,
            "problem_id": self.problem_id,
            "seed": self.seed,
            "lattice": self.lattice,
            "scalarizer": self.scalarizer,
            "policy": self.policy,
            "solutions": [
                {
                    "preference": list(record.preference),
                    "production": list(record.production),
                    "objectives": list(record.objectives),
                }
                for record in self.solutions
            ],
            "hv": self.hv,
            "hv_ratio": self.hv_ratio,
            "pnds": self.pnds,
            "ordering_score": self.ordering_score,
            "resource_utilization": self.resource_utilization,
        }
        if include_wall_time:
            doc["wall_time"] = self.wall_time
        return doc

    def canonical_json(self) -> str:
        """Deterministic byte-for-byte serialization; wall time excluded."""
        return json.dumps(self.to_dict(include_wall_time=False), sort_keys=True)


def run_episode(policy, config: ProblemConfig, preference) -> core.AllocationState:
    """One deterministic full-horizon episode; returns the final state."""
    preference = np.asarray(preference, dtype=np.float64)
    state, obs = core.reset(config, preference)
    policy.start_episode(config, preference)
    for _ in range(config.horizon):
        action = policy.act(obs, preference)
        state, _, _ = core.step(state, action, config)
        obs = core.build_observation(state, config, preference)
    return state


def evaluate_policy(
    policy,
    config: ProblemConfig,
    divisions: int | None = None,
    os_samples: int = DEFAULT_OS_SAMPLES,
    os_steps: int = DEFAULT_OS_STEPS,
    os_alpha: float = DEFAULT_OS_ALPHA,
    seed: int = 0,
    ideal_hv: float | None = None,
) -> EvaluationReport:
    """Run the full evaluation protocol for one policy on one problem.

    ``ideal_hv`` enables the hypervolume ratio; leave it None when the oracle
    is unavailable and the report carries the raw hypervolume only. The seed
    feeds the ordering-score sweep sampling; lattice rollouts are fully
    deterministic and take no randomness from it.
    """
    started = time.perf_counter()
    n = config.num_objectives
    if divisions is None:
        divisions = default_divisions(n)
    lattice = das_dennis(n, divisions)

    solutions: list[SolutionRecord] = []
    utilizations: list[float] = []
    total_budget = int(config.budgets.sum())
    for w in lattice:
        try:
            final = run_episode(policy, config, w)
        except GraphAllocError as failure:
            if hasattr(failure, "add_note"):
                failure.add_note(f"rollout aborted at preference {w.tolist()}")
            raise
        objectives = config.objectives.evaluate(final.production)
        solutions.append(
            SolutionRecord(
                preference=tuple(float(v) for v in w),
                production=tuple(int(v) for v in final.production),
                objectives=tuple(float(v) for v in objectives),
            )
        )
        utilizations.append(
            float(final.allocation.sum()) / total_budget if total_budget else 0.0
        )

    points = np.array([record.objectives for record in solutions])
    measured_hv = hypervolume(points)
    ratio = hv_ratio(points, ideal_hv) if ideal_hv is not None else None

    os_rng = np.random.Generator(np.random.PCG64(seed))
    os_value = ordering_score(
        policy, config, n_samp=os_samples, n_step=os_steps, alpha=os_alpha, rng=os_rng
    )

    report = EvaluationReport(
        problem_id=config.problem_id,
        seed=int(seed),
        lattice={"divisions": int(divisions), "count": int(lattice.shape[0])},
        scalarizer=policy.describe().get("scalarizer") if hasattr(policy, "describe") else None,
        policy=policy.describe() if hasattr(policy, "describe") else {"name": "external"},
        solutions=solutions,
        hv=float(measured_hv),
        hv_ratio=None if ratio is None else float(ratio),
        pnds=float(pnds(points)),
        ordering_score={
            "value": float(os_value),
            "n_samp": int(os_samples),
            "n_step": int(os_steps),
            "alpha": float(os_alpha),
        },
        resource_utilization=float(np.mean(utilizations)),
        wall_time=time.perf_counter() - started,
    )
    assert report.lattice["count"] == lattice_size(n, divisions)
    assert 0.0 <= report.pnds <= 1.0
    assert 0.0 <= report.ordering_score["value"] <= 1.0
    if report.hv_ratio is not None:
        assert 0.0 <= report.hv_ratio <= 1.0 + 1e-9
    return report


def os_sensitivity(
    policy,
    config: ProblemConfig,
    alphas,
    seeds,
    n_samp: int = DEFAULT_OS_SAMPLES,
    n_step: int = DEFAULT_OS_STEPS,
) -> list[dict]:
    """Ordering score per Dirichlet concentration, aggregated over seeds.

    Returns one row per alpha: {"alpha", "mean", "std", "scores"} with the
    per-seed scores preserved for auditing. The standard deviation is the
    population value over the seeds.
    """
    rows = []
    for alpha in alphas:
        scores = []
        for seed in seeds:
            rng = np.random.Generator(np.random.PCG64(int(seed)))
            scores.append(
                ordering_score(
                    policy, config, n_samp=n_samp, n_step=n_step, alpha=float(alpha), rng=rng
                )
            )
        rows.append(
            {
                "alpha": float(alpha),
                "mean": float(np.mean(scores)),
                "std": float(np.std(scores)),
                "scores": [float(s) for s in scores],
            }
        )
    return rows


def front_rows(document: dict) -> list[dict]:
    """Flatten a report or oracle front file into plot-ready rows.

    Each row carries the preference weights (when present), the objective
    values, and whether the point is dominated within the exported set. Rows
    sort by preference components ascending, falling back to objective order
    for front files that carry no preferences.
    """
    if "solutions" in document:
        entries = [
            {"preference": s["preference"], "objectives": s["objectives"]}
            for s in document["solutions"]
        ]
    elif "points" in document:
        entries = [{"preference": None, "objectives": p} for p in document["points"]]
    else:
        raise GraphAllocError(
            "document has neither 'solutions' (report) nor 'points' (front file)"
        )
    points = np.array([e["objectives"] for e in entries])
    keep = set(non_dominated_indices(points))
    rows = []
    for idx, entry in enumerate(entries):
        row: dict = {}
        if entry["preference"] is not None:
            for k, w in enumerate(entry["preference"]):
                row[f"w_{k}"] = float(w)
        for k, j in enumerate(entry["objectives"]):
            row[f"j_{k}"] = float(j)
        row["dominated"] = idx not in keep
        rows.append(row)

    def _numbered(row: dict, prefix: str) -> list[str]:
        names = [k for k in row if k.startswith(prefix)]
        return sorted(names, key=lambda k: int(k.split("_")[1]))

    def sort_key(row: dict):
        weights = tuple(row[k] for k in _numbered(row, "w_"))
        values = tuple(row[k] for k in _numbered(row, "j_"))
        return weights + values

    rows.sort(key=sort_key)
    return rows


def write_front_csv(rows: list[dict]) -> str:
    """Render front rows as CSV text with a stable column order."""
    if not rows:
        return ""
    by_index = lambda k: int(k.split("_")[1])
    weight_cols = sorted((k for k in rows[0] if k.startswith("w_")), key=by_index)
    value_cols = sorted((k for k in rows[0] if k.startswith("j_")), key=by_index)
    columns = weight_cols + value_cols + ["dominated"]
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=columns, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({**row, "dominated": int(row["dominated"])})
    return buffer.getvalue()
