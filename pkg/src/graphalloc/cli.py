"""Command-line front end.

Subcommands mirror the library surface: enumerate problems, compute oracle
fronts, evaluate policies, re-score saved solution sets, sweep the
ordering-score concentration, and export plot-ready front tables.

Exit codes: 0 success; 2 configuration or input errors (unknown problem,
invalid spec, malformed preference or expression); 3 oracle refusal because
the feasible set is too large; 1 anything else.
"""
from __future__ import annotations

import argparse
import importlib
import json
import sys
from pathlib import Path

import numpy as np

from .errors import (
    ConfigError,
    DimensionMismatch,
    ExpressionError,
    GraphAllocError,
    InvalidPreference,
    InvalidSpec,
    TooLarge,
    UnknownProblem,
)
from .harness import (
    DEFAULT_OS_ALPHA,
    DEFAULT_OS_SAMPLES,
    DEFAULT_OS_STEPS,
    evaluate_policy,
    front_rows,
    os_sensitivity,
    write_front_csv,
)
from .metrics import hv_ratio, hypervolume, pnds
from .oracle import DEFAULT_SIZE_LIMIT, ideal_front
from .policies import (
    ExhaustivePlanner,
    GreedyPolicy,
    PreferencePolicy,
    RandomPolicy,
    warmed_normalizer,
)
from .problems import list_problems, load_problem
from .scalarize import DEFAULT_MU, DEFAULT_THETA, Normalizer, ScalarizerSpec

USAGE_ERROR_TYPES = (
    ConfigError,
    UnknownProblem,
    InvalidSpec,
    ExpressionError,
    InvalidPreference,
    DimensionMismatch,
)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="graphalloc",
        description="Preference-conditioned resource-allocation benchmark runner.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    list_cmd = sub.add_parser("list-problems", help="enumerate the problem suite")
    list_cmd.add_argument("--problem-dir", default=None, help="extra problem directory")

    oracle_cmd = sub.add_parser(
        "oracle", help="enumerate the feasible set and write the ideal front"
    )
    oracle_cmd.add_argument("problem")
    oracle_cmd.add_argument("--problem-dir", default=None)
    oracle_cmd.add_argument("--out", default=None, help="front file path (default stdout)")
    oracle_cmd.add_argument(
        "--size-limit", type=int, default=DEFAULT_SIZE_LIMIT,
        help="refuse enumeration beyond this many feasible vectors",
    )

    eval_cmd = sub.add_parser("evaluate", help="evaluate a policy on a problem")
    eval_cmd.add_argument("problem")
    eval_cmd.add_argument("--problem-dir", default=None)
    eval_cmd.add_argument(
        "--policy", required=True, choices=["random", "greedy", "planner", "external"]
    )
    eval_cmd.add_argument(
        "--external", default=None,
        help="module:attr of a policy instance or zero-argument policy factory "
        "(required with --policy external)",
    )
    eval_cmd.add_argument("--front-file", default=None, help="oracle front file for the HV ratio")
    eval_cmd.add_argument(
        "--require-ratio", action="store_true",
        help="compute the oracle inline when no front file is given; "
        "exit 3 if the feasible set is too large",
    )
    eval_cmd.add_argument("--scalarizer", default="smooth-tchebycheff",
                          help="greedy policy scalarizer (weighted-sum, tchebycheff, "
                          "smooth-tchebycheff, pbi)")
    eval_cmd.add_argument("--mu", type=float, default=DEFAULT_MU)
    eval_cmd.add_argument("--theta", type=float, default=DEFAULT_THETA)
    eval_cmd.add_argument("--seed", type=int, default=0)
    eval_cmd.add_argument("--pref-divisions", type=int, default=None,
                          help="preference lattice divisions (default per objective count)")
    eval_cmd.add_argument("--os-samples", type=int, default=DEFAULT_OS_SAMPLES)
    eval_cmd.add_argument("--os-steps", type=int, default=DEFAULT_OS_STEPS)
    eval_cmd.add_argument("--os-alpha", type=float, default=DEFAULT_OS_ALPHA)
    eval_cmd.add_argument("--out", default=None, help="report path (default stdout)")

    score_cmd = sub.add_parser("score", help="re-score a saved solution set")
    score_cmd.add_argument("solution_file")
    score_cmd.add_argument("--front-file", default=None)

    sens_cmd = sub.add_parser(
        "os-sensitivity", help="ordering score across Dirichlet concentrations"
    )
    sens_cmd.add_argument("problem")
    sens_cmd.add_argument("--problem-dir", default=None)
    sens_cmd.add_argument("--policy", default="random",
                          choices=["random", "greedy", "planner", "external"])
    sens_cmd.add_argument("--external", default=None)
    sens_cmd.add_argument("--scalarizer", default="smooth-tchebycheff")
    sens_cmd.add_argument("--mu", type=float, default=DEFAULT_MU)
    sens_cmd.add_argument("--theta", type=float, default=DEFAULT_THETA)
    sens_cmd.add_argument("--alphas", type=float, nargs="+", required=True)
    sens_cmd.add_argument("--seeds", type=int, nargs="+", default=[0, 1, 2])
    sens_cmd.add_argument("--os-samples", type=int, default=DEFAULT_OS_SAMPLES)
    sens_cmd.add_argument("--os-steps", type=int, default=DEFAULT_OS_STEPS)

    export_cmd = sub.add_parser(
        "export-front", help="flatten a report or front file to CSV"
    )
    export_cmd.add_argument("input_file")
    export_cmd.add_argument("--out", default=None, help="CSV path (default stdout)")

    return parser


def _build_policy(args, config) -> PreferencePolicy:
    if args.policy == "random":
        return RandomPolicy(getattr(args, "seed", 0))
    if args.policy == "greedy":
        spec = ScalarizerSpec.from_str(args.scalarizer, mu=args.mu, theta=args.theta)
        return GreedyPolicy(spec, warmed_normalizer(config))
    if args.policy == "planner":
        return ExhaustivePlanner(config)
    if not args.external:
        raise InvalidSpec("--policy external requires --external module:attr")
    module_name, _, attr_name = args.external.partition(":")
    if not attr_name:
        raise InvalidSpec("--external must look like package.module:attribute")
    try:
        target = getattr(importlib.import_module(module_name), attr_name)
    except (ImportError, AttributeError) as exc:
        raise InvalidSpec(f"cannot resolve external policy {args.external!r}: {exc}") from exc
    policy = target() if not isinstance(target, PreferencePolicy) and callable(target) else target
    if not hasattr(policy, "act"):
        raise InvalidSpec(f"{args.external!r} does not provide an act method")
    return policy


def _emit(payload: str, out: str | None) -> None:
    if out:
        Path(out).write_text(payload)
    else:
        sys.stdout.write(payload if payload.endswith("\n") else payload + "\n")


def _cmd_list_problems(args) -> int:
    rows = list_problems(args.problem_dir)
    width = max((len(r["problem_id"]) for r in rows), default=2) + 2
    fam_width = max((len(r["family"]) for r in rows), default=6) + 2
    for row in rows:
        tag = "generated" if row["generated"] else "encoded"
        print(
            f"{row['problem_id']:<{width}}{row['family']:<{fam_width}}{tag:<11}{row['notes']}"
        )
    return 0


def _cmd_oracle(args) -> int:
    config = load_problem(args.problem, args.problem_dir)
    front = ideal_front(config, size_limit=args.size_limit)
    doc = {
        "schema_version": 1,
        "problem_id": config.problem_id,
        "ideal_hv": front.hv,
        "feasible_size": front.feasible_size,
        "horizon_bound_applied": front.horizon_bound_applied,
        "points": [[float(v) for v in p] for p in front.points],
        "productions": [[int(v) for v in p] for p in front.productions],
    }
    _emit(json.dumps(doc, indent=2), args.out)
    return 0


def _resolve_ideal_hv(args, config) -> float | None:
    if args.front_file:
        doc = json.loads(Path(args.front_file).read_text())
        return float(doc["ideal_hv"])
    if args.require_ratio:
        return ideal_front(config).hv
    return None


def _cmd_evaluate(args) -> int:
    config = load_problem(args.problem, args.problem_dir)
    policy = _build_policy(args, config)
    ideal_hv = _resolve_ideal_hv(args, config)
    report = evaluate_policy(
        policy,
        config,
        divisions=args.pref_divisions,
        os_samples=args.os_samples,
        os_steps=args.os_steps,
        os_alpha=args.os_alpha,
        seed=args.seed,
        ideal_hv=ideal_hv,
    )
    _emit(json.dumps(report.to_dict(), indent=2), args.out)
    if args.out:
        ratio = "n/a" if report.hv_ratio is None else f"{report.hv_ratio:.6f}"
        print(
            f"hv={report.hv:.6f} hv_ratio={ratio} pnds={report.pnds:.4f} "
            f"os={report.ordering_score['value']:.4f} -> {args.out}"
        )
    return 0


def _cmd_score(args) -> int:
    doc = json.loads(Path(args.solution_file).read_text())
    if "solutions" not in doc:
        raise InvalidSpec(
            f"{args.solution_file} has no 'solutions' field; expected a report "
            "or solution-set document"
        )
    points = np.array([s["objectives"] for s in doc["solutions"]], dtype=np.float64)
    result = {
        "count": int(points.shape[0]),
        "hv": float(hypervolume(points)),
        "pnds": float(pnds(points)),
    }
    if args.front_file:
        front = json.loads(Path(args.front_file).read_text())
        result["hv_ratio"] = float(hv_ratio(points, float(front["ideal_hv"])))
    print(json.dumps(result, indent=2))
    return 0


def _cmd_os_sensitivity(args) -> int:
    config = load_problem(args.problem, args.problem_dir)
    args.seed = args.seeds[0]
    policy = _build_policy(args, config)
    rows = os_sensitivity(
        policy,
        config,
        alphas=args.alphas,
        seeds=args.seeds,
        n_samp=args.os_samples,
        n_step=args.os_steps,
    )
    print(json.dumps(rows, indent=2))
    return 0


def _cmd_export_front(args) -> int:
    doc = json.loads(Path(args.input_file).read_text())
    _emit(write_front_csv(front_rows(doc)), args.out)
    return 0


_COMMANDS = {
    "list-problems": _cmd_list_problems,
    "oracle": _cmd_oracle,
    "evaluate": _cmd_evaluate,
    "score": _cmd_score,
    "os-sensitivity": _cmd_os_sensitivity,
    "export-front": _cmd_export_front,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except TooLarge as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except USAGE_ERROR_TYPES as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except GraphAllocError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (OSError, json.JSONDecodeError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
