"""Packaged problem suite, generators, and problem-file round-trips."""
import json

import numpy as np
import pytest

from graphalloc.core import validate_config
from graphalloc.errors import InvalidSpec, UnknownProblem
from graphalloc.problems import (
    PROBLEM_DIR_ENV,
    GeneratorSpec,
    config_from_document,
    config_to_document,
    generate_problem,
    list_problems,
    load_problem,
    packaged_problem_dir,
)

ALL_IDS = [
    "0", "1a", "1b", "1c",
    "2a", "2b", "2c",
    "3a", "3b",
    "4a", "4b",
    "5a", "5b", "5c", "5d", "5e",
    "6a", "6b", "6c",
    "mono5", "mono10", "mono15", "mono20",
]


class TestEncodedProblems:
    @pytest.mark.parametrize("problem_id", ["0", "1a", "1b", "1c"])
    def test_two_by_two_shape(self, problem_id):
        config = load_problem(problem_id)
        assert config.num_resources == 2
        assert config.num_demands == 2
        assert config.num_objectives == 2
        assert config.budgets.tolist() == [9, 9]
        assert config.horizon == 20
        # both demands consume both resources
        assert config.dependencies == ((0, 1), (0, 1))
        assert config.problem_id == problem_id

    def test_problem_zero_objective_values(self):
        config = load_problem("0")
        j = config.objectives.evaluate([1, 0])
        assert j[0] == pytest.approx(10 * np.log(2 + 1e-8))
        assert j[1] == pytest.approx(10 * np.log(1 + 1e-8))


class TestSuite:
    def test_listing_matches_expected_ids(self):
        rows = list_problems()
        assert [row["problem_id"] for row in rows] == sorted(ALL_IDS)
        for row in rows:
            assert {"problem_id", "family", "generated", "notes"} <= set(row)

    @pytest.mark.parametrize("problem_id", ALL_IDS)
    def test_every_problem_loads_and_validates(self, problem_id):
        config = load_problem(problem_id)
        assert validate_config(config) is config
        assert config.num_objectives >= 2
        assert all(len(deps) >= 1 for deps in config.dependencies)
        assert config.problem_id == problem_id

    def test_unknown_problem(self):
        with pytest.raises(UnknownProblem):
            load_problem("9z")

    def test_generated_problems_are_stable_across_loads(self):
        first = config_to_document(load_problem("5a"))
        second = config_to_document(load_problem("5a"))
        assert json.dumps(first, sort_keys=True) == json.dumps(second, sort_keys=True)

    def test_fully_dense_family_member(self):
        config = load_problem("2a")
        assert config.num_resources == 3
        assert config.num_demands == 5
        # density 1.0: every demand depends on every resource
        assert all(deps == (0, 1, 2) for deps in config.dependencies)

    def test_large_graph_dimensions(self):
        config = load_problem("6a")
        assert config.num_resources == 100
        assert config.num_demands == 100
        assert config.num_objectives == 5

    def test_monotone_scaling_structure(self):
        config = load_problem("mono5")
        assert config.num_resources == config.num_demands == config.num_objectives == 5
        # one private resource per demand, objective i reads only production i
        assert config.dependencies == tuple((i,) for i in range(5))
        for i, expr in enumerate(config.objectives.expressions):
            assert expr.production_indices() == {i}

    @pytest.mark.parametrize("problem_id", ["mono5", "mono10"])
    def test_monotone_scaling_objectives_increase(self, problem_id):
        config = load_problem(problem_id)
        n = config.num_demands
        for i in range(n):
            values = []
            for units in range(5):
                production = np.zeros(n, dtype=np.int64)
                production[i] = units
                values.append(config.objectives.evaluate(production)[i])
            diffs = np.diff(values)
            assert np.all(diffs > 0)


class TestGenerator:
    def spec(self, **overrides):
        base = dict(
            family="random-deps",
            num_resources=3,
            num_demands=4,
            num_objectives=3,
            budget_range=(2, 6),
            density=0.6,
            horizon=12,
            rng_seed=42,
        )
        base.update(overrides)
        return GeneratorSpec(**base)

    def test_deterministic(self):
        a = config_to_document(generate_problem(self.spec(), problem_id="x"))
        b = config_to_document(generate_problem(self.spec(), problem_id="x"))
        assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)

    def test_seed_changes_output(self):
        a = config_to_document(generate_problem(self.spec()))
        b = config_to_document(generate_problem(self.spec(rng_seed=43)))
        assert json.dumps(a, sort_keys=True) != json.dumps(b, sort_keys=True)

    def test_shapes_and_budget_bounds(self):
        config = generate_problem(self.spec())
        assert config.num_resources == 3
        assert config.num_demands == 4
        assert config.num_objectives == 3
        assert np.all(config.budgets >= 2) and np.all(config.budgets <= 6)
        assert config.horizon == 12
        assert all(len(deps) >= 1 for deps in config.dependencies)

    def test_every_family_generates_valid_configs(self):
        specs = [
            self.spec(),
            self.spec(family="large-graph", num_resources=12, num_demands=12,
                      num_objectives=3, density=0.2),
            self.spec(family="monotone-scaling", num_resources=4, num_demands=4,
                      num_objectives=4, density=1.0),
        ]
        for spec in specs:
            config = generate_problem(spec)
            assert validate_config(config) is config

    def test_invalid_specs(self):
        with pytest.raises(InvalidSpec):
            generate_problem(self.spec(family="bogus"))
        with pytest.raises(InvalidSpec):
            generate_problem(self.spec(num_resources=0))
        with pytest.raises(InvalidSpec):
            generate_problem(self.spec(budget_range=(5, 2)))
        with pytest.raises(InvalidSpec):
            generate_problem(self.spec(density=0.0))
        with pytest.raises(InvalidSpec):
            generate_problem(self.spec(density=1.5))
        with pytest.raises(InvalidSpec):
            generate_problem(
                self.spec(family="monotone-scaling", num_resources=3, num_demands=4)
            )


class TestDocuments:
    def test_round_trip(self):
        config = load_problem("1b")
        doc = config_to_document(config)
        rebuilt = config_from_document(doc)
        assert config_to_document(rebuilt) == doc
        assert rebuilt.budgets.tolist() == config.budgets.tolist()
        assert rebuilt.dependencies == config.dependencies
        production = np.array([3, 4])
        assert np.array_equal(
            rebuilt.objectives.evaluate(production), config.objectives.evaluate(production)
        )

    def test_packaged_dir_contains_one_file_per_problem(self):
        directory = packaged_problem_dir()
        files = sorted(p.stem for p in directory.glob("problem_*.json"))
        assert files == sorted(f"problem_{pid}" for pid in ALL_IDS)


class TestProblemDirOverride:
    def test_env_var_adds_and_shadows(self, tmp_path, monkeypatch):
        custom = config_to_document(load_problem("0"))
        custom["problem_id"] = "local1"
        custom["notes"] = "scratch copy"
        (tmp_path / "problem_local1.json").write_text(json.dumps(custom))

        shadow = config_to_document(load_problem("0"))
        shadow["notes"] = "shadowed zero"
        shadow["horizon"] = 7
        (tmp_path / "problem_0.json").write_text(json.dumps(shadow))

        monkeypatch.setenv(PROBLEM_DIR_ENV, str(tmp_path))
        ids = [row["problem_id"] for row in list_problems()]
        assert "local1" in ids and "0" in ids
        assert load_problem("local1").problem_id == "local1"
        # the override directory wins for colliding ids
        assert load_problem("0").horizon == 7

    def test_explicit_dir_argument(self, tmp_path):
        doc = config_to_document(load_problem("1a"))
        doc["problem_id"] = "argcase"
        (tmp_path / "problem_argcase.json").write_text(json.dumps(doc))
        config = load_problem("argcase", problem_dir=tmp_path)
        assert config.problem_id == "argcase"
        with pytest.raises(UnknownProblem):
            load_problem("definitely-missing", problem_dir=tmp_path)
