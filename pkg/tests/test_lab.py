import json

import numpy as np
import pytest

from chainscope.lab import oracles
from chainscope.lab.generators import (KINDS, GeneratorConfig, gen_model, gen_space, gen_subset,
                                       random_space)
from chainscope.lab.suites import SUITES, SuiteReport, UnknownSuite, _Trial, run_suite
from chainscope.metric import line_space, validate_metric


class TestGenerators:
    def test_collinear(self):
        X = gen_space(GeneratorConfig(seed=3, kind="collinear", size=4))
        xs = [float(l) for l in X.labels]
        assert X.n == 4 and xs == sorted(xs)
        assert np.array_equal(X.dist, np.abs(np.subtract.outer(xs, xs)))

    @pytest.mark.parametrize("kind", KINDS)
    def test_deterministic_and_valid(self, kind):
        cfg = GeneratorConfig(seed=11, kind=kind, size=9)
        X, Y = gen_space(cfg), gen_space(cfg)
        assert X.digest() == Y.digest()
        validate_metric(X.labels, X.dist)

    def test_graph_metric_is_shortest_paths(self):
        X = gen_space(GeneratorConfig(seed=5, kind="random-graph-shortest-path", size=10))
        d = X.dist
        assert np.all(d[:, :, None] <= d[:, None, :] + d[None, :, :] + 1e-12 * d.max())

    def test_bad_configs(self):
        with pytest.raises(ValueError):
            GeneratorConfig(seed=1, kind="sphere")
        with pytest.raises(ValueError):
            GeneratorConfig(seed=1, size=1)
        with pytest.raises(ValueError):
            GeneratorConfig(seed=1, scale_range=(0, 1))

    def test_models_and_subsets(self):
        rng = np.random.default_rng(0)
        for _ in range(30):
            M = gen_model(rng)
            A = gen_subset(rng, M.set)
            assert A.set.issubset(M.set)
            assert gen_subset(rng, A.set).issubset(A)


class TestOracles:
    def test_minimax_examples(self, line4):
        assert oracles.oracle_minimax(line4, 0, 3) == 4
        X = line_space([0, 2])
        assert oracles.oracle_minimax(X, 0, 1) == 2

    def test_kcenter_examples(self, line4):
        A = line4.all()
        assert oracles.oracle_kcenter(line4, A, 1, 1) == 4
        assert oracles.oracle_kcenter(line4, A, 3, 1) == 1
        assert oracles.oracle_kcenter(line4, line4.subset([0, 3]), 2, 1) == 0

    def test_component_oracle_edges(self, line4):
        assert oracles.oracle_chain_component(line4, 2, 0.5).members == {2}
        assert oracles.oracle_chain_component(line4, 2, 8).members == {0, 1, 2, 3}

    def test_size_limits(self):
        with pytest.raises(oracles.TooLarge):
            oracles.oracle_minimax(line_space(range(13)), 0, 1)
        X = line_space(range(11))
        with pytest.raises(oracles.TooLarge):
            oracles.oracle_kcenter(X, X.all(), 1, 1)
        with pytest.raises(oracles.TooLarge):
            oracles.oracle_kcenter(line_space(range(5)), line_space(range(5)).all(), 4, 1)


class TestSuites:
    @pytest.mark.parametrize("name", sorted(SUITES))
    def test_small_runs_pass(self, name):
        report = run_suite(name, seed=2, trials=3)
        assert report.passed, report.failures[:3]
        assert report.checks > 0

    def test_unknown_suite(self):
        with pytest.raises(UnknownSuite):
            run_suite("nope", 0, 1)

    def test_report_is_reproducible(self):
        a = run_suite("functional-coincidences", 9, 5).to_json()
        b = run_suite("functional-coincidences", 9, 5).to_json()
        assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)
        assert "elapsed_seconds" not in a

    def test_single_trial_replay(self):
        full = run_suite("ultrametric", 4, 5)
        one = run_suite("ultrametric", 4, 1, start=3)
        assert one.start == 3 and one.checks > 0
        assert one.checks <= full.checks

    def test_failure_record_shape(self):
        report = SuiteReport("ultrametric", 7, 1)
        t = _Trial(report, 0)
        t.digest = "abc"
        assert not t.check(False, "deliberate", x=1)
        (f,) = report.failures
        assert f["assertion"] == "deliberate" and f["witness"] == {"x": 1} and f["seed"] == 7
        assert f["rerun"] == "chainscope propcheck --suite ultrametric --seed 7 --start 0 --trials 1"
        assert not report.passed

    def test_random_space_respects_oracle_bounds(self):
        rng = np.random.default_rng(1)
        for _ in range(50):
            assert random_space(rng, max_size=oracles.ORACLE_MAX_POINTS).n <= 12
