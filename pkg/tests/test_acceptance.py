"""Acceptance criteria, one test each.

Every test records a one-line PASS/FAIL summary; the lines are printed at
the end of the pytest run and also when this file is executed directly.
"""

import itertools
import math
import time

import numpy as np
import pytest

from chainscope.chains import bottleneck_matrix, chain_component, merge_tree
from chainscope.functionals import alpha_k, eta_km, eta_star_k, gamma_m, gamma_star
from chainscope.io import dumps
from chainscope.lab import oracles
from chainscope.lab.generators import KINDS, GeneratorConfig, gen_space, random_space, random_subset
from chainscope.lab.suites import SUITES, run_suite
from chainscope.metric import PointSubset, box_product, hausdorff
from chainscope.model import FullLine, Interval, Lattice, Model1D, Ray, SubsetSpec
from chainscope.model import classify_space, classify_subset

try:
    from conftest import ACCEPTANCE_LINES
except ImportError:  # run as a script
    ACCEPTANCE_LINES = []

SEED = 20240


def record(n: int, ok: bool, what: str, elapsed: float, limit: float | None) -> None:
    timing = f"{elapsed:.2f}s" + (f" (limit {limit:g}s)" if limit else "")
    line = f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {what}  [{timing}]"
    ACCEPTANCE_LINES.append(line)
    print(line)


def rng_for(n: int) -> np.random.Generator:
    return np.random.default_rng([SEED, n])


def test_criterion_01_bottleneck_matches_minimax():
    rng = rng_for(1)
    t0 = time.perf_counter()
    bad = []
    for _ in range(500):
        X = random_space(rng, max_size=12)
        c = bottleneck_matrix(X)
        for x, y in itertools.combinations(range(X.n), 2):
            if c[x, y] != oracles.oracle_minimax(X, x, y):
                bad.append((X.digest(), x, y))
    dt = time.perf_counter() - t0
    ok = not bad and dt < 10
    record(1, ok, f"bottleneck = brute-force minimax on 500 spaces, {len(bad)} mismatches", dt, 10)
    assert not bad and dt < 10


def test_criterion_02_components_match_bfs():
    rng = rng_for(2)
    t0 = time.perf_counter()
    bad = 0
    for _ in range(500):
        X = random_space(rng, max_size=12)
        vals = np.unique(X.dist[X.dist > 0])
        scales = [float(rng.choice(vals)), float(rng.choice(vals)), float(vals[0]) / 2,
                  float(rng.uniform(vals[0], vals[-1])), float(vals[-1]) * 2]
        for eps in scales:
            for x in range(X.n):
                if chain_component(X, x, eps).members != oracles.oracle_chain_component(X, x, eps).members:
                    bad += 1
    dt = time.perf_counter() - t0
    record(2, bad == 0 and dt < 10, f"components = BFS oracle on 500 spaces x 5 scales, {bad} mismatches", dt, 10)
    assert bad == 0 and dt < 10


def test_criterion_03_ultrametric_and_partition():
    rng = rng_for(3)
    t0 = time.perf_counter()
    bad = 0
    for _ in range(200):
        X = random_space(rng, max_size=12, min_size=3)
        c, d = bottleneck_matrix(X), X.dist
        tri = rng.integers(0, X.n, size=(1000, 3))
        x, y, z = tri.T
        bad += int(np.sum(c[x, z] > np.maximum(c[x, y], c[y, z])))
        bad += int(np.sum(c[x, y] > d[x, y]))
        vals = np.unique(d[d > 0])
        eps = float(rng.choice(vals))
        labels = merge_tree(X).partition(eps)
        comps = [chain_component(X, i, eps).members for i in range(X.n)]
        same = labels[x] == labels[y]
        bad += sum(1 for a, b, s in zip(x, y, same)
                   if (b in comps[a]) != s or ((b in comps[a]) != (comps[a] == comps[b])))
    dt = time.perf_counter() - t0
    record(3, bad == 0 and dt < 5, f"ultrametric + partition, 1000 triples on each of 200 spaces, {bad} violations",
           dt, 5)
    assert bad == 0 and dt < 5


def test_criterion_04_covering_solvers_match_oracle():
    rng = rng_for(4)
    t0 = time.perf_counter()
    bad = []
    for _ in range(200):
        X = random_space(rng, max_size=oracles.KCENTER_MAX_POINTS, min_size=3)
        A = random_subset(rng, X)
        k = int(rng.integers(1, 4))
        if alpha_k(A, k).value != oracles.oracle_kcenter(X, A, k, 1):
            bad.append(("alpha_k", X.digest(), k))
        for m in sorted({1, 2, X.n - 1}):
            if eta_km(A, k, m).value != oracles.oracle_kcenter(X, A, k, m):
                bad.append(("eta_km", X.digest(), k, m))
            if gamma_m(A, m).value != eta_km(A, 1, m).value:
                bad.append(("gamma_m = eta_1m", X.digest(), m))
        if eta_star_k(A, k).value != oracles.oracle_kcenter(X, A, k, X.n - 1):
            bad.append(("eta_star_k", X.digest(), k))
        if gamma_star(A).value != eta_star_k(A, 1).value:
            bad.append(("gamma* = eta*_1", X.digest()))
        if alpha_k(A, k).value != eta_km(A, k, 1).value:
            bad.append(("alpha_k = eta_k1", X.digest(), k))
    dt = time.perf_counter() - t0
    record(4, not bad and dt < 30, f"exact covering solvers = k-center oracle on 200 instances, {len(bad)} mismatches",
           dt, 30)
    assert not bad and dt < 30


def _eta_star_table(X):
    """eta*_k for every subset mask and k, from the oracle partition (no merge tree)."""
    scales = sorted({0.0} | set(X.dist.ravel().tolist()))
    parts = []
    for t in scales:
        classes = oracles.oracle_partition(X, math.nextafter(t, math.inf))
        label = np.empty(X.n, dtype=int)
        for j, cls in enumerate(classes):
            label[list(cls)] = j
        parts.append(label)
    n = X.n
    table = np.full((1 << n, n + 1), math.inf)
    for mask in range(1, 1 << n):
        idx = [i for i in range(n) if mask >> i & 1]
        for k in range(1, n + 1):
            for t, label in zip(scales, parts):
                if len(set(label[idx].tolist())) <= k:
                    table[mask, k] = t
                    break
    return table


def exhaustive_stability_sweep(seeds=range(20)):
    """All subset pairs of 6-point spaces: returns (pairs checked, violations)."""
    checked = violations = 0
    for s in seeds:
        X = gen_space(GeneratorConfig(seed=s, kind=KINDS[s % len(KINDS)], size=6))
        table = _eta_star_table(X)
        masks = range(1, 1 << X.n)
        subsets = {m: PointSubset(X, frozenset(i for i in range(X.n) if m >> i & 1)) for m in masks}
        for a, b in itertools.product(masks, masks):
            h = hausdorff(subsets[a], subsets[b])
            lhs, rhs = table[b, 1:], np.maximum(table[a, 1:], h)
            checked += X.n
            violations += int(np.sum(lhs > rhs))
    return checked, violations


def test_criterion_05_hausdorff_stability():
    t0 = time.perf_counter()
    checked, violations = exhaustive_stability_sweep()
    sweep_dt = time.perf_counter() - t0
    assert checked > 0 and violations == 0, "exhaustive sweep found a counterexample"
    rng = rng_for(5)
    t0 = time.perf_counter()
    bad = 0
    for _ in range(200):
        X = random_space(rng)
        A, B = random_subset(rng, X), random_subset(rng, X)
        k = int(rng.integers(1, 4))
        bad += eta_star_k(B, k).value > max(eta_star_k(A, k).value, hausdorff(A, B))
    dt = time.perf_counter() - t0
    record(5, bad == 0 and dt < 20,
           f"eta*_k(B) <= max(eta*_k(A), H) on 200 triples, {bad} violations "
           f"(exhaustive 6-point sweep: {checked} checks in {sweep_dt:.1f}s, 0 violations)", dt, 20)
    assert bad == 0 and dt < 20


def test_criterion_06_box_product_law():
    rng = rng_for(6)
    t0 = time.perf_counter()
    bad = 0
    for _ in range(50):
        X, Y = random_space(rng, max_size=8), random_space(rng, max_size=8)
        P = box_product(X, Y)
        want = np.maximum(np.kron(bottleneck_matrix(X), np.ones((Y.n, Y.n))),
                          np.kron(np.ones((X.n, X.n)), bottleneck_matrix(Y)))
        bad += int(np.sum(bottleneck_matrix(P) != want))
    dt = time.perf_counter() - t0
    record(6, bad == 0 and dt < 5, f"c_prod = max(c_X, c_Y) on 50 products, {bad} mismatched pairs", dt, 5)
    assert bad == 0 and dt < 5


def test_criterion_07_golden_classifier_table():
    N, R = [Lattice(1, 1)], [FullLine()]
    t0 = time.perf_counter()
    rows = [
        (classify_space(Model1D(N)).verdicts, {"uss": True}),
        (classify_space(Model1D(R)).verdicts, {"uss": False, "cofinally_complete": True}),
        (classify_space(Model1D([Ray("left", 0), Lattice(1, 1)])).verdicts,
         {"uss": False, "uc": False, "cofinally_complete": True}),
        (classify_space(Model1D([Interval(0, 1)])).verdicts,
         {"compact": True, "uss": True, "uc": True, "cbq_complete": True, "cofinally_complete": True,
          "complete": True}),
        (classify_subset(Model1D(R), SubsetSpec(N)).verdicts, {"uss_subset": False}),
    ]
    mism = [(got, want) for got, want in rows if any(got[k] != v for k, v in want.items())]
    report = run_suite("model-classifier-goldens", SEED, 1)
    dt = time.perf_counter() - t0
    ok = not mism and report.passed and dt < 1
    record(7, ok, f"golden verdict table, {len(mism)} mismatched rows, "
                  f"{len(report.failures)} failures in the extended golden suite", dt, 1)
    assert ok


@pytest.mark.parametrize("n,suite,trials,limit,what", [
    (8, "model-fc-laws", 20, 5, "f_c laws (kernel, I <= f_c, Lipschitz, infinity) on 20 models"),
    (9, "hierarchy-audit", 50, 5, "implication audit on 50 models"),
    (10, "bornology-laws", 10, 10, "bornology laws on subset families of 10 models"),
    (11, "sample-crosscheck", 10, 10, "sampled components = symbolic components on 10 models"),
])
def test_criteria_08_to_11_model_suites(n, suite, trials, limit, what):
    t0 = time.perf_counter()
    report = run_suite(suite, SEED, trials)
    dt = time.perf_counter() - t0
    ok = report.passed and dt < limit
    record(n, ok, f"{what}, {report.checks} checks, {len(report.failures)} failures", dt, limit)
    assert ok, report.failures[:3]


def test_criterion_12_determinism():
    t0 = time.perf_counter()
    differing = []
    for name in SUITES:
        a = dumps(run_suite(name, 99, 3).to_json())
        b = dumps(run_suite(name, 99, 3).to_json())
        if a != b:
            differing.append(name)
    dt = time.perf_counter() - t0
    record(12, not differing, f"all {len(SUITES)} suites byte-identical on rerun, {len(differing)} differ", dt, None)
    assert not differing


if __name__ == "__main__":
    import sys
    sys.exit(pytest.main([__file__, "-q", "-s"]))
