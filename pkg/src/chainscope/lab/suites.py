"""Seed-deterministic property suites.

Trial ``t`` of a run with seed ``s`` draws from ``default_rng([s, t])``, so
any single trial can be replayed in isolation with ``--start t --trials 1``.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np

from .. import __version__
from ..chains import bottleneck_matrix, chain_ball, chain_component, merge_tree
from ..functionals import alpha_k, eta_km, eta_star_k, gamma_m, gamma_star
from ..io import jsonable
from ..metric import (PointSubset, box_product, enlargement, hausdorff, validate_metric)
from ..model.pieces import INF, FullLine, Interval, Lattice, Points, Ray
from ..model.space import (Model1D, SubsetSpec, classify_space, classify_subset, f_c, isolation,
                           limit_points, model_component, model_functionals, nslc, sample,
                           sample_coords)
from . import oracles
from .generators import gen_model, gen_subset, random_points, random_space, random_subset


class UnknownSuite(KeyError):
    pass


@dataclass
class SuiteReport:
    suite: str
    seed: int
    trials: int
    start: int = 0
    checks: int = 0
    failures: list = field(default_factory=list)
    elapsed: float = 0.0

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_json(self, timing: bool = False) -> dict:
        # elapsed time is left out by default so reruns are byte-identical
        out = {"tool": "chainscope", "version": __version__, "suite": self.suite,
               "seed": self.seed, "trials": self.trials, "start": self.start,
               "checks": self.checks, "passed": self.passed,
               "failures": jsonable(self.failures)}
        if timing:
            out["elapsed_seconds"] = round(self.elapsed, 3)
        return out


class _Trial:
    """Collects assertion outcomes for one trial."""

    def __init__(self, report: SuiteReport, trial: int):
        self.report, self.trial, self.digest = report, trial, None

    def check(self, ok, assertion: str, **witness) -> bool:
        self.report.checks += 1
        if not ok:
            r = self.report
            self.report.failures.append({
                "trial": self.trial, "seed": r.seed, "digest": self.digest,
                "assertion": assertion, "witness": witness,
                "rerun": f"chainscope propcheck --suite {r.suite} --seed {r.seed} --start {self.trial} --trials 1",
            })
        return bool(ok)


def _scales_for(X, rng, count):
    """Stored distances (to stress strictness) mixed with midpoints."""
    vals = np.unique(X.dist[X.dist > 0])
    out = [float(rng.choice(vals)) for _ in range((count + 1) // 2)]
    mids = (vals[:-1] + vals[1:]) / 2 if len(vals) > 1 else vals / 2
    out += [float(rng.choice(mids)) for _ in range(count - len(out) - 1)]
    out.append(float(vals[-1]) * 1.5)
    return out


# finite suites ------------------------------------------------------------------------


def _metric_axioms(t: _Trial, rng):
    X = random_space(rng)
    t.digest = X.digest()
    try:
        validate_metric(X.labels, X.dist)
        ok = True
    except ValueError as exc:
        ok, msg = False, str(exc)
    t.check(ok, "generated space passes validate_metric", error=None if ok else msg)
    A, B, C = (random_subset(rng, X) for _ in range(3))
    e1, e2 = sorted(_scales_for(X, rng, 2))
    t.check(A.members <= enlargement(A, e1).members, "A is inside its enlargement", eps=e1)
    t.check(enlargement(A, e1).members <= enlargement(A, e2).members,
            "enlargement is monotone in the scale", eps=[e1, e2], A=list(A.indices))
    hab, hba = hausdorff(A, B), hausdorff(B, A)
    t.check(hab == hba, "hausdorff is symmetric", h_ab=hab, h_ba=hba)
    slack = 1e-12 * X.diameter()
    hac, hbc = hausdorff(A, C), hausdorff(B, C)
    t.check(hac <= hab + hbc + slack, "hausdorff triangle inequality", h_ac=hac, h_ab=hab, h_bc=hbc)
    t.check((hab == 0) == (A == B), "hausdorff vanishes exactly on equal subsets",
            A=list(A.indices), B=list(B.indices), h=hab)
    Y = random_space(rng, max_size=6)
    P = box_product(X, Y)
    try:
        validate_metric(P.labels, P.dist)
        ok = True
    except ValueError:
        ok = False
    t.check(ok, "box product passes validate_metric", sizes=[X.n, Y.n])


def _ultrametric(t: _Trial, rng):
    X = random_space(rng, max_size=12, min_size=10)
    t.digest = X.digest()
    c, d, n = bottleneck_matrix(X), X.dist, X.n
    bad = np.argwhere(c > d)
    t.check(not len(bad), "c <= d on every pair", pair=bad[0].tolist() if len(bad) else None)
    viol = c[:, None, :] > np.maximum(c[:, :, None], c[None, :, :])
    bad = np.argwhere(viol)
    t.check(not len(bad), "strong triangle inequality c(x,z) <= max(c(x,y), c(y,z))",
            triple=bad[0].tolist() if len(bad) else None)
    tree = merge_tree(X)
    scales = sorted(_scales_for(X, rng, 4))
    prev = None
    for eps in scales:
        comps = [chain_component(X, x, eps).members for x in range(n)]
        for x, y in itertools.combinations(range(n), 2):
            same = y in comps[x]
            if same != (comps[x] == comps[y]):
                t.check(False, "y in comp(x) iff comp(x) = comp(y)", x=x, y=y, eps=eps)
                break
        else:
            t.check(True, "components partition X")
        labels = tree.partition(eps)
        t.check(all((labels[x] == labels[y]) == (y in comps[x]) for x in range(n) for y in range(n)),
                "merge tree partition matches components", eps=eps)
        x = int(rng.integers(n))
        balls = [chain_ball(X, x, eps, m).members for m in range(1, n)]
        t.check(all(a <= b for a, b in zip(balls, balls[1:])) and balls[-1] == comps[x],
                "chain balls increase in m and reach the component at m = |X|-1", x=x, eps=eps)
        if prev is not None:
            t.check(all(prev[i] <= comps[i] for i in range(n)), "components grow with the scale", eps=eps)
        prev = comps


def _component_equivalence(t: _Trial, rng):
    X = random_space(rng, max_size=oracles.ORACLE_MAX_POINTS)
    t.digest = X.digest()
    for eps in _scales_for(X, rng, 5):
        for x in range(X.n):
            got, want = chain_component(X, x, eps).members, oracles.oracle_chain_component(X, x, eps).members
            if got != want:
                t.check(False, "chain_component equals BFS oracle", x=x, eps=eps,
                        got=sorted(got), want=sorted(want))
                break
        else:
            t.check(True, "chain_component equals BFS oracle")
        got = sorted(map(sorted, (frozenset(c) for c in merge_tree(X).classes(eps))))
        want = sorted(map(sorted, oracles.oracle_partition(X, eps)))
        t.check(got == want, "merge tree classes equal oracle partition", eps=eps)
    c = bottleneck_matrix(X)
    for x, y in itertools.combinations(range(X.n), 2):
        o = oracles.oracle_minimax(X, x, y)
        if o != c[x, y]:
            t.check(False, "bottleneck equals brute-force minimax", x=x, y=y, c=float(c[x, y]), oracle=o)
            break
    else:
        t.check(True, "bottleneck equals brute-force minimax")


def _functional_coincidences(t: _Trial, rng):
    X = random_space(rng, max_size=oracles.KCENTER_MAX_POINTS, min_size=3)
    t.digest = X.digest()
    A = random_subset(rng, X)
    k = int(rng.integers(1, oracles.KCENTER_MAX_K + 1))
    w = {"A": list(A.indices), "k": k}
    a = alpha_k(A, k).value
    t.check(a == oracles.oracle_kcenter(X, A, k, 1), "alpha_k equals oracle", **w, value=a)
    for m in sorted({1, 2, X.n - 1}):
        v = eta_km(A, k, m).value
        o = oracles.oracle_kcenter(X, A, k, m)
        t.check(v == o, "eta_km equals oracle", **w, m=m, value=v, oracle=o)
    es = eta_star_k(A, k).value
    o = oracles.oracle_kcenter(X, A, k, X.n - 1)
    t.check(es == o, "eta_star_k equals oracle", **w, value=es, oracle=o)
    t.check(gamma_star(A).value == eta_star_k(A, 1).value, "gamma* = eta*_1", **w)
    t.check(a == eta_km(A, k, 1).value, "alpha_k = eta_{k,1}", **w)
    m = int(rng.integers(1, X.n))
    t.check(gamma_m(A, m).value == eta_km(A, 1, m).value, "gamma_m = eta_{1,m}", **w, m=m)
    g = alpha_k(A, k, "greedy").value
    t.check(a <= g <= 2 * a, "greedy alpha within factor two", **w, exact=a, greedy=g)
    g = eta_km(A, k, 2, "greedy").value
    t.check(eta_km(A, k, 2).value <= g, "greedy eta_km is an upper bound", **w, greedy=g)


def _monotonicity(t: _Trial, rng):
    X = random_space(rng, max_size=10, min_size=3)
    t.digest = X.digest()
    B = random_subset(rng, X)
    A = PointSubset(X, frozenset(rng.choice(B.indices, size=int(rng.integers(1, len(B) + 1)),
                                            replace=False).tolist()))
    k = int(rng.integers(1, 4))
    m = int(rng.integers(1, X.n))
    w = {"A": list(A.indices), "B": list(B.indices), "k": k, "m": m}
    pairs = {
        "alpha_k": lambda S: alpha_k(S, k).value,
        "gamma_m": lambda S: gamma_m(S, m).value,
        "gamma_star": lambda S: gamma_star(S).value,
        "eta_star_k": lambda S: eta_star_k(S, k).value,
        "eta_km": lambda S: eta_km(S, k, m).value,
    }
    for name, fn in pairs.items():
        va, vb = fn(A), fn(B)
        t.check(va <= vb, f"{name} is monotone in the subset", **w, value_A=va, value_B=vb)
    t.check(eta_star_k(B, k + 1).value <= eta_star_k(B, k).value, "eta*_k decreases in k", **w)
    t.check(eta_km(B, k, m + 1).value <= eta_km(B, k, m).value, "eta_{k,m} decreases in m", **w)
    lo, mid, hi = eta_star_k(B, k).value, eta_km(B, k, m).value, alpha_k(B, k).value
    t.check(lo <= mid <= hi, "eta*_k <= eta_{k,m} <= alpha_k", **w, values=[lo, mid, hi])


def _union_law(t: _Trial, rng):
    X = random_space(rng)
    t.digest = X.digest()
    A, B = random_subset(rng, X), random_subset(rng, X)
    k1, k2 = int(rng.integers(1, 4)), int(rng.integers(1, 4))
    lhs = eta_star_k(A | B, k1 + k2).value
    rhs = max(eta_star_k(A, k1).value, eta_star_k(B, k2).value)
    t.check(lhs <= rhs, "eta*_{k1+k2}(A u B) <= max(eta*_{k1}(A), eta*_{k2}(B))",
            A=list(A.indices), B=list(B.indices), k1=k1, k2=k2, lhs=lhs, rhs=rhs)
    full = A | B
    t.check(eta_star_k(full, X.n).value == 0 and alpha_k(full, X.n).value == 0,
            "unrestricted budgets collapse the functionals to 0", A=list(full.indices))


def _hausdorff_stability(t: _Trial, rng):
    X = random_space(rng)
    t.digest = X.digest()
    A, B = random_subset(rng, X), random_subset(rng, X)
    k = int(rng.integers(1, 4))
    h = hausdorff(A, B)
    lhs, base = eta_star_k(B, k).value, eta_star_k(A, k).value
    t.check(lhs <= max(base, h), "eta*_k(B) <= max(eta*_k(A), H(A,B))",
            A=list(A.indices), B=list(B.indices), k=k, eta_B=lhs, eta_A=base, hausdorff=h)


def _box_product_law(t: _Trial, rng):
    X, Y = random_space(rng, max_size=8), random_space(rng, max_size=8)
    P = box_product(X, Y)
    t.digest = P.digest()
    cx, cy, cp = bottleneck_matrix(X), bottleneck_matrix(Y), bottleneck_matrix(P)
    want = np.maximum(np.kron(cx, np.ones((Y.n, Y.n))), np.kron(np.ones((X.n, X.n)), cy))
    bad = np.argwhere(cp != want)
    t.check(not len(bad), "c_prod = max(c_X, c_Y) on every pair",
            pair=bad[0].tolist() if len(bad) else None)


# model suites ------------------------------------------------------------------------------

N = [Lattice(1, 1)]
R = [FullLine()]
E = [Ray("left", 0), Lattice(1, 1)]
UNIT = [Interval(0, 1)]

SPACE_GOLDENS = [
    ("N", N, {"uss": True}),
    ("R", R, {"uss": False, "cofinally_complete": True}),
    ("(-inf,0] u N", E, {"uss": False, "uc": False, "cofinally_complete": True}),
    ("[0,1]", UNIT, {"compact": True, "uss": True, "uc": True, "cbq_complete": True,
                     "cofinally_complete": True, "complete": True,
                     "strongly_locally_compact": True, "strongly_uniformly_locally_compact": True}),
]
SUBSET_GOLDENS = [
    ("N in R", R, N, {"uss_subset": False}),
    ("N in N", N, N, {"uss_subset": True}),
    ("[0,1] in R", R, UNIT, {"uss_subset": True}),
]
VALUE_GOLDENS = [
    ("f_c on N", lambda: f_c(Model1D(N), 7), Fraction(1)),
    ("f_c on R", lambda: f_c(Model1D(R), Fraction(-3, 2)), Fraction(0)),
    ("f_c on [0,1]", lambda: f_c(Model1D(UNIT), Fraction(1, 2)), INF),
    ("isolation on (-inf,0] u N at 1", lambda: isolation(Model1D(E), 1), Fraction(1)),
    ("nslc of (-inf,0] u N", lambda: nslc(Model1D(E)).to_json(), [Ray("left", 0).to_json()]),
    ("limit points of N", lambda: limit_points(Model1D(N)).to_json(), []),
    ("component of 5 in N at 1", lambda: model_component(Model1D(N), 5, 1).to_json(),
     [Points((5,)).to_json()]),
    ("component of -1 in (-inf,0] u N at 1/2",
     lambda: model_component(Model1D(E), -1, Fraction(1, 2)).to_json(), [Ray("left", 0).to_json()]),
    ("functionals of N in R", lambda: model_functionals(Model1D(R), SubsetSpec(N)),
     {"gamma_star": 0, "eta_star": 0, "eta": INF, "alpha": INF}),
    ("functionals of N in N", lambda: model_functionals(Model1D(N), SubsetSpec(N)),
     {"gamma_star": 1, "eta_star": 1, "eta": INF, "alpha": INF}),
    ("sample of (-inf,0] u N", lambda: sample_coords(sample(Model1D(E), (-2, 3), Fraction(1, 2))),
     [Fraction(v, 2) for v in (-4, -3, -2, -1, 0, 2, 4, 6)]),
]


def _goldens(report: SuiteReport) -> None:
    t = _Trial(report, 0)
    for name, pieces, want in SPACE_GOLDENS:
        got = classify_space(Model1D(pieces)).verdicts
        for key, val in want.items():
            t.check(got[key] == val, f"{name}: {key} is {val}", got=got[key])
    for name, m, a, want in SUBSET_GOLDENS:
        got = classify_subset(Model1D(m), SubsetSpec(a)).verdicts
        for key, val in want.items():
            t.check(got[key] == val, f"{name}: {key} is {val}", got=got[key])
    for name, fn, want in VALUE_GOLDENS:
        got = fn()
        t.check(got == want, name, got=got, want=want)


def _model_fc_laws(t: _Trial, rng):
    M = gen_model(rng)
    t.digest = M.digest()
    K, Xp = nslc(M), limit_points(M)
    pts = random_points(rng, M, 100)
    tiny = Fraction(1, 1000)  # below every gap the generators produce
    vals = {}
    for x in pts:
        v, i = f_c(M, x), isolation(M, x)
        vals[x] = v
        comp = model_component(M, x, tiny)
        t.check((v == 0) == (x in K), "f_c(x) = 0 iff x in nslc", x=x, f_c=v)
        t.check((v == 0) == (not comp.bounded), "f_c(x) = 0 iff small-scale components are unbounded",
                x=x, f_c=v)
        t.check((i == 0) == (x in Xp), "I(x) = 0 iff x is a limit point", x=x, isolation=i)
        t.check(i <= v, "I <= f_c", x=x, isolation=i, f_c=v)
        if 0 < v < INF:
            t.check(model_component(M, x, v).bounded and not model_component(M, x, v + Fraction(1, 7)).bounded,
                    "components are compact up to f_c and not beyond", x=x, f_c=v)
    finite = all(M.fc[i] < INF for i in M.canonical)
    if finite:
        for _ in range(100):
            x, y = pts[int(rng.integers(len(pts)))], pts[int(rng.integers(len(pts)))]
            t.check(abs(vals[x] - vals[y]) <= abs(x - y), "f_c is 1-Lipschitz", x=x, y=y,
                    fx=vals[x], fy=vals[y])
    else:
        t.check(all(v == INF for v in vals.values()), "f_c infinite somewhere forces f_c infinite everywhere")
    if M.set.bounded:
        t.check(all(v == INF for v in vals.values()), "bounded models have f_c identically infinite")


def _hierarchy_audit(t: _Trial, rng):
    M = gen_model(rng)
    t.digest = M.digest()
    v = classify_space(M).verdicts
    chain = ["compact", "uss", "cofinally_complete", "complete"]
    for a, b in zip(chain, chain[1:]):
        t.check(not v[a] or v[b], f"{a} implies {b}", verdicts=v)
    t.check(not v["uc"] or v["uss"], "uc implies uss", verdicts=v)
    t.check(not v["compact"] or v["uc"], "compact implies uc", verdicts=v)
    t.check(v["uss"] == v["cbq_complete"], "uss and cbq-complete coincide", verdicts=v)
    t.check(not v["strongly_uniformly_locally_compact"] or v["strongly_locally_compact"],
            "strongly uniformly locally compact implies strongly locally compact", verdicts=v)
    A = gen_subset(rng, M.set)
    s = classify_subset(M, A).verdicts
    f = model_functionals(M, A)
    t.check(not A.set.compact or s["uss_subset"], "compact subsets are uss-subsets", subset=A.to_json())
    t.check(not v["uss"] or s["uss_subset"], "every subset of a uss space is a uss-subset", subset=A.to_json())
    t.check(not s["bourbaki_bounded"] or s["qc_precompact"], "bourbaki bounded implies qC-precompact",
            subset=A.to_json())
    t.check((f["eta_star"] == 0) == s["qc_precompact"], "eta* = 0 iff qC-precompact", subset=A.to_json())
    t.check(f["eta_star"] <= f["gamma_star"] and f["eta_star"] <= f["eta"] <= f["alpha"],
            "eta* <= gamma* and eta* <= eta <= alpha", subset=A.to_json(), values=f)


def _bornology_laws(t: _Trial, rng):
    M = gen_model(rng)
    t.digest = M.digest()
    fam = [gen_subset(rng, M.set) for _ in range(6)]
    uss = lambda S: classify_subset(M, S).verdicts["uss_subset"]
    for x in random_points(rng, M, 5):
        t.check(uss(SubsetSpec([Points((x,))])), "singletons are uss-subsets", x=x)
    for A in fam:
        B = gen_subset(rng, A.set)
        t.check(B.issubset(A), "generated subset is contained", A=A.to_json(), B=B.to_json())
        t.check(not uss(A) or uss(B), "uss-subsets are closed under subsets", A=A.to_json(), B=B.to_json())
    for A, B in itertools.combinations(fam, 2):
        U = A.union(B)
        t.check(not (uss(A) and uss(B)) or uss(U), "uss-subsets are closed under finite unions",
                A=A.to_json(), B=B.to_json())
        ea, eb, eu = (model_functionals(M, S)["eta_star"] for S in (A, B, U))
        t.check(eu == max(ea, eb), "eta*(A u B) = max(eta*(A), eta*(B))",
                A=A.to_json(), B=B.to_json(), values=[ea, eb, eu])


def _sample_crosscheck(t: _Trial, rng):
    M = gen_model(rng)
    t.digest = M.digest()
    core = [v for i in M.canonical for v in M.atoms[i] if v not in (INF, -INF)]
    lo, hi = min(core) - 3, max(core) + 3
    r = Fraction(1, 4)
    X = sample(M, (lo, hi), r)
    xs = sample_coords(X)
    # scales strictly above the resolution, off the quarter grid
    grid = [r + Fraction(j, 3) + Fraction(1, 97) for j in range(6)]
    for eps in grid:
        comp_f = {i: chain_component(X, i, float(eps)).members for i in range(X.n)}
        for _ in range(5):
            i = int(rng.integers(X.n))
            region = model_component(M, xs[i], eps)
            want = frozenset(j for j, y in enumerate(xs) if y in region)
            t.check(comp_f[i] == want, "sample components match symbolic components", x=xs[i], eps=eps,
                    got=sorted(xs[j] for j in comp_f[i]), want=sorted(xs[j] for j in want))


# registry ---------------------------------------------------------------------------------------

SUITES: dict[str, Callable] = {
    "metric-axioms": _metric_axioms,
    "ultrametric": _ultrametric,
    "component-equivalence": _component_equivalence,
    "functional-coincidences": _functional_coincidences,
    "monotonicity": _monotonicity,
    "union-law": _union_law,
    "hausdorff-stability": _hausdorff_stability,
    "box-product-law": _box_product_law,
    "model-classifier-goldens": None,
    "model-fc-laws": _model_fc_laws,
    "hierarchy-audit": _hierarchy_audit,
    "bornology-laws": _bornology_laws,
    "sample-crosscheck": _sample_crosscheck,
}


def run_suite(name: str, seed: int, trials: int, start: int = 0) -> SuiteReport:
    if name not in SUITES:
        raise UnknownSuite(name)
    if trials < 0 or start < 0:
        raise ValueError("trials and start must be non-negative")
    report = SuiteReport(name, int(seed), int(trials), int(start))
    t0 = time.perf_counter()
    fn = SUITES[name]
    if fn is None:
        _goldens(report)
    else:
        for trial in range(start, start + trials):
            rng = np.random.default_rng([int(seed), trial])
            fn(_Trial(report, trial), rng)
    report.elapsed = time.perf_counter() - t0
    return report
