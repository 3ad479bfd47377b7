"""Property-based checks with Hypothesis-generated inputs."""

import itertools
import math
from fractions import Fraction

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from chainscope.chains import bottleneck_matrix, chain_ball, chain_component, merge_tree
from chainscope.functionals import alpha_k, eta_km, eta_star_k, gamma_m, gamma_star
from chainscope.lab.generators import gen_model, gen_subset, random_points
from chainscope.lab.oracles import oracle_chain_component, oracle_kcenter, oracle_minimax
from chainscope.metric import PointSubset, enlargement, from_coords, hausdorff
from chainscope.model import (classify_space, classify_subset, f_c, isolation, model_component,
                              model_functionals, nslc)

SETTINGS = settings(max_examples=60, deadline=None)

coords = st.lists(st.tuples(st.integers(-20, 20), st.integers(-20, 20)), min_size=2, max_size=9,
                  unique=True)
metrics = st.sampled_from(["euclidean", "chebyshev", "manhattan"])


@st.composite
def spaces(draw, max_size=9):
    pts = draw(coords.filter(lambda p: len(p) <= max_size))
    return from_coords(pts, draw(metrics))


@st.composite
def space_and_subset(draw, max_size=9):
    X = draw(spaces(max_size))
    idx = draw(st.sets(st.integers(0, X.n - 1), min_size=1))
    return X, PointSubset(X, frozenset(idx))


@SETTINGS
@given(spaces())
def test_bottleneck_is_an_ultrametric_below_d(X):
    c = bottleneck_matrix(X)
    assert np.all(c <= X.dist)
    assert np.all(c[:, None, :] <= np.maximum(c[:, :, None], c[None, :, :]))
    for x, y in itertools.combinations(range(X.n), 2):
        assert c[x, y] == oracle_minimax(X, x, y)


@SETTINGS
@given(spaces(), st.integers(0, 200))
def test_components_match_oracle_and_merge_tree(X, pick):
    vals = np.unique(X.dist[X.dist > 0])
    eps = float(vals[pick % len(vals)])
    labels = merge_tree(X).partition(eps)
    for x in range(X.n):
        comp = chain_component(X, x, eps).members
        assert comp == oracle_chain_component(X, x, eps).members
        assert comp == set(np.flatnonzero(labels == labels[x]).tolist())
        balls = [chain_ball(X, x, eps, m).members for m in range(1, X.n)]
        assert all(a <= b for a, b in zip(balls, balls[1:])) and (not balls or balls[-1] == comp)


@SETTINGS
@given(space_and_subset(), st.floats(0.1, 30), st.floats(0.1, 30))
def test_enlargement_monotone(XA, e1, e2):
    X, A = XA
    lo, hi = sorted((e1, e2))
    assert A.members <= enlargement(A, lo).members <= enlargement(A, hi).members


@SETTINGS
@given(space_and_subset(), st.data())
def test_hausdorff_pseudometric(XA, data):
    X, A = XA
    B = PointSubset(X, frozenset(data.draw(st.sets(st.integers(0, X.n - 1), min_size=1))))
    C = PointSubset(X, frozenset(data.draw(st.sets(st.integers(0, X.n - 1), min_size=1))))
    assert hausdorff(A, B) == hausdorff(B, A)
    assert hausdorff(A, C) <= hausdorff(A, B) + hausdorff(B, C) + 1e-12 * X.diameter()
    assert (hausdorff(A, B) == 0) == (A == B)


@SETTINGS
@given(space_and_subset(max_size=7), st.integers(1, 3), st.integers(1, 6))
def test_covering_functionals_match_oracle(XA, k, m):
    X, A = XA
    m = min(m, X.n - 1)
    assert alpha_k(A, k).value == oracle_kcenter(X, A, k, 1)
    assert eta_km(A, k, m).value == oracle_kcenter(X, A, k, m)
    assert eta_star_k(A, k).value == oracle_kcenter(X, A, k, X.n - 1)
    assert gamma_star(A).value == eta_star_k(A, 1).value
    assert gamma_m(A, m).value == eta_km(A, 1, m).value
    assert eta_star_k(A, k).value <= eta_km(A, k, m).value <= alpha_k(A, k).value


@SETTINGS
@given(space_and_subset(), st.data(), st.integers(1, 4))
def test_hausdorff_stability(XA, data, k):
    X, A = XA
    B = PointSubset(X, frozenset(data.draw(st.sets(st.integers(0, X.n - 1), min_size=1))))
    assert eta_star_k(B, k).value <= max(eta_star_k(A, k).value, hausdorff(A, B))


seeds = st.integers(0, 2**32 - 1)


@SETTINGS
@given(seeds)
def test_model_fc_laws(seed):
    rng = np.random.default_rng(seed)
    M = gen_model(rng)
    K = nslc(M)
    for x in random_points(rng, M, 15):
        v = f_c(M, x)
        assert (v == 0) == (x in K)
        assert isolation(M, x) <= v
        if 0 < v < math.inf:
            assert model_component(M, x, v).bounded
            assert not model_component(M, x, v + Fraction(1, 5)).bounded


@SETTINGS
@given(seeds)
def test_model_hierarchy_and_bornology(seed):
    rng = np.random.default_rng(seed)
    M = gen_model(rng)
    v = classify_space(M).verdicts
    assert (not v["compact"] or v["uss"]) and (not v["uss"] or v["cofinally_complete"])
    assert not v["uc"] or v["uss"]
    A, B = gen_subset(rng, M.set), gen_subset(rng, M.set)
    ua, ub = (classify_subset(M, S).verdicts["uss_subset"] for S in (A, B))
    U = A.union(B)
    assert not (ua and ub) or classify_subset(M, U).verdicts["uss_subset"]
    fa, fb, fu = (model_functionals(M, S) for S in (A, B, U))
    assert fu["eta_star"] == max(fa["eta_star"], fb["eta_star"])
    assert A.issubset(U) and B.issubset(U)
