import math

import numpy as np
import pytest

from chainscope.chains import chain_ball, chain_component
from chainscope.functionals import (EXACT, GREEDY, BudgetInvalid, ExactTooLarge, alpha_k,
                                    critical_scales, eta_km, eta_star_k, gamma_m, gamma_star,
                                    isolation)
from chainscope.lab.oracles import oracle_kcenter
from chainscope.metric import enlargement, line_space, validate_metric


def covers_above(A, centers, t, m):
    """Independent check of the infimum contract: coverage just above t."""
    eps = math.nextafter(t, math.inf)
    got = set()
    for c in centers:
        got |= chain_ball(A.space, c, eps, m).members
    return A.members <= got


class TestIsolation:
    def test_collinear(self, line4):
        assert [isolation(line4, i) for i in range(4)] == [1, 1, 2, 4]

    def test_two_points(self):
        X = line_space([0, 3])
        assert isolation(X, 0) == isolation(X, 1) == 3

    def test_minimum_distance(self, line4):
        mind = line4.dist[line4.dist > 0].min()
        assert min(isolation(line4, i) for i in range(4)) == mind


class TestAlpha:
    def test_oracle_values(self, line4):
        A = line4.all()
        assert oracle_kcenter(line4, A, 1, 1) == 4
        assert oracle_kcenter(line4, A, 2, 1) == 2

    def test_one_center(self, line4):
        r = alpha_k(line4.all(), 1)
        assert (r.value, r.centers, r.exactness) == (4, (2,), EXACT)
        assert covers_above(line4.all(), r.centers, r.value, 1)

    def test_two_centers(self, line4):
        r = alpha_k(line4.all(), 2)
        assert r.value == 2
        assert [line4.labels[c] for c in r.centers] == ["1", "7"]
        assert not covers_above(line4.all(), r.centers, np.nextafter(r.value, 0), 1)

    def test_enough_centers(self, line4):
        A = line4.subset([0, 3])
        assert alpha_k(A, 2).value == 0
        assert alpha_k(A, 5).value == 0
        assert alpha_k(A, math.inf).value == 0

    def test_greedy_is_flagged_upper_bound(self, line4):
        r = alpha_k(line4.all(), 2, "greedy")
        assert r.exactness == GREEDY
        assert 2 <= r.value <= 4

    def test_invalid_budget(self, line4):
        for bad in (0, -1, 1.5, True):
            with pytest.raises(BudgetInvalid):
                alpha_k(line4.all(), bad)

    def test_invalid_mode(self, line4):
        with pytest.raises(ValueError):
            alpha_k(line4.all(), 1, "fast")

    def test_exact_bound_from_environment(self, monkeypatch):
        X = line_space(range(30))
        monkeypatch.setenv("CHAINSCOPE_MAX_EXACT", "100")
        with pytest.raises(ExactTooLarge):
            alpha_k(X.all(), 3)
        assert alpha_k(X.all(), 3, "greedy").exactness == GREEDY


class TestGamma:
    def test_singleton(self, line4):
        assert gamma_m(line4.subset([2]), 1).value == 0

    def test_saturated_equals_gamma_star(self, line4):
        assert gamma_m(line4.all(), 3).value == gamma_star(line4.all()).value == 4

    def test_three_points(self):
        X = line_space([0, 1, 3])
        r1, r2 = gamma_m(X.all(), 1), gamma_m(X.all(), 2)
        assert r1.value == 2 and r1.centers == (1,)
        assert r2.value == 2

    def test_gamma_star_examples(self, line4):
        assert gamma_star(line4.subset([0, 1, 2])).value == 2
        assert gamma_star(line4.subset([3])).value == 0

    def test_gamma_star_witness(self, line4):
        r = gamma_star(line4.subset([0, 1, 2]))
        eps = np.nextafter(r.value, math.inf)
        assert {0, 1, 2} <= chain_component(line4, r.centers[0], eps).members


class TestEtaStar:
    def test_examples(self, line4):
        A = line4.all()
        assert oracle_kcenter(line4, A, 2, 3) == 2
        assert eta_star_k(A, 2).value == 2
        assert eta_star_k(A, 4).value == 0
        assert eta_star_k(A, 1).value == gamma_star(A).value

    def test_witness_components_cover(self, line4):
        r = eta_star_k(line4.all(), 2)
        assert covers_above(line4.all(), r.centers, r.value, 3)


class TestEtaKM:
    def test_single_center_two_steps(self, line4):
        A = line4.all()
        assert oracle_kcenter(line4, A, 1, 2) == 4
        r = eta_km(A, 1, 2)
        assert r.value == 4 and covers_above(A, r.centers, r.value, 2)

    def test_m1_is_alpha(self, line4):
        for k in (1, 2, 3):
            assert eta_km(line4.all(), k, 1).value == alpha_k(line4.all(), k).value

    def test_saturated_is_eta_star(self, line4):
        for k in (1, 2, 3):
            assert eta_km(line4.all(), k, math.inf).value == eta_star_k(line4.all(), k).value

    def test_greedy(self, line4):
        r = eta_km(line4.all(), 2, 1, "greedy")
        assert r.exactness == GREEDY and r.value >= eta_km(line4.all(), 2, 1).value

    def test_cover_size_bound(self):
        X = line_space(range(22))
        with pytest.raises(ExactTooLarge):
            eta_km(X.all(), 2, 2)
        assert eta_km(X.all(), 2, 2, "greedy").value >= 1

    def test_unrestricted_budgets_vanish(self, line4):
        """Letting k run free makes every functional zero on a finite space."""
        A = line4.all()
        assert eta_km(A, math.inf, math.inf).value == 0
        assert alpha_k(A, math.inf).value == 0


def test_critical_scales(line4):
    assert critical_scales(line4).tolist() == [0, 1, 2, 3, 4, 6, 7]


def test_values_are_stored_distances():
    X = validate_metric(None, [[0, 0.3, 0.7], [0.3, 0, 0.5], [0.7, 0.5, 0]])
    stored = set(critical_scales(X).tolist())
    A = X.all()
    for r in (alpha_k(A, 1), gamma_m(A, 1), gamma_star(A), eta_star_k(A, 2), eta_km(A, 1, 2)):
        assert r.value in stored


def test_enlargement_and_alpha_agree(line4):
    # one center covers A above alpha_1 exactly when A sits in that center's enlargement
    r = alpha_k(line4.all(), 1)
    c = line4.subset(r.centers)
    assert enlargement(c, np.nextafter(r.value, math.inf)).members == line4.all().members
    assert enlargement(c, r.value).members != line4.all().members
