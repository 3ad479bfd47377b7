"""Covering functionals on finite metric spaces.

Every functional returns a *critical value* t: coverage holds at every
scale eps > t and fails at eps = t (strict balls). Critical values are
always stored distances, so comparisons are exact.

The parametric family fixes the number of centers ``k`` and the chain
length ``m``. Letting both run free makes every functional vanish on a
finite space, which is why the budgets are explicit.
"""

from __future__ import annotations

import itertools
import math
import os
from dataclasses import dataclass

import numpy as np

from .chains import bottleneck_matrix, chain_ball, merge_tree
from .metric import FiniteMetricSpace, PointSubset

EXACT = "exact"
GREEDY = "greedy-upper-bound"

DEFAULT_MAX_EXACT = 200_000
MAX_COVER_SIZE = 20


class BudgetInvalid(ValueError):
    pass


class ExactTooLarge(ValueError):
    pass


@dataclass(frozen=True)
class FunctionalResult:
    functional: str
    value: float
    centers: tuple[int, ...]
    exactness: str = EXACT

    def as_dict(self, space: FiniteMetricSpace | None = None) -> dict:
        out = {
            "functional": self.functional,
            "value": self.value,
            "centers": list(self.centers),
            "exactness": self.exactness,
        }
        if space is not None:
            out["center_labels"] = [space.labels[c] for c in self.centers]
        return out


def max_exact() -> int:
    return int(os.environ.get("CHAINSCOPE_MAX_EXACT", DEFAULT_MAX_EXACT))


def _budget(value, name: str, cap: int) -> int:
    if value is None or value == math.inf:
        return cap
    if isinstance(value, bool) or int(value) != value or value < 1:
        raise BudgetInvalid(f"{name} must be a positive integer or inf, got {value!r}")
    return min(int(value), cap)


def _check_mode(mode: str) -> None:
    if mode not in ("exact", "greedy"):
        raise ValueError(f"mode must be 'exact' or 'greedy', got {mode!r}")


def _check_exact_size(n: int, k: int) -> None:
    combos = math.comb(n, k)
    if combos > max_exact():
        raise ExactTooLarge(
            f"{combos} center sets exceed the exact-solver bound {max_exact()}; use mode='greedy'")


def critical_scales(X: FiniteMetricSpace) -> np.ndarray:
    """Sorted distinct values of {0} and every stored distance."""
    return np.unique(np.concatenate([[0.0], X.dist.ravel()]))


def isolation(X: FiniteMetricSpace, x) -> float:
    """Distance from x to the rest of the space."""
    i = X.index(x)
    row = np.delete(X.dist[i], i)
    return float(row.min())


def alpha_k(A: PointSubset, k, mode: str = "exact") -> FunctionalResult:
    """Smallest radius at which k open balls centred in X cover A."""
    _check_mode(mode)
    X = A.space
    k = _budget(k, "k", X.n)
    a_idx = list(A.indices)
    kk = min(k, len(a_idx))
    D = X.dist[:, a_idx]
    if mode == "greedy":
        return _gonzalez(A, kk)
    if kk == len(a_idx):
        return FunctionalResult("alpha_k", 0.0, tuple(a_idx))
    _check_exact_size(X.n, kk)
    best, best_set = math.inf, None
    combos = itertools.combinations(range(X.n), kk)
    while True:
        chunk = np.array(list(itertools.islice(combos, 20000)), dtype=int)
        if chunk.size == 0:
            break
        radii = D[chunk].min(axis=1).max(axis=1)
        j = int(np.argmin(radii))
        if radii[j] < best:
            best, best_set = float(radii[j]), tuple(int(c) for c in chunk[j])
    return FunctionalResult("alpha_k", best, best_set)


def _gonzalez(A: PointSubset, k: int) -> FunctionalResult:
    X = A.space
    a_idx = list(A.indices)
    centers = [a_idx[0]]
    near = X.dist[a_idx[0], a_idx].copy()
    while len(centers) < k:
        far = int(np.argmax(near))
        if near[far] == 0:
            break
        centers.append(a_idx[far])
        near = np.minimum(near, X.dist[a_idx[far], a_idx])
    return FunctionalResult("alpha_k", float(near.max()), tuple(sorted(centers)), GREEDY)


def gamma_m(A: PointSubset, m) -> FunctionalResult:
    """Smallest scale at which one chain ball of m steps covers A."""
    X = A.space
    m = _budget(m, "m", max(X.n - 1, 1))
    scales = critical_scales(X)
    members = A.members
    best, best_center = math.inf, None
    for x in range(X.n):
        lo, hi = 0, len(scales) - 1
        while lo < hi:
            mid = (lo + hi) // 2
            eps = math.nextafter(float(scales[mid]), math.inf)
            if members <= chain_ball(X, x, eps, m).members:
                hi = mid
            else:
                lo = mid + 1
        if scales[lo] < best:
            best, best_center = float(scales[lo]), x
    return FunctionalResult("gamma_m", best, (best_center,))


def gamma_star(A: PointSubset) -> FunctionalResult:
    """Smallest scale above which A sits in a single chainable component."""
    c = bottleneck_matrix(A.space)
    reach = c[:, list(A.indices)].max(axis=1)
    x = int(np.argmin(reach))
    return FunctionalResult("gamma_star", float(reach[x]), (x,))


def eta_star_k(A: PointSubset, k) -> FunctionalResult:
    """Smallest scale above which A meets at most k chainable components.

    Components partition the space, so this is exact for every k: walk the
    merge tree and count the classes that meet A.
    """
    X = A.space
    k = _budget(k, "k", X.n)
    tree = merge_tree(X)
    a_idx = list(A.indices)
    for t in [0.0, *tree.scales]:
        labels = tree.partition_closed(t)
        hit = np.unique(labels[a_idx])
        if len(hit) <= k:
            return FunctionalResult("eta_star_k", float(t), tuple(int(h) for h in hit))
    raise AssertionError("merge tree ends with a single class")


def _reach(X: FiniteMetricSpace, t: float, m: int) -> np.ndarray:
    """Boolean matrix: y is reachable from x in at most m steps of length <= t."""
    adj = (X.dist <= t).astype(np.int64)
    reach = np.eye(X.n, dtype=np.int64)
    for _ in range(m):
        nxt = ((reach @ adj) > 0).astype(np.int64)
        if np.array_equal(nxt, reach):
            break
        reach = nxt
    return reach.astype(bool)


def _masks(X: FiniteMetricSpace, a_idx: list[int], t: float, m: int) -> list[int]:
    cover = _reach(X, t, m)[:, a_idx]
    weights = 1 << np.arange(len(a_idx), dtype=object)
    return [int((weights * row).sum()) for row in cover]


def _prune(masks: list[int]) -> list[int]:
    uniq = sorted(set(masks), key=lambda s: -bin(s).count("1"))
    kept: list[int] = []
    for s in uniq:
        if not any(s | q == q for q in kept):
            kept.append(s)
    return kept


def _coverable(masks: list[int], full: int, k: int) -> bool:
    """Can at most k of the masks cover ``full``? Branch on the lowest uncovered bit."""
    sets = _prune(masks)

    def search(covered: int, left: int) -> bool:
        if covered == full:
            return True
        if left == 0:
            return False
        missing = full & ~covered
        low = missing & -missing
        for s in sets:
            if s & low and search(covered | s, left - 1):
                return True
        return False

    return search(0, k)


def _greedy_cover(masks: list[int], full: int, k: int) -> tuple[int, ...] | None:
    covered, picks = 0, []
    while covered != full and len(picks) < k:
        gains = [bin(s & ~covered).count("1") for s in masks]
        best = max(range(len(masks)), key=lambda i: (gains[i], -i))
        if gains[best] == 0:
            return None
        picks.append(best)
        covered |= masks[best]
    return tuple(sorted(picks)) if covered == full else None


def eta_km(A: PointSubset, k, m, mode: str = "exact") -> FunctionalResult:
    """Smallest scale at which k chain balls of m steps cover A."""
    _check_mode(mode)
    X = A.space
    k = _budget(k, "k", X.n)
    m = _budget(m, "m", max(X.n - 1, 1))
    a_idx = list(A.indices)
    full = (1 << len(a_idx)) - 1
    kk = min(k, len(a_idx))
    scales = critical_scales(X)
    if mode == "greedy":
        for t in scales:
            picks = _greedy_cover(_masks(X, a_idx, float(t), m), full, kk)
            if picks is not None:
                return FunctionalResult("eta_km", float(t), picks, GREEDY)
        raise AssertionError("the full space covers A at its diameter")
    if len(a_idx) > MAX_COVER_SIZE:
        raise ExactTooLarge(f"|A| = {len(a_idx)} exceeds the exact set-cover bound {MAX_COVER_SIZE}")
    _check_exact_size(X.n, kk)
    lo, hi = 0, len(scales) - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if _coverable(_masks(X, a_idx, float(scales[mid]), m), full, kk):
            hi = mid
        else:
            lo = mid + 1
    t = float(scales[lo])
    masks = _masks(X, a_idx, t, m)
    for combo in itertools.combinations(range(X.n), kk):
        acc = 0
        for c in combo:
            acc |= masks[c]
        if acc == full:
            return FunctionalResult("eta_km", t, combo)
    raise AssertionError("a feasible scale must admit a witness")

