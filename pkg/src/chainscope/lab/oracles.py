"""Brute-force reference implementations.

Nothing here imports the spanning-tree, merge-tree or set-cover code: each
oracle reads the raw distance matrix and follows the definitions literally.
"""

from __future__ import annotations

import itertools
import math

from ..metric import FiniteMetricSpace, PointSubset

ORACLE_MAX_POINTS = 12
KCENTER_MAX_POINTS = 10
KCENTER_MAX_K = 3


class TooLarge(ValueError):
    pass


def oracle_chain_component(X: FiniteMetricSpace, x, eps: float) -> PointSubset:
    """Breadth-first closure over the graph with edges d < eps."""
    x = X.index(x)
    d = X.dist
    seen = {x}
    queue = [x]
    while queue:
        u = queue.pop(0)
        for v in range(X.n):
            if v not in seen and d[u][v] < eps:
                seen.add(v)
                queue.append(v)
    return PointSubset(X, frozenset(seen))


def oracle_chain_ball(X: FiniteMetricSpace, x, eps: float, m: int) -> frozenset:
    """Points reachable by an eps-chain of at most m steps, layer by layer."""
    x = X.index(x)
    d = X.dist
    layer = {x}
    for _ in range(m):
        layer = layer | {v for u in layer for v in range(X.n) if d[u][v] < eps}
    return frozenset(layer)


def oracle_minimax(X: FiniteMetricSpace, x, y) -> float:
    """Minimum over all simple paths from x to y of the longest step."""
    if X.n > ORACLE_MAX_POINTS:
        raise TooLarge(f"oracle_minimax is exponential; {X.n} > {ORACLE_MAX_POINTS} points")
    x, y = X.index(x), X.index(y)
    if x == y:
        return 0.0
    d = X.dist.tolist()
    best = d[x][y]  # the direct step is itself a simple path
    order = [sorted(range(X.n), key=lambda v: d[u][v]) for u in range(X.n)]

    seen = [math.inf] * X.n  # smallest worst step with which each vertex was reached

    # depth-first over simple paths. A branch stops once its worst step
    # matches the best complete path, or when an earlier path reached the
    # same vertex with no larger worst step: that earlier visit already
    # relaxed every continuation, and shortcutting a walk to a simple path
    # never raises its maximum step.
    def walk(u, visited, worst):
        nonlocal best
        if u == y:
            best = worst
            return
        if worst >= seen[u]:
            return
        seen[u] = worst
        for v in order[u]:
            step = d[u][v]
            if step >= best:
                break
            if v not in visited:
                visited.add(v)
                walk(v, visited, max(worst, step))
                visited.discard(v)

    walk(x, {x}, 0.0)
    return float(best)


def oracle_kcenter(X: FiniteMetricSpace, A: PointSubset, k: int, m: int) -> float:
    """Critical scale for covering A by k chain balls of depth m.

    Tries every candidate scale t (stored distances and 0) in increasing order
    and every set of at most k centers; coverage just above t means steps of
    length <= t are allowed.
    """
    if X.n > KCENTER_MAX_POINTS or k > KCENTER_MAX_K:
        raise TooLarge(f"oracle_kcenter needs |X| <= {KCENTER_MAX_POINTS} and k <= {KCENTER_MAX_K}")
    d = X.dist
    targets = set(A.indices)
    scales = sorted({0.0} | {float(d[i][j]) for i in range(X.n) for j in range(X.n)})
    for t in scales:
        balls = []
        for c in range(X.n):
            layer = {c}
            for _ in range(m):
                layer = layer | {v for u in layer for v in range(X.n) if d[u][v] <= t}
            balls.append(layer)
        for size in range(1, k + 1):
            for centers in itertools.combinations(range(X.n), size):
                covered = set().union(*(balls[c] for c in centers))
                if targets <= covered:
                    return t
    raise AssertionError("unreachable: the largest distance covers everything")


def oracle_partition(X: FiniteMetricSpace, eps: float) -> list[frozenset]:
    out, left = [], set(range(X.n))
    while left:
        x = min(left)
        comp = oracle_chain_component(X, x, eps).members
        out.append(comp)
        left -= comp
    return out
