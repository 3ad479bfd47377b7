"""Epsilon-chains on finite metric spaces.

Two points are joined by an eps-chain when every step is strictly shorter
than eps. The bottleneck (minimax) distance c(x, y) is the threshold above
which that happens; it is read off a minimum spanning tree.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .metric import FiniteMetricSpace, PointSubset, check_scale


class NotJoinable(Exception):
    """The two points lie in different eps-chainable components."""

    def __init__(self, x: int, y: int, value: float, eps: float):
        self.x, self.y, self.value, self.eps = x, y, value, eps
        super().__init__(f"points {x} and {y} have bottleneck distance {value} >= scale {eps}")


@dataclass(frozen=True)
class Chain:
    points: tuple[int, ...]
    scale: float
    space: FiniteMetricSpace | None = None

    def __post_init__(self):
        check_scale(self.scale)
        if not self.points:
            raise ValueError("a chain needs at least one point")
        if self.space is not None:
            d = self.space.dist
            for a, b in zip(self.points, self.points[1:]):
                if not d[a, b] < self.scale:
                    raise ValueError(f"step {a}->{b} has length {d[a, b]} >= {self.scale}")

    def __len__(self) -> int:
        """Number of steps."""
        return len(self.points) - 1


def minimum_spanning_tree(X: FiniteMetricSpace) -> list[tuple[int, int, float]]:
    """Prim's algorithm on the complete distance graph, O(n^2).

    Returns edges (parent, child, weight) in the order they were added.
    """
    cached = X._cache.get("mst")
    if cached is not None:
        return cached
    d = X.dist
    n = X.n
    in_tree = np.zeros(n, dtype=bool)
    best = np.full(n, np.inf)
    parent = np.full(n, -1)
    best[0] = 0.0
    edges = []
    for _ in range(n):
        cand = np.where(in_tree, np.inf, best)
        v = int(np.argmin(cand))
        in_tree[v] = True
        if parent[v] >= 0:
            edges.append((int(parent[v]), v, float(d[parent[v], v])))
        closer = (~in_tree) & (d[v] < best)
        best[closer] = d[v][closer]
        parent[closer] = v
    X._cache["mst"] = edges
    return edges


def _tree_adjacency(X: FiniteMetricSpace) -> list[list[tuple[int, float]]]:
    adj: list[list[tuple[int, float]]] = [[] for _ in range(X.n)]
    for u, v, w in minimum_spanning_tree(X):
        adj[u].append((v, w))
        adj[v].append((u, w))
    return adj


def bottleneck_matrix(X: FiniteMetricSpace) -> np.ndarray:
    """Minimax chain distances c(x, y) as a read-only symmetric matrix."""
    cached = X._cache.get("bottleneck")
    if cached is not None:
        return cached
    n = X.n
    adj = _tree_adjacency(X)
    c = np.zeros((n, n))
    for root in range(n):
        row = c[root]
        stack = [(root, -1)]
        while stack:
            u, p = stack.pop()
            for v, w in adj[u]:
                if v != p:
                    row[v] = max(row[u], w)
                    stack.append((v, u))
    c.setflags(write=False)
    X._cache["bottleneck"] = c
    return c


def chain_ball(X: FiniteMetricSpace, x, eps: float, m: int) -> PointSubset:
    """Points reachable from x by an eps-chain of at most m steps."""
    eps = check_scale(eps)
    if m < 1:
        raise ValueError("chain length must be at least 1")
    x = X.index(x)
    adj = X.dist < eps
    reached = np.zeros(X.n, dtype=bool)
    reached[x] = True
    frontier = reached.copy()
    for _ in range(m):
        frontier = adj[frontier].any(axis=0) & ~reached
        if not frontier.any():
            break
        reached |= frontier
    return PointSubset(X, frozenset(np.flatnonzero(reached).tolist()))


def chain_component(X: FiniteMetricSpace, x, eps: float) -> PointSubset:
    eps = check_scale(eps)
    x = X.index(x)
    members = np.flatnonzero(bottleneck_matrix(X)[x] < eps)
    return PointSubset(X, frozenset(members.tolist()))


def tree_path(X: FiniteMetricSpace, x: int, y: int) -> list[int]:
    adj = _tree_adjacency(X)
    prev = {x: -1}
    stack = [x]
    while stack:
        u = stack.pop()
        if u == y:
            break
        for v, _ in adj[u]:
            if v not in prev:
                prev[v] = u
                stack.append(v)
    path = [y]
    while path[-1] != x:
        path.append(prev[path[-1]])
    return path[::-1]


def witness_chain(X: FiniteMetricSpace, x, y, eps: float) -> Chain:
    """An eps-chain from x to y along the spanning tree, or NotJoinable."""
    eps = check_scale(eps)
    x, y = X.index(x), X.index(y)
    value = float(bottleneck_matrix(X)[x, y])
    if not value < eps:
        raise NotJoinable(x, y, value, eps)
    return Chain(tuple(tree_path(X, x, y)), eps, X)


@dataclass(frozen=True)
class MergeEvent:
    scale: float
    merged: tuple[tuple[int, ...], ...]   # classes (just below scale) fused at this scale

    @property
    def representatives(self) -> tuple[int, ...]:
        return tuple(cls[0] for cls in self.merged)


class MergeTree:
    """Single-linkage dendrogram of a finite space.

    ``partition(eps)`` returns a label array: points share a label iff
    c(x, y) < eps. Labels are the smallest index in each class.
    """

    def __init__(self, X: FiniteMetricSpace):
        self.space = X
        n = X.n
        parent = list(range(n))

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        edges = sorted(minimum_spanning_tree(X), key=lambda e: e[2])
        labels = np.arange(n)
        self.scales: list[float] = []
        self.events: list[MergeEvent] = []
        self._labels = [labels.copy()]   # _labels[i] is the partition for eps in (scales[i-1], scales[i]]
        i = 0
        while i < len(edges):
            w = edges[i][2]
            touched = []
            while i < len(edges) and edges[i][2] == w:
                u, v = edges[i][0], edges[i][1]
                touched += [u, v]
                ru, rv = find(u), find(v)
                parent[max(ru, rv)] = min(ru, rv)
                i += 1
            before = self._labels[-1]
            labels = np.array([find(a) for a in range(n)])
            groups: dict[int, set[int]] = {}
            for t in touched:
                groups.setdefault(int(labels[t]), set()).add(int(before[t]))
            for root in sorted(groups):
                merged = tuple(tuple(np.flatnonzero(before == r).tolist()) for r in sorted(groups[root]))
                self.events.append(MergeEvent(w, merged))
            self.scales.append(w)
            self._labels.append(labels)
        for arr in self._labels:
            arr.setflags(write=False)

    def partition(self, eps: float) -> np.ndarray:
        eps = check_scale(eps)
        return self._labels[bisect.bisect_left(self.scales, eps)]

    def classes(self, eps: float) -> list[tuple[int, ...]]:
        labels = self.partition(eps)
        return [tuple(np.flatnonzero(labels == r).tolist()) for r in np.unique(labels)]

    def partition_closed(self, t: float) -> np.ndarray:
        """Partition for the relation c(x, y) <= t, i.e. just above scale t."""
        return self._labels[bisect.bisect_right(self.scales, t)]

    def to_csv(self) -> str:
        lines = ["scale,representatives"]
        for ev in self.events:
            lines.append(f"{ev.scale!r},{';'.join(self.space.labels[r] for r in ev.representatives)}")
        return "\n".join(lines) + "\n"

    def to_dot(self) -> str:
        X = self.space
        out = ["digraph mergetree {", "  rankdir=BT;"]
        for i, lab in enumerate(X.labels):
            out.append(f'  "p{i}" [label="{lab}", shape=box];')
        current = {i: f"p{i}" for i in range(X.n)}
        for k, ev in enumerate(self.events):
            node = f"m{k}"
            out.append(f'  "{node}" [label="{ev.scale!r}"];')
            for cls in ev.merged:
                out.append(f'  "{current[cls[0]]}" -> "{node}";')
            for cls in ev.merged:
                for p in cls:
                    current[p] = node
        out.append("}")
        return "\n".join(out) + "\n"


def merge_tree(X: FiniteMetricSpace) -> MergeTree:
    cached = X._cache.get("merge_tree")
    if cached is None:
        cached = X._cache["merge_tree"] = MergeTree(X)
    return cached


def components(X: FiniteMetricSpace, eps: float) -> list[PointSubset]:
    return [PointSubset(X, frozenset(cls)) for cls in merge_tree(X).classes(eps)]


def is_chain(X: FiniteMetricSpace, points: Sequence[int], eps: float) -> bool:
    return all(X.dist[a, b] < eps for a, b in zip(points, points[1:]))
