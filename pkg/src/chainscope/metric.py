"""Finite metric spaces, point subsets, enlargements and set distances."""

from __future__ import annotations

import hashlib
import math
import os
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

INF = math.inf

DEFAULT_MAX_PRODUCT = 4096


class MetricAxiomError(ValueError):
    """A distance matrix failed one of the metric axioms.

    ``witness`` holds the offending indices, first in row-major order.
    """

    axiom = "metric"

    def __init__(self, *witness: int, detail: str = ""):
        self.witness = tuple(int(w) for w in witness)
        msg = f"{self.axiom} violated at {self.witness}" if self.witness else f"{self.axiom} violated"
        if detail:
            msg = f"{msg}: {detail}"
        super().__init__(msg)


class Asymmetry(MetricAxiomError):
    axiom = "symmetry"


class NonzeroDiagonal(MetricAxiomError):
    axiom = "zero diagonal"


class ZeroDistance(MetricAxiomError):
    axiom = "identity of indiscernibles"


class NegativeDistance(MetricAxiomError):
    axiom = "non-negativity"


class TriangleViolation(MetricAxiomError):
    axiom = "triangle inequality"


class TooFewPoints(MetricAxiomError):
    axiom = "at least two points"


class MixedSpaces(ValueError):
    pass


class SizeOverflow(ValueError):
    pass


class FiniteMetricSpace:
    """An immutable, validated finite metric space.

    Build instances through :func:`validate_metric` (or :func:`from_coords`);
    the constructor itself trusts its input.
    """

    def __init__(self, labels: Sequence[str], dist: np.ndarray, meta: dict | None = None):
        self.labels = tuple(str(l) for l in labels)
        d = np.array(dist, dtype=float, copy=True)
        d.setflags(write=False)
        self.dist = d
        self.meta = dict(meta or {})
        self._index = {l: i for i, l in enumerate(self.labels)}
        self._cache: dict = {}

    def __len__(self) -> int:
        return len(self.labels)

    def __repr__(self) -> str:
        return f"FiniteMetricSpace(n={len(self)})"

    @property
    def n(self) -> int:
        return len(self.labels)

    def index(self, point: int | str) -> int:
        if isinstance(point, (int, np.integer)) and not isinstance(point, bool):
            i = int(point)
            if not 0 <= i < self.n:
                raise IndexError(f"point index {i} out of range for {self.n} points")
            return i
        try:
            return self._index[str(point)]
        except KeyError:
            raise KeyError(f"unknown point label {point!r}") from None

    def subset(self, members: Iterable[int | str]) -> PointSubset:
        return PointSubset(self, frozenset(self.index(m) for m in members))

    def all(self) -> PointSubset:
        return PointSubset(self, frozenset(range(self.n)))

    def diameter(self) -> float:
        return float(self.dist.max())

    def digest(self) -> str:
        h = hashlib.sha256()
        h.update("\x1f".join(self.labels).encode())
        h.update(np.ascontiguousarray(self.dist).tobytes())
        return h.hexdigest()


@dataclass(frozen=True, eq=False)
class PointSubset:
    space: FiniteMetricSpace
    members: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        if not self.members:
            raise ValueError("subsets must be non-empty")
        n = self.space.n
        for i in self.members:
            if not 0 <= i < n:
                raise IndexError(f"index {i} out of range for {n} points")

    @property
    def indices(self) -> tuple[int, ...]:
        return tuple(sorted(self.members))

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.indices)

    def __contains__(self, i) -> bool:
        return i in self.members

    def __eq__(self, other) -> bool:
        if not isinstance(other, PointSubset):
            return NotImplemented
        return self.space is other.space and self.members == other.members

    def __hash__(self) -> int:
        return hash((id(self.space), self.members))

    def __le__(self, other: PointSubset) -> bool:
        _same_space(self, other)
        return self.members <= other.members

    def __or__(self, other: PointSubset) -> PointSubset:
        _same_space(self, other)
        return PointSubset(self.space, self.members | other.members)

    @property
    def labels(self) -> list[str]:
        return [self.space.labels[i] for i in self.indices]


def _same_space(a: PointSubset, b: PointSubset) -> None:
    if a.space is not b.space:
        raise MixedSpaces("subsets belong to different spaces")


def check_scale(eps: float) -> float:
    eps = float(eps)
    if not eps > 0:
        raise ValueError(f"scale must be strictly positive, got {eps}")
    return eps


def validate_metric(labels: Sequence, matrix, *, meta: dict | None = None,
                    rtol: float = 1e-12) -> FiniteMetricSpace:
    """Check the metric axioms and return a :class:`FiniteMetricSpace`.

    Symmetry, the zero diagonal and positivity are checked exactly. The
    triangle inequality allows a relative slack of ``rtol`` times the
    diameter, which absorbs rounding in distances computed from coordinates.
    """
    d = np.asarray(matrix, dtype=float)
    if d.ndim != 2 or d.shape[0] != d.shape[1]:
        raise ValueError(f"distance matrix must be square, got shape {d.shape}")
    labels = list(labels) if labels is not None else [str(i) for i in range(d.shape[0])]
    if len(labels) != d.shape[0]:
        raise ValueError(f"{len(labels)} labels for a {d.shape[0]}x{d.shape[0]} matrix")
    if len(set(map(str, labels))) != len(labels):
        raise ValueError("labels must be unique")
    n = d.shape[0]
    if n < 2:
        raise TooFewPoints(detail=f"got {n}")
    if not np.all(np.isfinite(d)):
        i, j = np.argwhere(~np.isfinite(d))[0]
        raise NegativeDistance(i, j, detail="distances must be finite")
    neg = np.argwhere(d < 0)
    if len(neg):
        raise NegativeDistance(*neg[0])
    diag = np.flatnonzero(np.diag(d) != 0)
    if len(diag):
        raise NonzeroDiagonal(diag[0])
    asym = np.argwhere(d != d.T)
    if len(asym):
        raise Asymmetry(*asym[0])
    off = d + np.eye(n)
    zero = np.argwhere(off == 0)
    if len(zero):
        raise ZeroDistance(*zero[0])
    slack = rtol * float(d.max())
    for i in range(n):
        # d[i,k] <= d[i,j] + d[j,k] for all j,k
        viol = d[i][None, :] > d[i][:, None] + d + slack
        if viol.any():
            j, k = np.argwhere(viol)[0]
            raise TriangleViolation(i, j, k)
    return FiniteMetricSpace(labels, d, meta)


_METRICS = {
    "euclidean": lambda diff: np.sqrt((diff ** 2).sum(-1)),
    "chebyshev": lambda diff: np.abs(diff).max(-1),
    "manhattan": lambda diff: np.abs(diff).sum(-1),
}


def from_coords(coords, metric: str = "euclidean", labels=None, **kw) -> FiniteMetricSpace:
    """Convert points in R^d to a validated distance matrix."""
    pts = np.asarray(coords, dtype=float)
    if pts.ndim == 1:
        pts = pts[:, None]
    try:
        fn = _METRICS[metric]
    except KeyError:
        raise ValueError(f"unknown metric {metric!r}; choose from {sorted(_METRICS)}") from None
    d = fn(pts[:, None, :] - pts[None, :, :])
    if labels is None:
        labels = [str(i) for i in range(len(pts))]
    return validate_metric(labels, d, **kw)


def line_space(xs: Sequence[float], labels=None) -> FiniteMetricSpace:
    """Points on the real line with the usual metric."""
    xs = [float(x) for x in xs]
    if labels is None:
        labels = [f"{x:g}" for x in xs]
    return from_coords(np.array(xs)[:, None], "euclidean", labels=labels)


def point_to_set(space: FiniteMetricSpace, A: PointSubset) -> np.ndarray:
    """d(y, A) for every point y of the space."""
    return space.dist[:, A.indices].min(axis=1)


def enlargement(A: PointSubset, eps: float) -> PointSubset:
    """The open enlargement {y : d(y, A) < eps}."""
    eps = check_scale(eps)
    near = np.flatnonzero(point_to_set(A.space, A) < eps)
    return PointSubset(A.space, frozenset(int(i) for i in near))


def excess(A: PointSubset, B: PointSubset) -> float:
    _same_space(A, B)
    return float(A.space.dist[np.ix_(A.indices, B.indices)].min(axis=1).max())


def hausdorff(A: PointSubset, B: PointSubset) -> float:
    return max(excess(A, B), excess(B, A))


def set_gap(A: PointSubset, B: PointSubset) -> float:
    _same_space(A, B)
    return float(A.space.dist[np.ix_(A.indices, B.indices)].min())


def max_product_size() -> int:
    return int(os.environ.get("CHAINSCOPE_MAX_PRODUCT", DEFAULT_MAX_PRODUCT))


def box_product(X: FiniteMetricSpace, Y: FiniteMetricSpace, *,
                max_size: int | None = None) -> FiniteMetricSpace:
    """X x Y with the box (max) metric; point (i, j) sits at index i*|Y| + j."""
    limit = max_product_size() if max_size is None else max_size
    size = X.n * Y.n
    if size > limit:
        raise SizeOverflow(f"product has {size} points, limit is {limit}")
    d = np.maximum(np.kron(X.dist, np.ones((Y.n, Y.n))), np.kron(np.ones((X.n, X.n)), Y.dist))
    labels = [f"({x},{y})" for x in X.labels for y in Y.labels]
    return validate_metric(labels, d, meta={"product": [X.digest(), Y.digest()], "shape": [X.n, Y.n]})
