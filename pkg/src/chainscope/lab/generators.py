"""Seeded instance generators for finite spaces, 1-D models and their subsets."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ..metric import FiniteMetricSpace, PointSubset, from_coords, line_space, validate_metric
from ..model.lineset import RAY, LineSet
from ..model.pieces import INF, Interval, Lattice, Points, Ray
from ..model.space import Model1D, SubsetSpec

KINDS = ("collinear", "euclidean-cloud", "random-graph-shortest-path", "perturbed-lattice")


@dataclass(frozen=True)
class GeneratorConfig:
    seed: int
    kind: str = "collinear"
    size: int = 8
    scale_range: tuple = (1.0, 10.0)
    dim: int = 2

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown generator kind {self.kind!r}; choose from {KINDS}")
        if self.size < 2:
            raise ValueError("generated spaces need at least two points")
        lo, hi = self.scale_range
        if not 0 < lo <= hi:
            raise ValueError("scale range must be a positive interval")


def gen_space(config: GeneratorConfig) -> FiniteMetricSpace:
    rng = np.random.default_rng(config.seed)
    n = config.size
    lo, hi = config.scale_range
    if config.kind == "collinear":
        # small integers on purpose: repeated distances exercise the strict thresholds
        xs = np.sort(rng.choice(np.arange(4 * n), size=n, replace=False)) * lo
        return line_space(xs)
    if config.kind == "euclidean-cloud":
        return from_coords(rng.uniform(0, hi, size=(n, config.dim)), "euclidean")
    if config.kind == "perturbed-lattice":
        side = int(np.ceil(n ** (1 / config.dim)))
        grid = np.stack(np.meshgrid(*[np.arange(side)] * config.dim), -1).reshape(-1, config.dim)
        pick = grid[rng.choice(len(grid), size=n, replace=False)].astype(float) * lo
        pick += rng.uniform(-0.1, 0.1, size=pick.shape) * lo
        return from_coords(pick, "euclidean")
    # random-graph-shortest-path
    w = np.full((n, n), np.inf)
    np.fill_diagonal(w, 0.0)
    order = rng.permutation(n)
    for i in range(1, n):
        a, b = order[i], order[rng.integers(i)]
        w[a, b] = w[b, a] = rng.uniform(lo, hi)
    for _ in range(n):
        a, b = rng.choice(n, size=2, replace=False)
        w[a, b] = w[b, a] = min(w[a, b], rng.uniform(lo, hi))
    for k in range(n):
        w = np.minimum(w, w[:, k:k + 1] + w[k:k + 1, :])
    return validate_metric([str(i) for i in range(n)], w)


def random_space(rng: np.random.Generator, max_size: int = 12, min_size: int = 2) -> FiniteMetricSpace:
    kind = KINDS[int(rng.integers(len(KINDS)))]
    size = int(rng.integers(min_size, max_size + 1))
    return gen_space(GeneratorConfig(int(rng.integers(2**63 - 1)), kind, size))


def random_subset(rng: np.random.Generator, X: FiniteMetricSpace, max_size: int | None = None) -> PointSubset:
    cap = X.n if max_size is None else min(max_size, X.n)
    size = int(rng.integers(1, cap + 1))
    return PointSubset(X, frozenset(rng.choice(X.n, size=size, replace=False).tolist()))


# models ------------------------------------------------------------------------


def _q(rng, lo=1, hi=6, dens=(1, 2, 3, 4)) -> Fraction:
    return Fraction(int(rng.integers(lo, hi + 1)), int(rng.choice(dens)))


def gen_model(rng: np.random.Generator) -> Model1D:
    """Random disjoint pieces laid out left to right with positive gaps."""
    pieces = []
    x = Fraction(int(rng.integers(-10, 10)))
    left = rng.choice(["none", "none", "ray", "lattice"])
    if left == "ray":
        pieces.append(Ray("left", x))
    elif left == "lattice":
        pieces.append(Lattice(x, _q(rng), None, "left"))
    elif left == "none":
        pieces.append(Points((x,)))
    for _ in range(int(rng.integers(1, 4))):
        x += _q(rng)
        kind = rng.choice(["interval", "points", "lattice"])
        if kind == "interval":
            b = x + _q(rng)
            pieces.append(Interval(x, b))
            x = b
        elif kind == "points":
            xs = [x]
            for _ in range(int(rng.integers(0, 3))):
                xs.append(xs[-1] + _q(rng))
            pieces.append(Points(tuple(xs)))
            x = xs[-1]
        else:
            h, c = _q(rng), int(rng.integers(2, 5))
            pieces.append(Lattice(x, h, c))
            x += h * (c - 1)
    x += _q(rng)
    right = rng.choice(["none", "none", "ray", "lattice", "two-lattices"])
    if right == "ray":
        pieces.append(Ray("right", x))
    elif right == "lattice":
        pieces.append(Lattice(x, _q(rng)))
    elif right == "two-lattices":
        h = _q(rng, 1, 3)
        a, b = int(rng.integers(1, 4)), int(rng.integers(1, 4))
        pieces.append(Lattice(x, a * h))
        pieces.append(Lattice(x + h / 2, b * h))
    else:
        pieces.append(Points((x,)))
    return Model1D(pieces)


def gen_subset(rng: np.random.Generator, s: LineSet) -> SubsetSpec:
    """A random non-empty closed subset of ``s``."""
    atoms, first, last = s.window(2)
    picks = []
    canon = list(range(first, last)) or list(range(len(atoms)))
    for i in rng.choice(canon, size=min(len(canon), int(rng.integers(1, 4))), replace=False):
        lo, hi = atoms[int(i)]
        if lo == hi:
            picks.append(Points((lo,)))
            continue
        a = lo if lo != -INF else hi - _q(rng, 1, 20)
        b = hi if hi != INF else lo + _q(rng, 1, 20)
        if lo == -INF and hi == INF:
            a, b = Fraction(int(rng.integers(-5, 0))), Fraction(int(rng.integers(0, 5)))
        roll = rng.random()
        if roll < 0.25 and (lo == -INF or hi == INF):
            picks.append(Ray("left", b) if lo == -INF else Ray("right", a))
        elif roll < 0.5:
            picks.append(Points((a + (b - a) * Fraction(int(rng.integers(0, 5)), 4),)))
        else:
            u = a + (b - a) * Fraction(int(rng.integers(0, 2)), 4)
            v = b - (b - a) * Fraction(int(rng.integers(0, 2)), 4)
            picks.append(Interval(u, v))
    for tail, direction in ((s.right, "right"), (s.left, "left")):
        if tail is not None and tail.periodic and rng.random() < 0.5:
            p = tail.anchors[int(rng.integers(len(tail.anchors)))]
            picks.append(Lattice(p, tail.period * int(rng.integers(1, 3)), None, direction))
    if not picks:
        lo, hi = atoms[canon[0]]
        picks.append(Points((lo if lo != -INF else hi,)))
    return SubsetSpec(picks)


def random_points(rng: np.random.Generator, M: Model1D, count: int) -> list[Fraction]:
    """Rational points of the model: atom endpoints, interior points, far tail points."""
    out = []
    atoms = [M.atoms[i] for i in M.canonical]
    for _ in range(count):
        lo, hi = atoms[int(rng.integers(len(atoms)))]
        if lo == hi:
            x = lo
        else:
            a = lo if lo != -INF else hi - 30
            b = hi if hi != INF else lo + 30
            x = a + (b - a) * Fraction(int(rng.integers(0, 17)), 16)
        out.append(x)
    s = M.set
    for tail, sign in ((s.right, 1), (s.left, -1)):
        if tail is not None and tail.periodic:
            out.append(tail.anchors[0] + sign * 7 * tail.period)
    return out


def gen_bounded_window(M: Model1D) -> tuple[Fraction, Fraction]:
    """A window covering the core of the model plus a period of each tail."""
    atoms = [M.atoms[i] for i in M.canonical]
    vals = [v for a in atoms for v in a if v not in (INF, -INF)]
    lo, hi = min(vals) - 2, max(vals) + 2
    return lo, hi


__all__ = ["GeneratorConfig", "gen_space", "random_space", "random_subset", "gen_model",
           "gen_subset", "random_points", "gen_bounded_window", "KINDS", "RAY"]
