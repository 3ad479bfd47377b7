"""Generators of closed subsets of the real line, with exact rational data."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

INF = math.inf


def rational(value) -> Fraction:
    """Parse ``"p/q"``, ints or Fractions. Floats are rejected on purpose."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            raise ValueError(f"not a rational: {value!r}") from None
    raise TypeError(f"expected a rational given as int or 'p/q' string, got {value!r}")


def fmt_rational(x) -> str:
    if x == INF:
        return "inf"
    if x == -INF:
        return "-inf"
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class Interval:
    a: Fraction
    b: Fraction

    def __post_init__(self):
        object.__setattr__(self, "a", rational(self.a))
        object.__setattr__(self, "b", rational(self.b))
        if not self.a < self.b:
            raise ValueError(f"interval [{self.a}, {self.b}] is degenerate; use Points for single points")

    def atoms(self, lo, hi):
        return [(self.a, self.b)]

    def extent(self):
        return self.a, self.b

    def to_json(self):
        return {"type": "interval", "a": fmt_rational(self.a), "b": fmt_rational(self.b)}


@dataclass(frozen=True)
class Ray:
    """(-inf, end] for dir='left', [end, inf) for dir='right'."""

    dir: str
    end: Fraction

    def __post_init__(self):
        if self.dir not in ("left", "right"):
            raise ValueError(f"ray direction must be 'left' or 'right', got {self.dir!r}")
        object.__setattr__(self, "end", rational(self.end))

    def atoms(self, lo, hi):
        return [(-INF, self.end)] if self.dir == "left" else [(self.end, INF)]

    def extent(self):
        return self.end, self.end

    def to_json(self):
        return {"type": "ray", "dir": self.dir, "end": fmt_rational(self.end)}


@dataclass(frozen=True)
class FullLine:
    def atoms(self, lo, hi):
        return [(-INF, INF)]

    def extent(self):
        return None

    def to_json(self):
        return {"type": "fullline"}


@dataclass(frozen=True)
class Lattice:
    """start + i*step for i = 0..count-1 (count=None means unbounded).

    An unbounded lattice runs to the right, or to the left with dir='left'.
    """

    start: Fraction
    step: Fraction
    count: int | None = None
    dir: str = "right"

    def __post_init__(self):
        object.__setattr__(self, "start", rational(self.start))
        object.__setattr__(self, "step", rational(self.step))
        if not self.step > 0:
            raise ValueError("lattice step must be positive")
        if self.count is not None and (int(self.count) != self.count or self.count < 1):
            raise ValueError("lattice count must be a positive integer or None")
        if self.dir not in ("left", "right"):
            raise ValueError(f"lattice direction must be 'left' or 'right', got {self.dir!r}")

    @property
    def infinite(self) -> bool:
        return self.count is None

    @property
    def sign(self) -> int:
        return 1 if self.dir == "right" else -1

    def point(self, i: int) -> Fraction:
        return self.start + self.sign * i * self.step

    def points_in(self, lo, hi) -> list[Fraction]:
        """Lattice points inside [lo, hi] (finite bounds)."""
        first, last = self.point(0), (None if self.infinite else self.point(self.count - 1))
        pmin = first if self.sign > 0 else (last if last is not None else -INF)
        pmax = (last if last is not None else INF) if self.sign > 0 else first
        lo, hi = max(lo, pmin), min(hi, pmax)
        if lo > hi:
            return []
        base = pmin if pmin != -INF else pmax
        i0 = math.ceil((lo - base) / self.step)
        i1 = math.floor((hi - base) / self.step)
        return [base + i * self.step for i in range(i0, i1 + 1)]

    def atoms(self, lo, hi):
        return [(p, p) for p in self.points_in(lo, hi)]

    def extent(self):
        if self.infinite:
            return self.start, self.start
        a, b = self.point(0), self.point(self.count - 1)
        return min(a, b), max(a, b)

    def to_json(self):
        out = {"type": "lattice", "start": fmt_rational(self.start), "step": fmt_rational(self.step),
               "count": "inf" if self.infinite else str(self.count)}
        if self.dir != "right":
            out["dir"] = self.dir
        return out


@dataclass(frozen=True)
class Points:
    xs: tuple

    def __post_init__(self):
        xs = tuple(sorted({rational(x) for x in self.xs}))
        if not xs:
            raise ValueError("Points needs at least one coordinate")
        object.__setattr__(self, "xs", xs)

    def atoms(self, lo, hi):
        return [(x, x) for x in self.xs]

    def extent(self):
        return self.xs[0], self.xs[-1]

    def to_json(self):
        return {"type": "points", "xs": [fmt_rational(x) for x in self.xs]}


Piece = Union[Interval, Ray, FullLine, Lattice, Points]


def piece_from_json(obj: dict) -> Piece:
    kind = obj.get("type")
    try:
        if kind == "interval":
            return Interval(obj["a"], obj["b"])
        if kind == "ray":
            return Ray(obj["dir"], obj["end"])
        if kind == "fullline":
            return FullLine()
        if kind == "lattice":
            count = obj.get("count", "inf")
            count = None if str(count) in ("inf", "infinity") else int(count)
            return Lattice(obj["start"], obj["step"], count, obj.get("dir", "right"))
        if kind == "points":
            return Points(tuple(obj["xs"]))
    except KeyError as exc:
        raise ValueError(f"piece {obj!r} is missing field {exc.args[0]!r}") from None
    raise ValueError(f"unknown piece type {kind!r}")
