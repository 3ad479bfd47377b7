"""Canonical form for finitely presented closed subsets of the line.

A set is stored as a finite run of *core atoms* (closed intervals, points and
rays, separated by positive gaps) plus at most one tail on each side. A tail
is either a ray (the last core atom reaches infinity) or an eventually
periodic lattice tail: beyond ``cut`` the set repeats with ``period``, and
``anchors`` lists its points in one period next to the cut.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .pieces import (INF, FullLine, Interval, Lattice, Piece, Points, Ray,
                     fmt_rational, rational)


class PiecesOverlap(ValueError):
    def __init__(self, i: int, j: int, where):
        self.pieces = (i, j)
        super().__init__(f"pieces {i} and {j} intersect near {fmt_rational(where)}")


def lcm(a: Fraction, b: Fraction) -> Fraction:
    """Least common multiple of two positive rationals."""
    num = math.lcm(a.numerator * b.denominator, b.numerator * a.denominator)
    return Fraction(num, a.denominator * b.denominator)


@dataclass(frozen=True)
class Tail:
    kind: str                      # "ray" or "periodic"
    period: Fraction | None = None
    cut: Fraction | None = None
    anchors: tuple = ()

    @property
    def periodic(self) -> bool:
        return self.kind == "periodic"


RAY = Tail("ray")


class LineSet:
    """A closed subset of the real line in canonical atom/tail form."""

    def __init__(self, core: Sequence[tuple], left: Tail | None = None, right: Tail | None = None):
        self.core = tuple(core)
        self.left = left
        self.right = right

    # construction -------------------------------------------------------

    @classmethod
    def from_pieces(cls, pieces: Iterable[Piece], *, disjoint: bool = False) -> "LineSet":
        pieces = list(pieces)
        right_lat = [p for p in pieces if isinstance(p, Lattice) and p.infinite and p.dir == "right"]
        left_lat = [p for p in pieces if isinstance(p, Lattice) and p.infinite and p.dir == "left"]
        extents = [p.extent() for p in pieces if p.extent() is not None]
        if not extents:
            atoms = [(-INF, INF)] if pieces else []
            return cls(atoms, RAY if atoms else None, RAY if atoms else None)
        hi_cut = max(e[1] for e in extents)
        lo_cut = min(e[0] for e in extents)
        period_r = _lcm_all(p.step for p in right_lat)
        period_l = _lcm_all(p.step for p in left_lat)
        hi_enum = hi_cut + (period_r or 0)
        lo_enum = lo_cut - (period_l or 0)

        tagged = []
        for idx, p in enumerate(pieces):
            for lo, hi in p.atoms(lo_enum, hi_enum):
                tagged.append((lo, hi, idx))
        tagged.sort(key=lambda t: (t[0], t[1]))
        merged: list[list] = []
        for lo, hi, idx in tagged:
            if merged and lo <= merged[-1][1]:
                if disjoint and idx != merged[-1][2]:
                    raise PiecesOverlap(merged[-1][2], idx, lo)
                merged[-1][1] = max(merged[-1][1], hi)
            else:
                merged.append([lo, hi, idx])
        atoms = [(lo, hi) for lo, hi, _ in merged]

        right = left = None
        if atoms and atoms[-1][1] == INF:
            right = RAY
        elif period_r:
            anchors = tuple(lo for lo, hi in atoms if lo > hi_cut)
            atoms = [a for a in atoms if a[0] <= hi_cut]
            right = Tail("periodic", period_r, hi_cut, anchors)
        if atoms and atoms[0][0] == -INF:
            left = RAY
        elif period_l:
            anchors = tuple(hi for lo, hi in atoms if hi < lo_cut)
            atoms = [a for a in atoms if a[1] >= lo_cut]
            left = Tail("periodic", period_l, lo_cut, anchors)
        return cls(atoms, left, right)

    # basic queries ---------------------------------------------------------

    @property
    def empty(self) -> bool:
        return not self.core and self.left is None and self.right is None

    @property
    def bounded(self) -> bool:
        return self.left is None and self.right is None

    compact = bounded  # closed by construction

    @property
    def has_limit_points(self) -> bool:
        return any(lo < hi for lo, hi in self.core)

    def point_count(self) -> float:
        if self.left or self.right or self.has_limit_points:
            return INF
        return len(self.core)

    def bounds(self) -> tuple:
        lo = -INF if self.left else (self.core[0][0] if self.core else INF)
        hi = INF if self.right else (self.core[-1][1] if self.core else -INF)
        return lo, hi

    def window(self, periods: int = 3) -> tuple[list[tuple], int, int]:
        """Core atoms with ``periods`` copies of each periodic tail unrolled.

        Returns (atoms, first, last): atoms[first:last] are the canonical atoms
        whose values stand for every point of the set (the outermost copy on
        each side only serves as neighbours).
        """
        left_atoms: list[tuple] = []
        first = 0
        if self.left and self.left.periodic:
            L = self.left.period
            for j in range(periods - 1, -1, -1):
                left_atoms += [(p - j * L, p - j * L) for p in self.left.anchors]
            first = len(self.left.anchors)
        right_atoms: list[tuple] = []
        tail_last = 0
        if self.right and self.right.periodic:
            L = self.right.period
            for j in range(periods):
                right_atoms += [(p + j * L, p + j * L) for p in self.right.anchors]
            tail_last = len(self.right.anchors)
        atoms = left_atoms + list(self.core) + right_atoms
        return atoms, first, len(atoms) - tail_last

    def reduce(self, x):
        """Translate x by whole periods into the canonical window."""
        x = Fraction(x)
        r = self.right
        if r and r.periodic and x > r.cut + 2 * r.period:
            k = math.ceil((x - r.cut - 2 * r.period) / r.period)
            return x - k * r.period, k
        l = self.left
        if l and l.periodic and x < l.cut - 2 * l.period:
            k = math.ceil((l.cut - 2 * l.period - x) / l.period)
            return x + k * l.period, -k
        return x, 0

    def locate(self, x, atoms: list[tuple] | None = None) -> int | None:
        """Index of the window atom containing x (after reduction), else None."""
        if atoms is None:
            atoms = self.window()[0]
        x, _ = self.reduce(x)
        i = bisect.bisect_right([a[0] for a in atoms], x) - 1
        if i >= 0 and atoms[i][0] <= x <= atoms[i][1]:
            return i
        return None

    def __contains__(self, x) -> bool:
        return self.locate(rational(x) if not isinstance(x, Fraction) else x) is not None

    def atoms_in(self, lo, hi) -> list[tuple]:
        """All atoms meeting [lo, hi], periodic tails unrolled as needed."""
        out = [a for a in self.core if a[1] >= lo and a[0] <= hi]
        r = self.right
        if r and r.periodic and hi > r.cut:
            j0 = max(0, math.floor((lo - r.cut) / r.period) - 1)
            j = j0
            while r.cut + j * r.period <= hi:
                out += [(p + j * r.period,) * 2 for p in r.anchors if lo <= p + j * r.period <= hi]
                j += 1
        l = self.left
        if l and l.periodic and lo < l.cut:
            j = max(0, math.floor((l.cut - hi) / l.period) - 1)
            while l.cut - j * l.period >= lo:
                out += [(p - j * l.period,) * 2 for p in l.anchors if lo <= p - j * l.period <= hi]
                j += 1
        return sorted(set(out))

    # set relations -----------------------------------------------------------

    def covering_atom(self, atom: tuple, atoms: list[tuple] | None = None) -> int | None:
        """Window index of the atom containing the whole of ``atom``."""
        if atoms is None:
            atoms = self.window()[0]
        lo, hi = atom
        if lo == -INF:
            return 0 if atoms and atoms[0][0] == -INF and hi <= atoms[0][1] else None
        i = self.locate(lo, atoms)
        if i is None:
            return None
        shift = Fraction(lo) - self.reduce(lo)[0]
        return i if hi - shift <= atoms[i][1] else None

    def issubset(self, other: "LineSet") -> bool:
        for mine, theirs in ((self.right, other.right), (self.left, other.left)):
            if mine is RAY and theirs is not RAY:
                return False
            if mine is not None and mine.periodic and theirs is None:
                return False
        lo, hi = self._check_range(other)
        return all(other.covering_atom(a) is not None for a in self.atoms_in(lo, hi))

    def _check_range(self, other: "LineSet") -> tuple:
        lo_b = [b for b in (self.bounds()[0], other.bounds()[0]) if b != -INF]
        hi_b = [b for b in (self.bounds()[1], other.bounds()[1]) if b != INF]
        core = [v for s in (self, other) for a in s.core for v in a if abs(v) != INF]
        cuts = [t.cut for s in (self, other) for t in (s.left, s.right) if t and t.periodic]
        marks = lo_b + hi_b + core + cuts or [Fraction(0)]
        lo, hi = min(marks), max(marks)
        per_r = [t.period for t in (self.right, other.right) if t and t.periodic]
        per_l = [t.period for t in (self.left, other.left) if t and t.periodic]
        return lo - 3 * (_lcm_all(per_l) or 0), hi + 3 * (_lcm_all(per_r) or 0)

    def __eq__(self, other) -> bool:
        if not isinstance(other, LineSet):
            return NotImplemented
        return self.issubset(other) and other.issubset(self)

    def __hash__(self):
        return hash(self.bounds())

    def union(self, other: "LineSet") -> "LineSet":
        return LineSet.from_pieces(self.to_pieces() + other.to_pieces())

    # serialisation -----------------------------------------------------------

    def to_pieces(self) -> list[Piece]:
        pieces: list[Piece] = []
        if self.left and self.left.periodic:
            pieces += [Lattice(p, self.left.period, None, "left") for p in self.left.anchors]
        pts = []
        for lo, hi in self.core:
            if lo == -INF and hi == INF:
                pieces.append(FullLine())
            elif lo == -INF:
                pieces.append(Ray("left", hi))
            elif hi == INF:
                pieces.append(Ray("right", lo))
            elif lo == hi:
                pts.append(lo)
            else:
                pieces.append(Interval(lo, hi))
        if pts:
            pieces.append(Points(tuple(pts)))
        if self.right and self.right.periodic:
            pieces += [Lattice(p, self.right.period) for p in self.right.anchors]
        return pieces

    def to_json(self) -> list[dict]:
        return [p.to_json() for p in self.to_pieces()]

    def __repr__(self) -> str:
        return f"LineSet({self.to_json()})"


def _lcm_all(steps) -> Fraction | None:
    out = None
    for s in steps:
        out = s if out is None else lcm(out, s)
    return out
