"""Exact functionals and classifiers on one-dimensional models.

On a closed subset of the line, x and y (x < y) are eps-chain joinable iff
every gap of the set between them is shorter than eps. So every quantity
here reduces to scanning gaps: f_c(x) is the smaller of the largest gap on
each side of x (infinite on a bounded side), and components are maximal runs
of atoms separated by gaps below eps.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from ..metric import FiniteMetricSpace, TooFewPoints, validate_metric
from .lineset import RAY, LineSet
from .pieces import INF, Lattice, Piece, fmt_rational, piece_from_json, rational


class PointNotInModel(ValueError):
    pass


class NonpositiveScale(ValueError):
    pass


class SubsetNotContained(ValueError):
    pass


class EmptySample(ValueError):
    pass


def _ext(v):
    """Serialise an extended non-negative value."""
    return "inf" if v == INF else fmt_rational(v)


def _atom_json(a) -> list[str]:
    return [_ext(a[0]) if a[0] != -INF else "-inf", _ext(a[1])]


class Model1D:
    """A finitely presented closed subset of the real line.

    Pieces must be pairwise disjoint and the union must hold at least two
    points.
    """

    def __init__(self, pieces: Sequence[Piece]):
        if not pieces:
            raise ValueError("a model needs at least one piece")
        self.pieces = tuple(pieces)
        self.set = LineSet.from_pieces(self.pieces, disjoint=True)
        if self.set.point_count() < 2:
            raise TooFewPoints(detail="models need at least two points")
        self._scan()

    @classmethod
    def from_json(cls, obj: dict) -> "Model1D":
        return cls([piece_from_json(p) for p in obj["pieces"]])

    def to_json(self) -> dict:
        return {"kind": "model1d", "pieces": [p.to_json() for p in self.pieces]}

    def digest(self) -> str:
        return hashlib.sha256(json.dumps(self.to_json(), sort_keys=True).encode()).hexdigest()

    def __repr__(self) -> str:
        return f"Model1D({[p.to_json() for p in self.pieces]})"

    def _scan(self):
        s = self.set
        atoms, first, last = s.window(3)
        self.atoms = atoms
        self.canonical = range(first, last)
        gaps = [atoms[i + 1][0] - atoms[i][1] for i in range(len(atoms) - 1)]
        self.gaps = gaps
        self.tail_gap = {"left": _tail_gap(s.left), "right": _tail_gap(s.right)}
        n = len(atoms)
        prefix = [Fraction(0)] * n       # max gap left of atom i
        for i in range(1, n):
            prefix[i] = max(prefix[i - 1], gaps[i - 1])
        suffix = [Fraction(0)] * n       # max gap right of atom i
        for i in range(n - 2, -1, -1):
            suffix[i] = max(suffix[i + 1], gaps[i])
        self.reach_left = [_side_reach(s.left, prefix[i], self.tail_gap["left"]) for i in range(n)]
        self.reach_right = [_side_reach(s.right, suffix[i], self.tail_gap["right"]) for i in range(n)]
        self.fc = [min(l, r) for l, r in zip(self.reach_left, self.reach_right)]
        iso = []
        for i, (lo, hi) in enumerate(atoms):
            if lo < hi:
                iso.append(Fraction(0))
            else:
                near = [g for g in (gaps[i - 1] if i > 0 else None, gaps[i] if i < n - 1 else None)
                        if g is not None]
                iso.append(min(near) if near else INF)
        self.iso = iso

    def locate(self, x) -> int:
        x = rational(x)
        i = self.set.locate(x, self.atoms)
        if i is None:
            raise PointNotInModel(f"{fmt_rational(x)} is not a point of the model")
        return i

    def representatives(self) -> list[Fraction]:
        """One point per canonical atom."""
        out = []
        for i in self.canonical:
            lo, hi = self.atoms[i]
            out.append(lo if lo != -INF else (hi if hi != INF else Fraction(0)))
        return out


def _tail_gap(tail):
    if tail is None or not tail.periodic:
        return None
    a = tail.anchors
    gaps = [a[i + 1] - a[i] for i in range(len(a) - 1)] + [a[0] + tail.period - a[-1]]
    return max(gaps)


def _side_reach(tail, inner, tail_gap):
    """Largest gap between a point and infinity on one side (inf if bounded there)."""
    if tail is None:
        return INF
    if tail is RAY:
        return inner
    return max(inner, tail_gap)


# point functionals ----------------------------------------------------------


def model_component(M: Model1D, x, eps) -> LineSet:
    """The exact eps-chainable component of x."""
    eps = rational(eps)
    if not eps > 0:
        raise NonpositiveScale(f"scale must be positive, got {eps}")
    x = rational(x)
    i = M.locate(x)
    _, shift_periods = M.set.reduce(x)
    atoms, gaps = M.atoms, M.gaps
    lo = i
    while lo > 0 and gaps[lo - 1] < eps:
        lo -= 1
    hi = i
    while hi < len(atoms) - 1 and gaps[hi] < eps:
        hi += 1
    s = M.set
    right_open = hi == len(atoms) - 1 and s.right is not None
    left_open = lo == 0 and s.left is not None
    if not (right_open or left_open):
        shift = 0
        if shift_periods > 0:
            shift = shift_periods * s.right.period
        elif shift_periods < 0:
            shift = shift_periods * s.left.period
        return LineSet([(a + shift, b + shift) for a, b in atoms[lo:hi + 1]])
    return _open_region(M, lo, hi, left_open, right_open)


def _open_region(M: Model1D, lo: int, hi: int, left_open: bool, right_open: bool) -> LineSet:
    s, atoms = M.set, M.atoms
    keep = list(atoms[lo:hi + 1])
    pieces: list[Piece] = []
    if right_open and s.right.periodic:
        cut, L = s.right.cut, s.right.period
        if keep[0][0] > cut:
            seeds = [a[0] for a in keep if a[0] < keep[0][0] + L]
        else:
            seeds = list(s.right.anchors)
        pieces += [Lattice(p, L) for p in seeds]
        keep = [a for a in keep if a[0] <= cut]
    if left_open and s.left.periodic:
        cut, L = s.left.cut, s.left.period
        if keep and keep[-1][1] < cut:
            seeds = [a[1] for a in keep if a[1] > keep[-1][1] - L]
        else:
            seeds = list(s.left.anchors)
        pieces += [Lattice(p, L, None, "left") for p in seeds]
        keep = [a for a in keep if a[1] >= cut]
    region = LineSet(keep)
    return LineSet.from_pieces(region.to_pieces() + pieces)


def f_c(M: Model1D, x):
    """Supremum of the scales at which the chainable component of x is compact."""
    return M.fc[M.locate(x)]


def nu(M: Model1D, x):
    """Closed balls of a closed subset of the line are compact, so nu is infinite."""
    M.locate(x)
    return INF


def isolation(M: Model1D, x):
    return M.iso[M.locate(x)]


def _region(M: Model1D, pick) -> LineSet:
    return LineSet([M.atoms[i] for i in M.canonical if pick(i)],
                   RAY if M.set.left is RAY and pick(0) else None,
                   RAY if M.set.right is RAY and pick(len(M.atoms) - 1) else None)


def nslc(M: Model1D) -> LineSet:
    """Points whose chainable components are never compact."""
    return _region(M, lambda i: M.fc[i] == 0)


def limit_points(M: Model1D) -> LineSet:
    return _region(M, lambda i: M.atoms[i][0] < M.atoms[i][1])


# uniformity tables ------------------------------------------------------------


def _dist_to_atoms(x, atoms) -> float:
    best = INF
    for lo, hi in atoms:
        if lo <= x <= hi:
            return Fraction(0)
        best = min(best, lo - x if x < lo else x - hi)
    return best


def _far_reach(atom, kernel) -> object:
    """sup over the atom of d(x, kernel); the atom is disjoint from the kernel."""
    lo, hi = atom
    if not kernel or lo == -INF or hi == INF:
        return INF
    cands = [lo, hi]
    ends = sorted(v for a in kernel for v in a)
    left = [v for v in ends if v < lo]
    right = [v for v in ends if v > hi]
    if left and right:
        mid = (left[-1] + right[0]) / 2
        if lo < mid < hi:
            cands.append(mid)
    return max(_dist_to_atoms(c, kernel) for c in cands)


def uniformity_table(entries: list[tuple], kernel: list[tuple]) -> list[dict]:
    """Infimum of a functional outside S(kernel, delta), for every critical delta.

    ``entries`` are (atom, value, far) with far=True for atoms standing in for
    an unbounded tail. Rows say: for delta <= row delta (and above the
    previous row), inf{value(x) : d(x, kernel) >= delta} equals row inf.
    """
    reach = []
    for atom, value, far in entries:
        reach.append((INF if far else _far_reach(atom, kernel), value))
    rows = []
    for delta in sorted({r for r, _ in reach if r > 0}):
        inf = min(v for r, v in reach if r >= delta)
        rows.append({"delta": delta, "inf": inf})
    return rows


def _rows_json(rows):
    return [{"delta_upto": _ext(r["delta"]), "inf": _ext(r["inf"])} for r in rows]


# classifiers -------------------------------------------------------------------


@dataclass
class ClassifierReport:
    verdicts: dict = field(default_factory=dict)
    witnesses: dict = field(default_factory=dict)

    def __getitem__(self, key):
        return self.verdicts[key]

    def to_json(self) -> dict:
        return {"verdicts": dict(self.verdicts), "witnesses": dict(self.witnesses)}


SubsetReport = ClassifierReport


def _kernel_witness(kernel: LineSet) -> dict:
    return {"region": kernel.to_json(), "compact": kernel.compact}


def classify_space(M: Model1D) -> ClassifierReport:
    s = M.set
    canon = list(M.canonical)
    core_lo = len(s.left.anchors) * 3 if s.left and s.left.periodic else 0
    core_hi = core_lo + len(s.core)
    far = {i: not (core_lo <= i < core_hi) for i in canon}
    fc = M.fc
    inf_fc = min(fc[i] for i in canon)

    K = nslc(M)
    k_atoms = list(K.core)
    fc_rows = uniformity_table([(M.atoms[i], fc[i], far[i]) for i in canon if fc[i] > 0], k_atoms)
    uss = K.compact and all(r["inf"] > 0 for r in fc_rows)

    Xp = limit_points(M)
    iso_rows = uniformity_table([(M.atoms[i], M.iso[i], far[i]) for i in canon if M.iso[i] > 0],
                                list(Xp.core))
    uc = Xp.compact and all(r["inf"] > 0 for r in iso_rows)

    chainable = s.left in (None, RAY) and s.right in (None, RAY) and len(s.core) == 1 \
        and s.core[0][0] < s.core[0][1]
    v = {
        "compact": s.bounded,
        "chainable": chainable,
        "strongly_locally_compact": all(fc[i] > 0 for i in canon),
        "strongly_uniformly_locally_compact": inf_fc > 0,
        "uc": uc,
        "uss": uss,
        "cbq_complete": uss,
        "cofinally_complete": True,
        "complete": True,
    }
    w = {
        "bounds": [_ext(b) if b != -INF else "-inf" for b in s.bounds()],
        "inf_fc": _ext(inf_fc),
        "nslc": _kernel_witness(K),
        "fc_outside_nslc": _rows_json(fc_rows),
        "limit_points": _kernel_witness(Xp),
        "isolation_outside_limit_points": _rows_json(iso_rows),
        "cofinally_complete": "vacuous: nlc is empty because closed subsets of the line are proper",
        "complete": "closed subset of the real line",
    }
    if not uss:
        w["uss"] = ("nslc is not compact" if not K.compact
                    else "f_c has infimum 0 outside an enlargement of nslc")
    if not uc:
        w["uc"] = ("the set of limit points is not compact" if not Xp.compact
                   else "isolation has infimum 0 away from the limit points")
    return ClassifierReport(v, w)


class SubsetSpec:
    """A non-empty closed subset of a model, given by pieces (overlaps allowed)."""

    def __init__(self, pieces: Sequence[Piece]):
        self.pieces = tuple(pieces)
        self.set = LineSet.from_pieces(self.pieces)
        if self.set.empty:
            raise ValueError("subsets must be non-empty")

    @classmethod
    def from_json(cls, obj) -> "SubsetSpec":
        items = obj["subset"] if isinstance(obj, dict) else obj
        return cls([piece_from_json(p) for p in items])

    @classmethod
    def from_set(cls, s: LineSet) -> "SubsetSpec":
        return cls(s.to_pieces())

    def to_json(self) -> dict:
        return {"subset": [p.to_json() for p in self.pieces]}

    def union(self, other: "SubsetSpec") -> "SubsetSpec":
        return SubsetSpec(self.pieces + other.pieces)

    def issubset(self, other: "SubsetSpec") -> bool:
        return self.set.issubset(other.set)

    def __repr__(self) -> str:
        return f"SubsetSpec({[p.to_json() for p in self.pieces]})"


def _check_contained(M: Model1D, A: SubsetSpec) -> None:
    if not A.set.issubset(M.set):
        raise SubsetNotContained(f"{A!r} is not contained in the model")


def _subset_entries(M: Model1D, A: SubsetSpec):
    """(atom of A, index of the covering model atom, far flag) over a range that
    exposes every residue class of A's tails against the model's tails."""
    lo, hi = A.set._check_range(M.set)
    out = []
    for atom in A.set.atoms_in(lo, hi):
        j = M.set.covering_atom(atom, M.atoms)
        out.append((atom, j, False))
    a_right, a_left = A.set.right, A.set.left
    if a_right is not None and a_right.periodic:
        L = a_right.period
        for atom, j, _ in list(out):
            if atom[0] > hi - 2 * L:
                out.append((atom, j, True))
    if a_left is not None and a_left.periodic:
        L = a_left.period
        for atom, j, _ in list(out):
            if atom[1] < lo + 2 * L:
                out.append((atom, j, True))
    return out


def _subset_kernel(M: Model1D, A: SubsetSpec, entries, in_kernel) -> tuple[list, bool]:
    atoms = sorted({atom for atom, j, far in entries if not far and in_kernel(j)})
    unbounded = any(a[0] == -INF or a[1] == INF for a in atoms)
    for side in ("left", "right"):
        if getattr(A.set, side) is not None and getattr(A.set, side).periodic \
                and getattr(M.set, side) is RAY:
            unbounded = True
    return atoms, not unbounded


def classify_subset(M: Model1D, A: SubsetSpec) -> ClassifierReport:
    _check_contained(M, A)
    entries = _subset_entries(M, A)

    def zero_fc(j):
        return M.fc[j] == 0

    def limit(j):
        return M.atoms[j][0] < M.atoms[j][1]

    K, k_compact = _subset_kernel(M, A, entries, zero_fc)
    fc_rows = uniformity_table([(a, M.fc[j], far) for a, j, far in entries if M.fc[j] > 0], K)
    uss = k_compact and all(r["inf"] > 0 for r in fc_rows)

    Kp, kp_compact = _subset_kernel(M, A, entries, limit)
    iso_rows = uniformity_table([(a, M.iso[j], far) for a, j, far in entries if not limit(j)], Kp)
    uc = kp_compact and all(r["inf"] > 0 for r in iso_rows)

    a, m = A.set, M.set
    spread = [side for side in ("left", "right")
              if getattr(a, side) is not None and getattr(m, side) is not None
              and getattr(m, side).periodic]
    v = {
        "uss_subset": uss,
        "uc_subset": uc,
        "cc_subset": True,
        "qc_precompact": not spread,
        "bourbaki_bounded": a.bounded,
    }
    w = {
        "closure_nslc": {"atoms": [_atom_json(x) for x in K], "compact": k_compact},
        "fc_outside": _rows_json(fc_rows),
        "closure_limit_points": {"atoms": [_atom_json(x) for x in Kp], "compact": kp_compact},
        "isolation_outside": _rows_json(iso_rows),
        "cc_subset": {"vacuous": True, "reason": "nlc is empty because closed subsets of the line are proper"},
        "qc_precompact": {"infinitely_many_components_toward": spread},
        "bourbaki_bounded": {"bounds": [_ext(b) if b != -INF else "-inf" for b in a.bounds()]},
    }
    return ClassifierReport(v, w)


def model_functionals(M: Model1D, A: SubsetSpec) -> dict:
    """gamma*, eta*, eta and alpha with unrestricted numbers of centers and steps."""
    _check_contained(M, A)
    a, m = A.set, M.set
    alpha = Fraction(0) if a.bounded else INF
    eta_star = Fraction(0)
    for side in ("left", "right"):
        if getattr(a, side) is not None and getattr(m, side) is not None and getattr(m, side).periodic:
            eta_star = max(eta_star, M.tail_gap[side])
    a_lo, a_hi = a.bounds()
    r_lo, r_hi = a._check_range(m)
    run = m.atoms_in(a_lo if a_lo != -INF else r_lo, a_hi if a_hi != INF else r_hi)
    inside = [run[i + 1][0] - run[i][1] for i in range(len(run) - 1)]
    if a_hi == INF and M.tail_gap["right"] is not None:
        inside.append(M.tail_gap["right"])
    if a_lo == -INF and M.tail_gap["left"] is not None:
        inside.append(M.tail_gap["left"])
    gamma_star = max(inside, default=Fraction(0))
    return {"gamma_star": gamma_star, "eta_star": eta_star, "eta": alpha, "alpha": alpha}


# sampling --------------------------------------------------------------------------


def sample(M: Model1D, window, resolution) -> FiniteMetricSpace:
    """Finite space of model points in a closed window; intervals are gridded."""
    lo, hi = (rational(w) for w in window)
    r = rational(resolution)
    if not r > 0:
        raise ValueError("resolution must be positive")
    if lo > hi:
        raise ValueError("window must satisfy lo <= hi")
    pts: list[Fraction] = []
    for a, b in M.set.atoms_in(lo, hi):
        a, b = max(a, lo), min(b, hi)
        if a == b:
            pts.append(Fraction(a))
            continue
        x = Fraction(a)
        while x < b:
            pts.append(x)
            x += r
        pts.append(Fraction(b))
    pts = sorted(set(pts))
    if not pts:
        raise EmptySample(f"window [{fmt_rational(lo)}, {fmt_rational(hi)}] misses the model")
    arr = np.array(pts, dtype=object)
    d = np.abs(arr[:, None] - arr[None, :]).astype(float)
    labels = [fmt_rational(p) for p in pts]
    meta = {"model": M.digest(), "window": [fmt_rational(lo), fmt_rational(hi)],
            "resolution": fmt_rational(r), "coords": labels}
    return validate_metric(labels, d, meta=meta)


def sample_coords(X: FiniteMetricSpace) -> list[Fraction]:
    return [Fraction(c) for c in X.meta["coords"]]
