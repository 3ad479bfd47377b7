"""Exact backend for finitely presented closed subsets of the real line."""

from .lineset import LineSet, PiecesOverlap, Tail
from .pieces import FullLine, Interval, Lattice, Points, Ray, fmt_rational, piece_from_json, rational
from .space import (ClassifierReport, EmptySample, Model1D, NonpositiveScale, PointNotInModel,
                    SubsetNotContained, SubsetReport, SubsetSpec, classify_space, classify_subset,
                    f_c, isolation, limit_points, model_component, model_functionals, nslc, nu,
                    sample, sample_coords)

__all__ = [
    "LineSet", "PiecesOverlap", "Tail", "FullLine", "Interval", "Lattice", "Points", "Ray",
    "fmt_rational", "piece_from_json", "rational", "ClassifierReport", "EmptySample", "Model1D",
    "NonpositiveScale", "PointNotInModel", "SubsetNotContained", "SubsetReport", "SubsetSpec",
    "classify_space", "classify_subset", "f_c", "isolation", "limit_points", "model_component",
    "model_functionals", "nslc", "nu", "sample", "sample_coords",
]
