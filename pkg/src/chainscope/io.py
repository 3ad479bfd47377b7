"""Reading space, model and subset files; canonical JSON output."""

from __future__ import annotations

import hashlib
import json
import math
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__
from .metric import FiniteMetricSpace, PointSubset, from_coords, validate_metric
from .model.lineset import LineSet
from .model.space import Model1D, SubsetSpec


class ParseError(ValueError):
    """Malformed input file; ``where`` names the file and field."""

    def __init__(self, message: str, where: str = ""):
        self.where = where
        super().__init__(f"{where}: {message}" if where else message)


def read_json(path) -> tuple[object, str]:
    """Parsed JSON and the SHA-256 of the raw bytes."""
    p = Path(path)
    try:
        raw = p.read_bytes()
    except OSError as exc:
        raise ParseError(exc.strerror or str(exc), str(p)) from None
    try:
        obj = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}", str(p)) from None
    return obj, hashlib.sha256(raw).hexdigest()


def _field(obj, key, where):
    if not isinstance(obj, dict):
        raise ParseError("expected a JSON object", where)
    if key not in obj:
        raise ParseError(f"missing field {key!r}", where)
    return obj[key]


def space_from_json(obj, where: str = "") -> FiniteMetricSpace | Model1D:
    """Build a finite space or a 1-D model. Metric-axiom and piece errors propagate."""
    kind = _field(obj, "kind", where)
    if kind == "matrix":
        dist = _field(obj, "dist", where)
        labels = obj.get("labels")
        try:
            mat = np.array(dist, dtype=float)
        except (TypeError, ValueError):
            raise ParseError("field 'dist' must be a matrix of numbers", where) from None
        return validate_metric(labels, mat)
    if kind == "coords":
        coords = _field(obj, "coords", where)
        try:
            pts = np.array(coords, dtype=float)
        except (TypeError, ValueError):
            raise ParseError("field 'coords' must be a list of numeric points", where) from None
        if pts.ndim not in (1, 2) or len(pts) == 0:
            raise ParseError("field 'coords' must be a non-empty list of points", where)
        return from_coords(pts, obj.get("metric", "euclidean"), obj.get("labels"))
    if kind == "model1d":
        pieces = _field(obj, "pieces", where)
        if not isinstance(pieces, list):
            raise ParseError("field 'pieces' must be a list", where)
        return Model1D.from_json(obj)
    raise ParseError(f"unknown kind {kind!r}; expected matrix, coords or model1d", where)


def finite_subset_from_json(X: FiniteMetricSpace, obj, where: str = "") -> PointSubset:
    members = _field(obj, "members", where)
    if not isinstance(members, list) or not members:
        raise ParseError("field 'members' must be a non-empty list", where)
    try:
        return X.subset(members)
    except (KeyError, IndexError) as exc:
        raise ParseError(str(exc.args[0]), where) from None


def model_subset_from_json(obj, where: str = "") -> SubsetSpec:
    items = _field(obj, "subset", where)
    if not isinstance(items, list) or not items:
        raise ParseError("field 'subset' must be a non-empty list of pieces", where)
    return SubsetSpec.from_json(obj)


# output ------------------------------------------------------------------------


def jsonable(value):
    """Convert results to plain JSON: rationals as "p/q", infinities as "inf"."""
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, Fraction):
        return str(value.numerator) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        v = float(value)
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return v
    if isinstance(value, LineSet):
        return value.to_json()
    if isinstance(value, np.ndarray):
        return jsonable(value.tolist())
    return value


def dumps(obj) -> str:
    return json.dumps(jsonable(obj), sort_keys=True, indent=2) + "\n"


def envelope(command: str, inputs: dict, body: dict) -> dict:
    """Wrap a command result with the tool version and input digests."""
    return {"tool": "chainscope", "version": __version__, "command": command,
            "inputs": inputs, **body}
