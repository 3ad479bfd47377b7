"""Command-line entry point: ``chainscope <command> ...``.

Exit codes: 0 success, 1 a negative domain verdict (invalid input for
``validate``, failing property suite for ``propcheck``), 2 unusable input.
"""

from __future__ import annotations

import argparse
import math
import sys
from fractions import Fraction

from . import __version__
from .chains import merge_tree
from .functionals import (BudgetInvalid, ExactTooLarge, alpha_k, eta_km, eta_star_k,
                          gamma_m, gamma_star, isolation)
from .io import (ParseError, dumps, envelope, finite_subset_from_json, model_subset_from_json,
                read_json, space_from_json)
from .lab.suites import SUITES, UnknownSuite, run_suite
from .metric import (FiniteMetricSpace, MetricAxiomError, SizeOverflow, box_product, excess,
                     hausdorff, set_gap)
from .model.lineset import PiecesOverlap
from .model.pieces import rational
from .model.space import (EmptySample, Model1D, SubsetNotContained, classify_space, classify_subset,
                          f_c, isolation as model_isolation, limit_points, model_functionals, nslc,
                          nu, sample)


class InputError(Exception):
    pass


def _load_space(path):
    obj, digest = read_json(path)
    return space_from_json(obj, str(path)), digest


def _need_finite(X, path):
    if not isinstance(X, FiniteMetricSpace):
        raise InputError(f"{path}: this command needs a finite space (kind matrix or coords)")
    return X


def _need_model(M, path):
    if not isinstance(M, Model1D):
        raise InputError(f"{path}: this command needs a model1d file")
    return M


def _budget(text: str):
    if text.strip().lower() in ("inf", "infinity"):
        return math.inf
    try:
        return int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"budget must be a positive integer or 'inf', got {text!r}") from None


def _space_json(X: FiniteMetricSpace) -> dict:
    out = {"kind": "matrix", "labels": list(X.labels), "dist": X.dist.tolist()}
    if X.meta:
        out["meta"] = X.meta
    return out


def _emit(obj) -> None:
    sys.stdout.write(dumps(obj))


# commands ---------------------------------------------------------------------------


def cmd_validate(args) -> int:
    obj, digest = read_json(args.path)
    inputs = {"space": digest}
    try:
        X = space_from_json(obj, str(args.path))
    except MetricAxiomError as exc:
        _emit(envelope("validate", inputs, {"valid": False, "violation": type(exc).__name__,
                                            "witness": list(exc.witness), "message": str(exc)}))
        return 1
    except PiecesOverlap as exc:
        _emit(envelope("validate", inputs, {"valid": False, "violation": "PiecesOverlap",
                                            "witness": list(exc.pieces), "message": str(exc)}))
        return 1
    if isinstance(X, Model1D):
        body = {"valid": True, "kind": "model1d", "digest": X.digest(), "pieces": len(X.pieces)}
    else:
        body = {"valid": True, "kind": obj["kind"], "digest": X.digest(), "points": X.n}
    _emit(envelope("validate", inputs, body))
    return 0


def _finite_functionals(X, A, k, m, mode) -> dict:
    results = [
        alpha_k(A, k, mode),
        gamma_m(A, m),
        gamma_star(A),
        eta_star_k(A, k),
        eta_km(A, k, m, mode),
    ]
    out = {r.functional: r.value for r in results}
    out["results"] = {r.functional: r.as_dict(X) for r in results}
    return out


def cmd_analyze(args) -> int:
    X, digest = _load_space(args.path)
    inputs = {"space": digest}
    sub = None
    if args.subset:
        sub, inputs["subset"] = read_json(args.subset)
    if isinstance(X, Model1D):
        rep = classify_space(X)
        table = [{"x": x, "f_c": f_c(X, x), "isolation": model_isolation(X, x), "nu": nu(X, x)}
                 for x in X.representatives()]
        body = {"kind": "model1d", "digest": X.digest(), "fc_table": table,
                "nslc": nslc(X), "limit_points": limit_points(X), "report": rep.to_json(),
                **rep.verdicts}
        if sub is not None:
            A = model_subset_from_json(sub, str(args.subset))
            body["subset"] = {"report": classify_subset(X, A).to_json(),
                              "functionals": model_functionals(X, A)}
    else:
        tree = merge_tree(X)
        body = {
            "kind": "finite", "digest": X.digest(), "points": X.n, "diameter": X.diameter(),
            "isolation": [{"point": X.labels[i], "isolation": isolation(X, i)} for i in range(X.n)],
            "merge_scales": [float(e.scale) for e in tree.events],
            "merge_events": [{"scale": float(e.scale),
                              "representatives": [X.labels[r] for r in e.representatives]}
                             for e in tree.events],
        }
        if sub is not None:
            A = finite_subset_from_json(X, sub, str(args.subset))
            body["functionals"] = _finite_functionals(X, A, args.k, args.m, args.mode)
    _emit(envelope("analyze", inputs, body))
    return 0


def cmd_functionals(args) -> int:
    X, d1 = _load_space(args.space)
    sub, d2 = read_json(args.subset)
    inputs = {"space": d1, "subset": d2}
    if isinstance(X, Model1D):
        A = model_subset_from_json(sub, str(args.subset))
        _emit(envelope("functionals", inputs, model_functionals(X, A)))
        return 0
    A = finite_subset_from_json(X, sub, str(args.subset))
    body = {"k": args.k, "m": args.m, "mode": args.mode,
            **_finite_functionals(X, A, args.k, args.m, args.mode)}
    _emit(envelope("functionals", inputs, body))
    return 0


def cmd_classify(args) -> int:
    M, digest = _load_space(args.model)
    M = _need_model(M, args.model)
    inputs = {"model": digest}
    space = classify_space(M).to_json()
    body = {"space": space, **space}
    if args.subset:
        sub, inputs["subset"] = read_json(args.subset)
        A = model_subset_from_json(sub, str(args.subset))
        rep = classify_subset(M, A).to_json()
        body.update({"subset": rep, **rep})
    _emit(envelope("classify", inputs, body))
    return 0


def cmd_scales(args) -> int:
    X, digest = _load_space(args.space)
    X = _need_finite(X, args.space)
    tree = merge_tree(X)
    if args.format == "dot":
        sys.stdout.write(f"// chainscope {__version__} input sha256 {digest}\n")
        sys.stdout.write(tree.to_dot())
    else:
        sys.stdout.write(f"# chainscope {__version__} input sha256 {digest}\n")
        sys.stdout.write(tree.to_csv())
    return 0


def cmd_hausdorff(args) -> int:
    X, d0 = _load_space(args.space)
    X = _need_finite(X, args.space)
    (a, d1), (b, d2) = read_json(args.a), read_json(args.b)
    A = finite_subset_from_json(X, a, str(args.a))
    B = finite_subset_from_json(X, b, str(args.b))
    body = {"hausdorff": hausdorff(A, B), "excess_ab": excess(A, B), "excess_ba": excess(B, A),
            "gap": set_gap(A, B)}
    _emit(envelope("hausdorff", {"space": d0, "a": d1, "b": d2}, body))
    return 0


def cmd_product(args) -> int:
    X, d1 = _load_space(args.a)
    Y, d2 = _load_space(args.b)
    P = box_product(_need_finite(X, args.a), _need_finite(Y, args.b), max_size=args.max_size)
    _emit(envelope("product", {"a": d1, "b": d2}, _space_json(P)))
    return 0


def cmd_sample(args) -> int:
    M, digest = _load_space(args.model)
    M = _need_model(M, args.model)
    X = sample(M, (args.window[0], args.window[1]), args.resolution)
    _emit(envelope("sample", {"model": digest}, _space_json(X)))
    return 0


def cmd_propcheck(args) -> int:
    report = run_suite(args.suite, args.seed, args.trials, args.start)
    _emit(report.to_json(timing=args.timing))
    if args.timing:
        print(f"{args.suite}: {report.elapsed:.3f}s", file=sys.stderr)
    return 0 if report.passed else 1


# parser ----------------------------------------------------------------------------------


def _nonneg(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be a non-negative integer")
    return v


def _rat(text: str) -> Fraction:
    try:
        return rational(text)
    except (TypeError, ValueError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="chainscope", description="Chain geometry of metric spaces.")
    p.add_argument("--version", action="version", version=f"chainscope {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("validate", help="check a space or model file")
    s.add_argument("path")
    s.set_defaults(func=cmd_validate)

    budgets = argparse.ArgumentParser(add_help=False)
    budgets.add_argument("--k", type=_budget, default=1, help="number of centers (integer or inf)")
    budgets.add_argument("--m", type=_budget, default=1, help="chain steps per center (integer or inf)")
    budgets.add_argument("--mode", choices=["exact", "greedy"], default="exact")

    s = sub.add_parser("analyze", parents=[budgets], help="full report for a space or model")
    s.add_argument("path")
    s.add_argument("--subset", help="optional subset file")
    s.set_defaults(func=cmd_analyze)

    s = sub.add_parser("functionals", parents=[budgets], help="covering functionals of a subset")
    s.add_argument("space")
    s.add_argument("subset")
    s.set_defaults(func=cmd_functionals)

    s = sub.add_parser("classify", help="classifier verdicts for a model and optional subset")
    s.add_argument("model")
    s.add_argument("--subset")
    s.set_defaults(func=cmd_classify)

    s = sub.add_parser("scales", help="merge events as CSV or DOT")
    s.add_argument("space")
    s.add_argument("--format", choices=["csv", "dot"], default="csv")
    s.set_defaults(func=cmd_scales)

    s = sub.add_parser("hausdorff", help="Hausdorff distance between two subsets")
    s.add_argument("space")
    s.add_argument("a")
    s.add_argument("b")
    s.set_defaults(func=cmd_hausdorff)

    s = sub.add_parser("product", help="box product of two finite spaces")
    s.add_argument("a")
    s.add_argument("b")
    s.add_argument("--max-size", type=int, default=None)
    s.set_defaults(func=cmd_product)

    s = sub.add_parser("sample", help="finite sample of a model")
    s.add_argument("model")
    s.add_argument("--window", nargs=2, type=_rat, required=True, metavar=("LO", "HI"))
    s.add_argument("--resolution", type=_rat, required=True)
    s.set_defaults(func=cmd_sample)

    s = sub.add_parser("propcheck", help="run a property suite")
    s.add_argument("--suite", required=True, help="one of: " + ", ".join(SUITES))
    s.add_argument("--seed", type=_nonneg, default=0)
    s.add_argument("--trials", type=_nonneg, default=100)
    s.add_argument("--start", type=_nonneg, default=0, help="index of the first trial")
    s.add_argument("--timing", action="store_true", help="report elapsed time")
    s.set_defaults(func=cmd_propcheck)
    return p


INPUT_ERRORS = (InputError, ParseError, MetricAxiomError, PiecesOverlap, SubsetNotContained,
                EmptySample, SizeOverflow, BudgetInvalid, ExactTooLarge, ValueError, TypeError,
                KeyError, IndexError)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UnknownSuite as exc:
        print(f"chainscope: unknown suite {exc.args[0]!r}; choose from {', '.join(SUITES)}", file=sys.stderr)
        return 2
    except ExactTooLarge as exc:
        print(f"chainscope: {exc}; rerun with --mode greedy", file=sys.stderr)
        return 2
    except INPUT_ERRORS as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"chainscope: {type(exc).__name__}: {msg}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
