"""Command line front end: ``holokam {validate,minimize,kam,cylinder,slice-kam}``.

Exit codes: 0 pass, 2 validation failure, 3 infeasible or unbounded, 4 parse error.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import os
import sys
import tempfile
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__
from .complex import (ComplexError, DegreeError, chain_from_json, chain_to_json, check_invariants,
                      complex_from_json)
from .holonomy import (NotABoundary, Unbounded, action, lagrangian_from_json, minimize_action,
                       verify_certificate)
from .kam import hypothesis_report, load_kernel, solve_weak_kam
from .slices import (build_slice_kernel, cylinder_convergence, exactdescent_check, slices_from_json)

EXIT_OK, EXIT_INVALID, EXIT_INFEASIBLE, EXIT_PARSE = 0, 2, 3, 4


class ParseError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_PARSE, f"{self.prog}: error: {message}\n")


def _jsonable(obj):
    if isinstance(obj, Fraction):
        return obj.numerator if obj.denominator == 1 else f"{obj.numerator}/{obj.denominator}"
    if isinstance(obj, dict):
        return {str(k) if not isinstance(k, tuple) else ",".join(map(str, k)): _jsonable(v)
                for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def dumps(report) -> str:
    return json.dumps(_jsonable(report), sort_keys=True, indent=2) + "\n"


def write_atomic(path, text: str) -> None:
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _file_digest(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _run_config(args, inputs: dict) -> dict:
    cfg = {
        "command": args.command,
        "arithmetic": args.arithmetic,
        "tol": args.tol,
        "seed": args.seed,
        "inputs": {k: _file_digest(v) if v and Path(v).is_file() else v for k, v in inputs.items()},
    }
    extra = {k: v for k, v in vars(args).items()
             if k not in ("command", "arithmetic", "tol", "seed", "out", "func") and k not in inputs}
    cfg["params"] = extra
    return cfg


def _envelope(args, inputs: dict, body: dict, status: str) -> dict:
    cfg = _run_config(args, inputs)
    digest = hashlib.sha256(json.dumps(_jsonable(cfg), sort_keys=True).encode()).hexdigest()
    return {
        "command": args.command,
        "config": cfg,
        "config_hash": digest,
        "seed": args.seed,
        "arithmetic": args.arithmetic,
        "version": __version__,
        "status": status,
        **body,
    }


def _emit(args, report: dict) -> None:
    text = dumps(report)
    if args.out:
        write_atomic(args.out, text)
    else:
        sys.stdout.write(text)


def _read_json(path):
    try:
        return json.loads(Path(path).read_text())
    except FileNotFoundError:
        raise ParseError(f"{path}: no such file") from None
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise ParseError(f"{path}: invalid JSON ({exc})") from None


def _load_complex(path):
    data = _read_json(path)
    try:
        return complex_from_json(data)
    except (ComplexError, DegreeError):
        raise
    except (KeyError, TypeError, ValueError, AttributeError, IndexError) as exc:
        raise ParseError(f"{path}: malformed complex ({type(exc).__name__}: {exc})") from None


def _load_lagrangian(cx, source):
    if Path(source).is_file():
        data = _read_json(source)
    else:
        data = source
    try:
        return lagrangian_from_json(cx, data)
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"bad Lagrangian {source!r}: {exc}") from None


def _tol(args):
    return None if args.arithmetic == "rational" else args.tol


def cmd_validate(args) -> int:
    try:
        cx = _load_complex(args.complex)
    except (ComplexError, DegreeError) as exc:
        _emit(args, _envelope(args, {"complex": args.complex}, {"passed": False, "problems": [str(exc)]}, "fail"))
        return EXIT_INVALID
    problems = check_invariants(cx)
    body = {
        "passed": not problems,
        "problems": problems,
        "dimension": cx.dimension,
        "cells": [cx.num_cells(k) for k in range(cx.dimension + 1)],
    }
    _emit(args, _envelope(args, {"complex": args.complex}, body, "pass" if not problems else "fail"))
    return EXIT_OK if not problems else EXIT_INVALID


def cmd_minimize(args) -> int:
    inputs = {"complex": args.complex, "lagrangian": args.lagrangian, "boundary": args.boundary}
    try:
        cx = _load_complex(args.complex)
    except (ComplexError, DegreeError) as exc:
        _emit(args, _envelope(args, inputs, {"problems": [str(exc)]}, "fail"))
        return EXIT_INVALID
    L = _load_lagrangian(cx, args.lagrangian)
    try:
        c = chain_from_json(cx, _read_json(args.boundary))
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"{args.boundary}: bad chain ({exc})") from None
    try:
        mu, cert = minimize_action(L, c, args.arithmetic, _tol(args), normalize=not args.no_normalize)
    except NotABoundary as exc:
        body = {"error": str(exc), "separating_cochain": list(exc.ray.values) if exc.ray else None}
        _emit(args, _envelope(args, inputs, body, "not_a_boundary"))
        return EXIT_INFEASIBLE
    except Unbounded as exc:
        ray = exc.ray
        body = {"error": str(exc)}
        if ray is not None:
            body["negative_cycle"] = {"plus": ray.plus, "minus": ray.minus,
                                      "chain": chain_to_json(cx, ray.chain()), "action": action(L, ray)}
        _emit(args, _envelope(args, inputs, body, "unbounded"))
        return EXIT_INFEASIBLE
    rep = verify_certificate(L, mu, cert, c, tol=0 if args.arithmetic == "rational" else args.tol)
    body = {
        "value": action(L, mu),
        "mass": mu.mass(),
        "c0": cert.c0,
        "normalized": cert.normalized,
        "omega": list(cert.omega.values),
        "measure": {"plus": mu.plus, "minus": mu.minus},
        "residuals": rep.as_dict(),
    }
    _emit(args, _envelope(args, inputs, body, "pass" if rep.passed else "fail"))
    return EXIT_OK if rep.passed else EXIT_INVALID


def cmd_kam(args) -> int:
    inputs = {"kernel": args.kernel, "meta": args.meta}
    try:
        k = load_kernel(args.kernel, args.meta, args.arithmetic)
    except FileNotFoundError as exc:
        raise ParseError(str(exc)) from None
    except (ValueError, KeyError, json.JSONDecodeError) as exc:
        raise ParseError(str(exc)) from None
    sol = solve_weak_kam(k)
    body = {"u": sol.u, "c0": sol.c0, "residual": sol.residual, "eigenvalue": sol.eigenvalue,
            "critical": sol.critical, "labels": k.labels}
    if k.space is not None:
        hr = hypothesis_report(k, tuple(args.K0), args.K_max, sol)
        body["hypotheses"] = vars(hr)
    ok = sol.residual <= k.tol
    _emit(args, _envelope(args, inputs, body, "pass" if ok else "fail"))
    return EXIT_OK if ok else EXIT_INVALID


def cmd_cylinder(args) -> int:
    try:
        levels = [(args.atoms * 2 ** i, args.time_steps * 2 ** i) for i in range(args.levels)]
        rows = cylinder_convergence(args.radius, args.T, levels, frames=args.frames)
    except ValueError as exc:
        _emit(args, _envelope(args, {}, {"error": str(exc)}, "fail"))
        return EXIT_INVALID
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=["N", "K", "identity_error", "c3_residual"], lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: (repr(v) if isinstance(v, float) else v) for k, v in r.items()})
    monotone = all(b["identity_error"] <= a["identity_error"] and b["c3_residual"] <= a["c3_residual"]
                   for a, b in zip(rows, rows[1:]))
    if args.out:
        write_atomic(args.out, buf.getvalue())
    else:
        sys.stdout.write(buf.getvalue())
    if args.report:
        write_atomic(args.report, dumps(_envelope(args, {}, {"rows": rows, "monotone": monotone},
                                                  "pass" if monotone else "fail")))
    return EXIT_OK if monotone else EXIT_INVALID


def cmd_slice_kam(args) -> int:
    inputs = {"complex": args.complex, "lagrangian": args.lagrangian, "slices": args.slices}
    try:
        cx = _load_complex(args.complex)
    except (ComplexError, DegreeError) as exc:
        _emit(args, _envelope(args, inputs, {"problems": [str(exc)]}, "fail"))
        return EXIT_INVALID
    L = _load_lagrangian(cx, args.lagrangian)
    try:
        S = slices_from_json(cx, _read_json(args.slices))
        delta = Fraction(args.delta) if args.arithmetic == "rational" else float(Fraction(args.delta))
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"bad slice set or delta: {exc}") from None
    try:
        sk = build_slice_kernel(cx, S, L, delta, args.arithmetic, _tol(args), args.mass_mode)
    except ValueError as exc:
        _emit(args, _envelope(args, inputs, {"error": str(exc)}, "infeasible"))
        return EXIT_INFEASIBLE
    anchors = [args.anchor] if args.anchor is not None else None
    sol = solve_weak_kam(sk.kernel, anchors=anchors)
    body = {
        "kernel": sk.kernel.to_rows(),
        "infeasible": [list(p) for p in sk.infeasible],
        "sentinel": sk.sentinel,
        "u": sol.u,
        "c0": sol.c0,
        "residual": sol.residual,
        "critical": sol.critical,
    }
    base = args.anchor if args.anchor is not None else 0
    c = S[0] * 0
    for z in S:
        c = c + z - S[base]
    try:
        _, cert = minimize_action(L, c, args.arithmetic, _tol(args), normalize=False)
        body["exactdescent"] = exactdescent_check(sol.u, S, cert.omega, sol.c0,
                                                  tol=0 if args.arithmetic == "rational" else args.tol).as_dict()
    except (NotABoundary, Unbounded) as exc:
        body["exactdescent"] = {"skipped": str(exc)}
    ok = sol.residual <= sk.kernel.tol
    _emit(args, _envelope(args, inputs, body, "pass" if ok else "fail"))
    return EXIT_OK if ok else EXIT_INVALID


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--arithmetic", choices=("rational", "float"), default="rational")
    common.add_argument("--tol", type=float, default=1e-9)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", help="write the report here (atomically) instead of stdout")

    p = _Parser(prog="holokam", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("validate", parents=[common], help="check a complex file")
    s.add_argument("complex")
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser("minimize", parents=[common], help="minimize the action with a prescribed boundary")
    s.add_argument("complex")
    s.add_argument("--lagrangian", default="area", help="builtin name or JSON file")
    s.add_argument("--boundary", required=True, help="chain JSON")
    s.add_argument("--no-normalize", action="store_true")
    s.set_defaults(func=cmd_minimize)

    s = sub.add_parser("kam", parents=[common], help="weak KAM solution of a cost kernel")
    s.add_argument("kernel", help="CSV matrix, row = source")
    s.add_argument("--meta", help="sidecar JSON {delta, labels, dist_file}")
    s.add_argument("--K0", type=Fraction, nargs="+", default=[Fraction(1)])
    s.add_argument("--K-max", dest="K_max", type=int, default=None)
    s.set_defaults(func=cmd_kam)

    s = sub.add_parser("cylinder", parents=[common], help="cylinder fixture convergence study")
    s.add_argument("--radius", type=float, default=1.0)
    s.add_argument("--T", type=float, default=1.0)
    s.add_argument("--time-steps", dest="time_steps", type=int, default=8)
    s.add_argument("--atoms", type=int, default=32)
    s.add_argument("--levels", type=int, default=4)
    s.add_argument("--frames", choices=("polygon", "exact"), default="polygon")
    s.add_argument("--report", help="also write a JSON report here")
    s.set_defaults(func=cmd_cylinder)

    s = sub.add_parser("slice-kam", parents=[common], help="kernel over a finite slice set and its weak KAM solution")
    s.add_argument("complex")
    s.add_argument("--lagrangian", default="area")
    s.add_argument("--slices", required=True, help="JSON list of sparse chains")
    s.add_argument("--delta", default="1")
    s.add_argument("--mass-mode", dest="mass_mode", choices=("eq", "le"), default="eq")
    s.add_argument("--anchor", type=int, default=None, help="slice index where u is normalized")
    s.set_defaults(func=cmd_slice_kam)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"holokam: parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
