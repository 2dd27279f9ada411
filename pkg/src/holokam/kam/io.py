"""Kernel files: a CSV matrix plus a JSON sidecar ``{delta, labels, dist_file}``."""

from __future__ import annotations

import csv
import json
from fractions import Fraction
from pathlib import Path

from .core import CostKernel, FiniteMetricSpace


def _parse(cell: str, arithmetic: str):
    cell = cell.strip()
    if arithmetic == "float":
        return float(Fraction(cell)) if "/" in cell else float(cell)
    v = Fraction(cell)
    return v.numerator if v.denominator == 1 else v


def read_matrix(path, arithmetic: str = "rational") -> list[list]:
    with open(path, newline="") as fh:
        rows = [r for r in csv.reader(fh) if r and not r[0].startswith("#")]
    try:
        out = [[_parse(c, arithmetic) for c in r] for r in rows]
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"{path}: malformed matrix entry ({exc})") from None
    n = len(out)
    if n == 0 or any(len(r) != n for r in out):
        raise ValueError(f"{path}: matrix must be square and nonempty")
    return out


def write_matrix(rows, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        for r in rows:
            w.writerow([str(v) for v in r])


def load_kernel(matrix_path, sidecar_path=None, arithmetic: str = "rational") -> CostKernel:
    h1 = read_matrix(matrix_path, arithmetic)
    meta = {}
    if sidecar_path is not None:
        meta = json.loads(Path(sidecar_path).read_text())
    delta = _parse(str(meta.get("delta", 1)), arithmetic)
    labels = meta.get("labels")
    space = None
    if meta.get("dist_file"):
        dpath = Path(meta["dist_file"])
        if not dpath.is_absolute():
            dpath = Path(sidecar_path).parent / dpath
        space = FiniteMetricSpace(read_matrix(dpath, arithmetic), labels, arithmetic)
    if labels is not None and len(labels) != len(h1):
        raise ValueError(f"{len(labels)} labels for a {len(h1)}x{len(h1)} kernel")
    return CostKernel(h1, delta, space=space, labels=labels, arithmetic=arithmetic)
