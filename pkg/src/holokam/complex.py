"""Simplicial complexes with exact chain and cochain algebra.

Cells are stored as strictly increasing vertex tuples; the reference
orientation is increasing vertex order and a reversed cell is the
coefficient -1 on the reference cell.  Coefficients are exact
(``int`` or ``fractions.Fraction``) unless the caller supplies floats.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Mapping, Sequence


class ComplexError(ValueError):
    """Structural problem: unknown cell, missing face, duplicate cell."""


class DegreeError(ValueError):
    """Degree mismatch or degree out of range."""


def _permutation_sign(seq: Sequence[int]) -> int:
    sign = 1
    seq = list(seq)
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                sign = -sign
    return sign


def as_exact(value):
    """Convert ints, Fractions and rational strings to exact numbers."""
    if isinstance(value, (int, Fraction)) and not isinstance(value, bool):
        return value
    if isinstance(value, str):
        v = Fraction(value)
        return v.numerator if v.denominator == 1 else v
    if isinstance(value, float):
        return value
    raise TypeError(f"not a number: {value!r}")


class SimplicialComplex:
    """A finite abstract simplicial complex, optionally embedded.

    Parameters
    ----------
    cells
        ``cells[k]`` is a sequence of (k+1)-vertex tuples.  Tuples are sorted
        on input; unsorted input is accepted only through :meth:`chain`.
    coords
        Optional mapping vertex id -> coordinate tuple.
    period
        Optional per-coordinate period for flat tori; edge vectors then use
        the minimum-image convention.
    """

    def __init__(self, cells: Sequence[Iterable[Sequence[int]]],
                 coords: Mapping[int, Sequence] | None = None,
                 period: Sequence | None = None):
        self.dimension = len(cells) - 1
        if self.dimension < 0:
            raise ComplexError("complex needs at least the vertex level")
        self._cells: list[tuple[tuple[int, ...], ...]] = []
        self._index: list[dict[tuple[int, ...], int]] = []
        for k, level in enumerate(cells):
            stored = []
            index = {}
            for raw in level:
                cell = tuple(raw)
                if len(cell) != k + 1:
                    raise ComplexError(f"cell {list(cell)} has wrong size for degree {k}")
                if len(set(cell)) != len(cell):
                    raise ComplexError(f"cell {list(cell)} repeats a vertex")
                cell = tuple(sorted(cell))
                if cell in index:
                    raise ComplexError(f"duplicate cell {list(cell)}")
                index[cell] = len(stored)
                stored.append(cell)
            self._cells.append(tuple(stored))
            self._index.append(index)

        # faces[k][i] = ((face index, sign), ...) for k >= 1
        self._faces: list[tuple] = [()]
        for k in range(1, self.dimension + 1):
            lower = self._index[k - 1]
            faces = []
            for cell in self._cells[k]:
                row = []
                for i in range(k + 1):
                    face = cell[:i] + cell[i + 1:]
                    if face not in lower:
                        raise ComplexError(
                            f"face {list(face)} of cell {list(cell)} is not in the complex")
                    row.append((lower[face], -1 if i % 2 else 1))
                faces.append(tuple(row))
            self._faces.append(tuple(faces))

        # cofaces[k][j] = ((coface index, sign), ...) for k < dimension
        self._cofaces: list[tuple] = []
        for k in range(self.dimension):
            co = [[] for _ in self._cells[k]]
            for i, row in enumerate(self._faces[k + 1]):
                for j, s in row:
                    co[j].append((i, s))
            self._cofaces.append(tuple(tuple(c) for c in co))

        self.coords = None if coords is None else {int(v): tuple(c) for v, c in coords.items()}
        self.period = None if period is None else tuple(period)
        if self.coords is not None:
            missing = [v for (v,) in self._cells[0] if v not in self.coords]
            if missing:
                raise ComplexError(f"vertex {missing[0]} has no coordinates")

    # -- combinatorics -------------------------------------------------

    def cells(self, k: int) -> tuple[tuple[int, ...], ...]:
        self._check_degree(k)
        return self._cells[k]

    def num_cells(self, k: int) -> int:
        self._check_degree(k)
        return len(self._cells[k])

    def total_cells(self) -> int:
        return sum(len(c) for c in self._cells)

    def vertices(self) -> list[int]:
        return [c[0] for c in self._cells[0]]

    def faces(self, k: int, i: int):
        return self._faces[k][i]

    def cofaces(self, k: int, j: int):
        return self._cofaces[k][j]

    def index_of(self, simplex: Sequence[int]) -> tuple[int, int]:
        """Return ``(cell index, sign)`` for a possibly unsorted vertex tuple."""
        k = len(simplex) - 1
        self._check_degree(k)
        key = tuple(sorted(simplex))
        try:
            idx = self._index[k][key]
        except KeyError:
            raise ComplexError(f"cell {list(simplex)} is not in the complex") from None
        return idx, _permutation_sign(simplex)

    def _check_degree(self, k: int) -> None:
        if not 0 <= k <= self.dimension:
            raise DegreeError(f"degree {k} outside 0..{self.dimension}")

    # -- constructors for chains ---------------------------------------

    def chain(self, simplices: Mapping[Sequence[int], object]) -> "Chain":
        """Build a chain from ``{vertex tuple: coefficient}`` in any vertex order."""
        coeffs: dict[int, object] = {}
        degree = None
        for simplex, value in simplices.items():
            k = len(simplex) - 1
            if degree is None:
                degree = k
            elif k != degree:
                raise DegreeError("mixed degrees in chain")
            idx, sign = self.index_of(simplex)
            coeffs[idx] = coeffs.get(idx, 0) + sign * as_exact(value)
        if degree is None:
            raise DegreeError("empty mapping: use Chain.zero")
        return Chain(degree, coeffs)

    def zero_cochain(self, k: int) -> "Cochain":
        return Cochain(k, (0,) * self.num_cells(k))

    def cochain(self, k: int, values: Sequence) -> "Cochain":
        if len(values) != self.num_cells(k):
            raise ComplexError(
                f"cochain of degree {k} needs {self.num_cells(k)} values, got {len(values)}")
        return Cochain(k, tuple(values))

    # -- geometry ------------------------------------------------------

    def edge_vector(self, a: int, b: int) -> tuple:
        if self.coords is None:
            raise ComplexError("complex has no embedding")
        pa, pb = self.coords[a], self.coords[b]
        vec = [q - p for p, q in zip(pa, pb)]
        if self.period is not None:
            for i, per in enumerate(self.period):
                if per:
                    # minimum image; generators keep edges under half a period
                    while vec[i] > per / 2:
                        vec[i] -= per
                    while vec[i] <= -per / 2:
                        vec[i] += per
        return tuple(vec)

    def frame(self, k: int, i: int) -> tuple[tuple, ...]:
        """Spanning edge vectors ``(v1 - v0, ..., vk - v0)`` of a reference cell."""
        cell = self.cells(k)[i]
        return tuple(self.edge_vector(cell[0], v) for v in cell[1:])

    def barycenter(self, k: int, i: int) -> tuple:
        cell = self.cells(k)[i]
        base = self.coords[cell[0]]
        vecs = self.frame(k, i)
        return tuple(base[d] + sum(v[d] for v in vecs) / (k + 1) for d in range(len(base)))

    def volume(self, k: int, i: int):
        """k-volume of a cell, exact when the Gram determinant is a rational square."""
        vecs = self.frame(k, i)
        gram = [[sum(a * b for a, b in zip(u, v)) for v in vecs] for u in vecs]
        root = _sqrt_exact(_det(gram))
        if isinstance(root, float):
            return root / math.factorial(k)
        vol = Fraction(root, math.factorial(k))
        return vol.numerator if vol.denominator == 1 else vol

    # -- serialization -------------------------------------------------

    def to_json(self) -> dict:
        verts = []
        for v in self.vertices():
            entry = {"id": v}
            if self.coords is not None:
                entry["coords"] = [_num_to_json(c) for c in self.coords[v]]
            verts.append(entry)
        out = {
            "dimension": self.dimension,
            "vertices": verts,
            "cells": [[list(c) for c in self._cells[k]] for k in range(1, self.dimension + 1)],
        }
        if self.period is not None:
            out["period"] = [_num_to_json(p) for p in self.period]
        return out

    def __repr__(self):
        counts = ", ".join(str(len(c)) for c in self._cells)
        return f"SimplicialComplex(dimension={self.dimension}, cells=[{counts}])"


@dataclass(frozen=True)
class Chain:
    """Sparse chain: cell index -> coefficient.  Zero entries are dropped."""

    degree: int
    coefficients: Mapping[int, object] = field(default_factory=dict)

    def __post_init__(self):
        clean = {int(k): v for k, v in self.coefficients.items() if v != 0}
        object.__setattr__(self, "coefficients", clean)

    @classmethod
    def zero(cls, degree: int) -> "Chain":
        return cls(degree, {})

    def is_zero(self) -> bool:
        return not self.coefficients

    def __getitem__(self, idx: int):
        return self.coefficients.get(idx, 0)

    def items(self):
        return sorted(self.coefficients.items())

    def _combine(self, other: "Chain", sign: int) -> "Chain":
        if other.degree != self.degree:
            raise DegreeError(f"cannot combine degree {self.degree} and {other.degree}")
        out = dict(self.coefficients)
        for k, v in other.coefficients.items():
            out[k] = out.get(k, 0) + sign * v
        return Chain(self.degree, out)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __neg__(self):
        return Chain(self.degree, {k: -v for k, v in self.coefficients.items()})

    def __mul__(self, scalar):
        return Chain(self.degree, {k: scalar * v for k, v in self.coefficients.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, Chain):
            return NotImplemented
        return self.degree == other.degree and self.coefficients == other.coefficients

    def __hash__(self):
        return hash((self.degree, frozenset(self.coefficients.items())))


@dataclass(frozen=True)
class Cochain:
    """Dense cochain: one value per stored k-cell."""

    degree: int
    values: tuple

    def __getitem__(self, idx: int):
        return self.values[idx]

    def __len__(self):
        return len(self.values)

    def __add__(self, other: "Cochain") -> "Cochain":
        if other.degree != self.degree or len(other) != len(self):
            raise DegreeError("cochain shapes differ")
        return Cochain(self.degree, tuple(a + b for a, b in zip(self.values, other.values)))

    def __sub__(self, other: "Cochain") -> "Cochain":
        return self + (-1) * other

    def __mul__(self, scalar):
        return Cochain(self.degree, tuple(scalar * v for v in self.values))

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return all(v == 0 for v in self.values)


def boundary(cx: SimplicialComplex, a: Chain) -> Chain:
    """Boundary of a k-chain, k >= 1."""
    if a.degree == 0:
        raise DegreeError("boundary of a 0-chain is undefined")
    cx._check_degree(a.degree)
    n = cx.num_cells(a.degree)
    out: dict[int, object] = {}
    for i, coeff in a.coefficients.items():
        if not 0 <= i < n:
            raise ComplexError(f"unknown {a.degree}-cell id {i}")
        for j, s in cx.faces(a.degree, i):
            out[j] = out.get(j, 0) + s * coeff
    return Chain(a.degree - 1, out)


def coboundary(cx: SimplicialComplex, w: Cochain) -> Cochain:
    """Discrete exterior derivative: ``(dw)(cell) = w(boundary(cell))``."""
    k = w.degree
    if k + 1 > cx.dimension:
        raise DegreeError(f"coboundary of a {k}-cochain needs a {k + 1}-skeleton")
    if len(w) != cx.num_cells(k):
        raise ComplexError(f"cochain has {len(w)} values, complex has {cx.num_cells(k)} {k}-cells")
    vals = w.values
    out = []
    for row in cx._faces[k + 1]:
        acc = 0
        for j, s in row:
            v = vals[j]
            if v:
                acc = acc + v if s > 0 else acc - v
        out.append(acc)
    return Cochain(k + 1, tuple(out))


def pair(a: Chain, w: Cochain):
    """Evaluate a cochain on a chain."""
    if a.degree != w.degree:
        raise DegreeError(f"cannot pair a {a.degree}-chain with a {w.degree}-cochain")
    total = 0
    for i, coeff in a.coefficients.items():
        if not 0 <= i < len(w):
            raise ComplexError(f"unknown {a.degree}-cell id {i}")
        total += coeff * w.values[i]
    return total


def check_invariants(cx: SimplicialComplex) -> list[str]:
    """Verify that the boundary of every boundary is zero; return problems found."""
    problems = []
    for k in range(2, cx.dimension + 1):
        for i in range(cx.num_cells(k)):
            bb = boundary(cx, boundary(cx, Chain(k, {i: 1})))
            if not bb.is_zero():
                problems.append(f"boundary of boundary of {list(cx.cells(k)[i])} is nonzero")
    return problems


# -- exact helpers ------------------------------------------------------

def _det(m: list[list]):
    m = [[Fraction(x) if isinstance(x, int) else x for x in row] for row in m]
    n = len(m)
    det = 1
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c] != 0), None)
        if piv is None:
            return 0
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det *= m[c][c]
        for r in range(c + 1, n):
            f = m[r][c] / m[c][c]
            if f:
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    return det


def _sqrt_exact(x):
    if isinstance(x, float):
        return math.sqrt(max(x, 0.0))
    x = Fraction(x)
    if x < 0:
        raise ValueError("negative Gram determinant")
    p, q = x.numerator, x.denominator
    rp, rq = math.isqrt(p), math.isqrt(q)
    if rp * rp == p and rq * rq == q:
        r = Fraction(rp, rq)
        return r.numerator if r.denominator == 1 else r
    return math.sqrt(float(x))


def _num_to_json(x):
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else str(x)
    return x


def _json_to_num(x):
    if isinstance(x, str):
        return as_exact(x)
    return x


# -- file format --------------------------------------------------------

def complex_from_json(data: Mapping) -> SimplicialComplex:
    """Load a complex from the JSON object layout.

    ``cells`` lists the cells of degree 1..dimension; vertices come from
    ``vertices``.  Missing faces and duplicates raise :class:`ComplexError`
    naming the offending cell.
    """
    try:
        dim = int(data["dimension"])
        verts = data["vertices"]
        levels = data.get("cells", [])
    except (KeyError, TypeError) as exc:
        raise ComplexError(f"malformed complex object: missing {exc}") from None
    if len(levels) == dim + 1:
        levels = levels[1:]          # tolerate an explicit vertex level
    if len(levels) != dim:
        raise ComplexError(f"expected {dim} cell levels, got {len(levels)}")
    ids = [int(v["id"]) for v in verts]
    coords = None
    if verts and all("coords" in v for v in verts):
        coords = {int(v["id"]): tuple(_json_to_num(c) for c in v["coords"]) for v in verts}
    period = data.get("period")
    if period is not None:
        period = tuple(_json_to_num(p) for p in period)
    cells = [[(i,) for i in ids]] + [[tuple(int(x) for x in c) for c in level] for level in levels]
    return SimplicialComplex(cells, coords=coords, period=period)


def load_complex(path) -> SimplicialComplex:
    with open(path) as fh:
        return complex_from_json(json.load(fh))


def save_complex(cx: SimplicialComplex, path) -> None:
    Path(path).write_text(json.dumps(cx.to_json(), indent=1))


def chain_to_json(cx: SimplicialComplex, a: Chain) -> dict:
    return {
        "degree": a.degree,
        "coefficients": {",".join(map(str, cx.cells(a.degree)[i])): _num_to_json(v)
                         for i, v in a.items()},
    }


def chain_from_json(cx: SimplicialComplex, data: Mapping) -> Chain:
    degree = int(data["degree"])
    coeffs = data.get("coefficients", {})
    if not coeffs:
        return Chain.zero(degree)
    simplices = {}
    for key, value in coeffs.items():
        simplex = tuple(int(x) for x in key.split(","))
        if len(simplex) != degree + 1:
            raise DegreeError(f"cell {key} does not have degree {degree}")
        simplices[simplex] = simplices.get(simplex, 0) + as_exact(value)
    return cx.chain(simplices)


# -- generators ---------------------------------------------------------

def _grid_vertex(i, j, q):
    return i * q + j


def grid_disk(xs: Sequence, ys: Sequence) -> SimplicialComplex:
    """Rectangle triangulated on the grid ``xs`` x ``ys``.

    Each grid square [xs[i], xs[i+1]] x [ys[j], ys[j+1]] is split along the
    diagonal from its lower-left to its upper-right corner.
    """
    p, q = len(xs), len(ys)
    coords = {_grid_vertex(i, j, q): (xs[i], ys[j]) for i in range(p) for j in range(q)}
    tris = []
    for i in range(p - 1):
        for j in range(q - 1):
            a, b = _grid_vertex(i, j, q), _grid_vertex(i + 1, j, q)
            c, d = _grid_vertex(i + 1, j + 1, q), _grid_vertex(i, j + 1, q)
            tris += [(a, b, c), (a, c, d)]
    return from_top_cells(tris, coords)


def fan_disk(n_boundary: int, radius: float = 1.0) -> SimplicialComplex:
    """Disk as a fan of ``n_boundary`` triangles around a center vertex 0."""
    if n_boundary < 3:
        raise ComplexError("a fan disk needs at least 3 boundary vertices")
    coords = {0: (0.0, 0.0)}
    for k in range(n_boundary):
        t = 2 * math.pi * k / n_boundary
        coords[k + 1] = (radius * math.cos(t), radius * math.sin(t))
    tris = [(0, k + 1, (k + 1) % n_boundary + 1) for k in range(n_boundary)]
    return from_top_cells(tris, coords)


def annulus(n_around: int, n_rings: int = 2, r_in: float = 1.0, r_out: float = 2.0) -> SimplicialComplex:
    """Annulus with ``n_rings`` concentric vertex rings of ``n_around`` vertices."""
    if n_around < 3 or n_rings < 2:
        raise ComplexError("annulus needs n_around >= 3 and n_rings >= 2")
    coords = {}
    for r in range(n_rings):
        rad = r_in + (r_out - r_in) * r / (n_rings - 1)
        for k in range(n_around):
            t = 2 * math.pi * k / n_around
            coords[r * n_around + k] = (rad * math.cos(t), rad * math.sin(t))
    tris = []
    for r in range(n_rings - 1):
        for k in range(n_around):
            a = r * n_around + k
            b = r * n_around + (k + 1) % n_around
            c = (r + 1) * n_around + (k + 1) % n_around
            d = (r + 1) * n_around + k
            tris += [(a, b, c), (a, c, d)]
    return from_top_cells(tris, coords)


def torus_grid(p: int, q: int, widths: Sequence | None = None,
               heights: Sequence | None = None) -> SimplicialComplex:
    """Flat torus from a p x q periodic grid.

    Vertex ``(i, j)`` has id ``i*q + j`` and sits at column ``i``, row ``j``.
    ``widths[i]`` is the x-extent of column i and ``heights[j]`` the y-extent
    of row j (default 1).  The embedding is periodic, so frames use the
    minimum-image convention.
    """
    if p < 3 or q < 3:
        raise ComplexError("torus grid needs p, q >= 3 to be simplicial")
    widths = list(widths) if widths is not None else [1] * p
    heights = list(heights) if heights is not None else [1] * q
    W, H = sum(widths), sum(heights)
    if 2 * max(widths) >= W or 2 * max(heights) >= H:
        raise ComplexError("every column/row must be shorter than half the period")
    xs = [sum(widths[:i]) for i in range(p)]
    ys = [sum(heights[:j]) for j in range(q)]
    coords = {_grid_vertex(i, j, q): (xs[i], ys[j]) for i in range(p) for j in range(q)}
    tris = []
    for i in range(p):
        for j in range(q):
            a = _grid_vertex(i, j, q)
            b = _grid_vertex((i + 1) % p, j, q)
            c = _grid_vertex((i + 1) % p, (j + 1) % q, q)
            d = _grid_vertex(i, (j + 1) % q, q)
            tris += [(a, b, c), (a, c, d)]
    return from_top_cells(tris, coords, period=(W, H))


def cylinder_grid(p: int, q: int, radius: float = 1.0, length: float = 1.0) -> SimplicialComplex:
    """[0, length] x S^1 with p segments along the axis and q >= 3 around it, in 3-space."""
    if p < 1 or q < 3:
        raise ComplexError("cylinder grid needs p >= 1 and q >= 3")
    coords = {}
    for i in range(p + 1):
        for j in range(q):
            t = 2 * math.pi * j / q
            coords[i * q + j] = (radius * math.cos(t), radius * math.sin(t), length * i / p)
    tris = []
    for i in range(p):
        for j in range(q):
            a, b = i * q + j, i * q + (j + 1) % q
            c, d = (i + 1) * q + (j + 1) % q, (i + 1) * q + j
            tris += [(a, b, c), (a, c, d)]
    return from_top_cells(tris, coords)


def grid_graph(xs: Sequence, ys: Sequence) -> SimplicialComplex:
    """1-dimensional complex: axis-aligned grid graph on ``xs`` x ``ys``."""
    p, q = len(xs), len(ys)
    coords = {_grid_vertex(i, j, q): (xs[i], ys[j]) for i in range(p) for j in range(q)}
    edges = []
    for i in range(p):
        for j in range(q):
            v = _grid_vertex(i, j, q)
            if i + 1 < p:
                edges.append((v, _grid_vertex(i + 1, j, q)))
            if j + 1 < q:
                edges.append((v, _grid_vertex(i, j + 1, q)))
    return from_top_cells(edges, coords)


def from_top_cells(top: Iterable[Sequence[int]], coords=None, period=None) -> SimplicialComplex:
    """Close a list of top-dimensional simplices under taking faces."""
    top = [tuple(sorted(c)) for c in top]
    if not top:
        raise ComplexError("no cells given")
    n = len(top[0]) - 1
    levels: list[set] = [set() for _ in range(n + 1)]
    for cell in top:
        for k in range(n + 1):
            levels[k].update(itertools.combinations(cell, k + 1))
    if coords is not None:
        levels[0].update((v,) for v in coords)
    return SimplicialComplex([sorted(level) for level in levels], coords=coords, period=period)
