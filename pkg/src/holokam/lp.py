"""Revised simplex for equality-form linear programs with dual extraction.

Problems are ``min c.x  s.t.  A x = b,  x >= 0``.  Inequalities must be
encoded by the caller with explicit slack columns.  Pivoting follows
Bland's rule (lowest index enters, lowest basic index leaves on ties), so
runs are deterministic and cannot cycle.

Two arithmetics are supported: ``"rational"`` (exact, via
:class:`fractions.Fraction`) and ``"float"`` (with an absolute tolerance).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

log = logging.getLogger(__name__)

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


@dataclass
class LinearProgram:
    """``min c.x`` subject to sparse equality rows ``rows[i] . x = b[i]``, ``x >= 0``.

    ``rows[i]`` maps column index -> coefficient.
    """

    c: Sequence
    rows: Sequence[Mapping[int, object]]
    b: Sequence

    def __post_init__(self):
        self.c = list(self.c)
        self.rows = [dict(r) for r in self.rows]
        self.b = list(self.b)
        if len(self.rows) != len(self.b):
            raise ValueError(f"{len(self.rows)} constraint rows but {len(self.b)} right-hand sides")
        n = len(self.c)
        for i, row in enumerate(self.rows):
            for j in row:
                if not 0 <= j < n:
                    raise ValueError(f"row {i} references column {j}, but there are {n} variables")

    @property
    def n_vars(self) -> int:
        return len(self.c)

    @property
    def n_rows(self) -> int:
        return len(self.rows)

    def columns(self) -> list[list[tuple[int, object]]]:
        cols: list[list] = [[] for _ in range(self.n_vars)]
        for i, row in enumerate(self.rows):
            for j, v in sorted(row.items()):
                if v != 0:
                    cols[j].append((i, v))
        return cols

    def dump_triplets(self, path) -> None:
        """Write a plain-text sparse dump: ``row col value`` triplets plus c and b."""
        with open(path, "w") as fh:
            fh.write(f"# rows {self.n_rows} cols {self.n_vars}\n")
            fh.write("[matrix]\n")
            for i, row in enumerate(self.rows):
                for j, v in sorted(row.items()):
                    if v != 0:
                        fh.write(f"{i} {j} {v}\n")
            fh.write("[objective]\n")
            for j, v in enumerate(self.c):
                if v != 0:
                    fh.write(f"{j} {v}\n")
            fh.write("[rhs]\n")
            for i, v in enumerate(self.b):
                if v != 0:
                    fh.write(f"{i} {v}\n")


def read_triplets(path) -> LinearProgram:
    section = None
    n_rows = n_cols = 0
    entries, obj, rhs = [], {}, {}
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                parts = line[1:].split()
                n_rows, n_cols = int(parts[1]), int(parts[3])
                continue
            if line.startswith("["):
                section = line.strip("[]")
                continue
            parts = line.split()
            if section == "matrix":
                entries.append((int(parts[0]), int(parts[1]), Fraction(parts[2])))
            elif section == "objective":
                obj[int(parts[0])] = Fraction(parts[1])
            elif section == "rhs":
                rhs[int(parts[0])] = Fraction(parts[1])
    rows = [dict() for _ in range(n_rows)]
    for i, j, v in entries:
        rows[i][j] = v
    return LinearProgram([obj.get(j, 0) for j in range(n_cols)], rows,
                         [rhs.get(i, 0) for i in range(n_rows)])


@dataclass
class LpSolution:
    """Result of :func:`solve_lp`.

    ``y`` holds one dual value per constraint row when optimal.  ``ray`` is a
    primal improving direction (``A d = 0, d >= 0, c.d < 0``) when unbounded,
    and a Farkas dual ray (``A^T y <= 0, b.y > 0``) when infeasible.
    """

    status: str
    x: list | None = None
    y: list | None = None
    value: object = None
    ray: list | None = None
    pivots: list = field(default_factory=list)

    @property
    def optimal(self) -> bool:
        return self.status == OPTIMAL


class _Simplex:
    def __init__(self, p: LinearProgram, arithmetic: str, tol: float):
        if arithmetic == "rational":
            conv = _to_fraction
            self.tol = 0
        elif arithmetic == "float":
            conv = float
            if not tol or tol <= 0:
                raise ValueError("float arithmetic needs a positive tolerance")
            self.tol = tol
        else:
            raise ValueError(f"unknown arithmetic {arithmetic!r}")
        self.arithmetic = arithmetic
        self.zero = conv(0)
        self.one = conv(1)
        self.m, self.n = p.n_rows, p.n_vars
        self.c = [conv(v) for v in p.c]
        self.b = [conv(v) for v in p.b]
        self.cols = [[(i, conv(v)) for i, v in col] for col in p.columns()]
        # flip rows so that b >= 0; artificial column n+i belongs to row i
        self.flip = [-1 if bi < 0 else 1 for bi in self.b]
        self.b = [f * bi for f, bi in zip(self.flip, self.b)]
        self.cols = [[(i, self.flip[i] * v) for i, v in col] for col in self.cols]
        self.pivots: list[tuple[int, int]] = []

    # -- primitives ----------------------------------------------------

    def _column(self, j):
        if j >= self.n:
            return [(j - self.n, self.one)]
        return self.cols[j]

    def _duals(self, cost):
        m, binv = self.m, self.binv
        y = [self.zero] * m
        for r, var in enumerate(self.basis):
            cb = cost(var)
            if cb:
                row = binv[r]
                for i in range(m):
                    if row[i]:
                        y[i] += cb * row[i]
        return y

    def _direction(self, j):
        col = self._column(j)
        return [sum((row[i] * v for i, v in col), self.zero) for row in self.binv]

    def _pivot(self, r, j, u):
        piv = u[r]
        binv = self.binv
        prow = [v / piv for v in binv[r]]
        binv[r] = prow
        xr = self.xb[r] / piv
        self.xb[r] = xr
        for i in range(self.m):
            if i != r and u[i]:
                f = u[i]
                row = binv[i]
                binv[i] = [a - f * b_ for a, b_ in zip(row, prow)]
                self.xb[i] -= f * xr
                if self.arithmetic == "float" and abs(self.xb[i]) <= self.tol:
                    self.xb[i] = self.zero
        self.pivots.append((self.basis[r], j))
        self.basis[r] = j
        self.in_basis = set(self.basis)

    def _iterate(self, cost, allowed):
        """Run simplex pivots; return ('optimal', None) or ('unbounded', (j, u))."""
        tol = self.tol
        while True:
            y = self._duals(cost)
            entering = None
            for j in allowed:
                if j in self.in_basis:
                    continue
                d = cost(j) - sum((y[i] * v for i, v in self._column(j)), self.zero)
                if d < -tol:
                    entering = j
                    break
            if entering is None:
                return OPTIMAL, y
            u = self._direction(entering)
            best = None
            for r in range(self.m):
                if u[r] > tol:
                    ratio = self.xb[r] / u[r]
                    key = (ratio, self.basis[r])
                    if best is None or _ratio_less(key, best[0], tol):
                        best = (key, r)
            if best is None:
                return UNBOUNDED, (entering, u)
            self._pivot(best[1], entering, u)

    # -- phases --------------------------------------------------------

    def phase_one(self):
        m, n = self.m, self.n
        self.basis = [n + i for i in range(m)]
        self.in_basis = set(self.basis)
        self.binv = [[self.one if i == k else self.zero for k in range(m)] for i in range(m)]
        self.xb = list(self.b)

        def cost(j):
            return self.one if j >= n else self.zero

        _, y = self._iterate(cost, range(n))
        infeas = sum(self.xb[r] for r, v in enumerate(self.basis) if v >= n)
        if infeas > self.tol:
            ray = [f * yi for f, yi in zip(self.flip, y)]
            return False, ray
        # drive zero-level artificials out of the basis where possible
        for r in range(m):
            if self.basis[r] < n:
                continue
            for j in range(n):
                if j in self.in_basis:
                    continue
                row = self.binv[r]
                ur = sum((row[i] * v for i, v in self._column(j)), self.zero)
                if (abs(ur) > self.tol) if self.tol else ur != 0:
                    self._pivot(r, j, self._direction(j))
                    break
        return True, None

    def phase_two(self):
        n = self.n

        def cost(j):
            return self.c[j] if j < n else self.zero

        status, info = self._iterate(cost, range(n))
        if status == UNBOUNDED:
            j, u = info
            ray = [self.zero] * n
            ray[j] = self.one
            for r, var in enumerate(self.basis):
                if var < n:
                    ray[var] = -u[r]
            return UNBOUNDED, ray
        y = [f * yi for f, yi in zip(self.flip, info)]
        return OPTIMAL, y

    def primal(self):
        x = [self.zero] * self.n
        for r, var in enumerate(self.basis):
            if var < self.n:
                x[var] = self.xb[r]
        return x


def _ratio_less(key, best, tol):
    (ra, ia), (rb, ib) = key, best
    if tol:
        if ra < rb - tol:
            return True
        if abs(ra - rb) <= tol:
            return ia < ib
        return False
    return ra < rb or (ra == rb and ia < ib)


def _to_fraction(v):
    if isinstance(v, Fraction):
        return v
    return Fraction(v)


def _presolve(p: LinearProgram):
    """Split off empty rows; returns (kept row indices, inconsistent empty row or None)."""
    keep = []
    for i, row in enumerate(p.rows):
        if any(v != 0 for v in row.values()):
            keep.append(i)
        elif p.b[i] != 0:
            return keep, i
    return keep, None


def solve_lp(p: LinearProgram, arithmetic: str = "rational", tol: float | None = None) -> LpSolution:
    """Solve ``min c.x, A x = b, x >= 0``.

    Parameters
    ----------
    arithmetic
        ``"rational"`` for exact Fractions or ``"float"``.
    tol
        Absolute tolerance, required in float mode.

    Returns
    -------
    LpSolution
        With ``status`` one of ``optimal``, ``infeasible``, ``unbounded``.
    """
    keep, bad = _presolve(p)
    conv = _to_fraction if arithmetic == "rational" else float
    if bad is not None:
        ray = [conv(0)] * p.n_rows
        ray[bad] = conv(1 if p.b[bad] > 0 else -1)
        return LpSolution(INFEASIBLE, ray=ray)
    reduced = LinearProgram(p.c, [p.rows[i] for i in keep], [p.b[i] for i in keep])
    s = _Simplex(reduced, arithmetic, tol)
    feasible, ray = s.phase_one()
    if not feasible:
        full = [conv(0)] * p.n_rows
        for k, i in enumerate(keep):
            full[i] = ray[k]
        return LpSolution(INFEASIBLE, ray=full, pivots=s.pivots)
    status, info = s.phase_two()
    if status == UNBOUNDED:
        return LpSolution(UNBOUNDED, ray=info, pivots=s.pivots)
    x = s.primal()
    y = [conv(0)] * p.n_rows
    for k, i in enumerate(keep):
        y[i] = info[k]
    value = sum((ci * xi for ci, xi in zip(s.c, x)), conv(0))
    log.debug("lp solved: %d rows, %d cols, %d pivots", p.n_rows, p.n_vars, len(s.pivots))
    return LpSolution(OPTIMAL, x=x, y=y, value=value, pivots=s.pivots)


@dataclass
class FarkasResult:
    feasible: bool
    x: list | None = None
    y: list | None = None


def farkas_certificate(p: LinearProgram, arithmetic: str = "rational",
                       tol: float | None = None) -> FarkasResult:
    """Return a feasible ``x >= 0`` with ``A x = b`` or a ray ``y`` with ``A^T y <= 0, b.y > 0``."""
    feas = LinearProgram([0] * p.n_vars, p.rows, p.b)
    sol = solve_lp(feas, arithmetic, tol)
    if sol.status == INFEASIBLE:
        return FarkasResult(False, y=sol.ray)
    return FarkasResult(True, x=sol.x)


def residuals(p: LinearProgram, sol: LpSolution) -> dict:
    """Primal/dual feasibility, complementary slackness and duality gap of an optimal solution."""
    x, y = sol.x, sol.y
    primal = max((abs(sum((v * x[j] for j, v in row.items()), 0) - bi)
                  for row, bi in zip(p.rows, p.b)), default=0)
    aty = [0] * p.n_vars
    for i, row in enumerate(p.rows):
        for j, v in row.items():
            aty[j] += v * y[i]
    reduced = [cj - a for cj, a in zip(p.c, aty)]
    dual = max((max(-r, 0) for r in reduced), default=0)
    slack = max((abs(xj * r) for xj, r in zip(x, reduced)), default=0)
    dual_value = sum((bi * yi for bi, yi in zip(p.b, y)), 0)
    return {
        "primal": primal,
        "dual": dual,
        "complementary_slackness": slack,
        "gap": abs(sol.value - dual_value),
        "dual_value": dual_value,
    }
