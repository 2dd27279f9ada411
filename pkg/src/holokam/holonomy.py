"""Discrete holonomic measures, action minimization and dual certificates.

A discrete holonomic measure puts nonnegative weight on *signed* n-cells:
``(cell, +1)`` is the cell with its reference frame, ``(cell, -1)`` the
same cell with the reversed frame.  Its current is the chain
``w(cell, +) - w(cell, -)``.  Minimizing the action over measures with a
prescribed boundary is a linear program whose dual is an (n-1)-cochain,
i.e. a discrete form calibrating the Lagrangian.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping

from .complex import Chain, Cochain, SimplicialComplex, as_exact, boundary, coboundary, pair
from .lp import INFEASIBLE, UNBOUNDED, LinearProgram, farkas_certificate, solve_lp

FLOAT_TOL = 1e-8


class NotABoundary(ValueError):
    """The prescribed chain has no filling; ``ray`` is a separating cochain."""

    def __init__(self, msg, ray: Cochain | None = None):
        super().__init__(msg)
        self.ray = ray


class Unbounded(ValueError):
    """The action is unbounded below; ``ray`` is a closed measure of negative action."""

    def __init__(self, msg, ray: "HolonomicMeasure | None" = None):
        super().__init__(msg)
        self.ray = ray


@dataclass(frozen=True)
class HolonomicMeasure:
    """Nonnegative weights on signed n-cells of ``complex``."""

    complex: SimplicialComplex
    plus: Mapping[int, object] = field(default_factory=dict)
    minus: Mapping[int, object] = field(default_factory=dict)

    def __post_init__(self):
        for side in (self.plus, self.minus):
            for i, w in side.items():
                if w < 0:
                    raise ValueError(f"negative weight {w} on cell {i}")
        object.__setattr__(self, "plus", {i: w for i, w in self.plus.items() if w != 0})
        object.__setattr__(self, "minus", {i: w for i, w in self.minus.items() if w != 0})

    @property
    def degree(self) -> int:
        return self.complex.dimension

    def chain(self) -> Chain:
        out = dict(self.plus)
        for i, w in self.minus.items():
            out[i] = out.get(i, 0) - w
        return Chain(self.degree, out)

    def mass(self):
        return sum(self.plus.values(), 0) + sum(self.minus.values(), 0)

    def support(self) -> list[tuple[int, int]]:
        return sorted([(i, 1) for i in self.plus] + [(i, -1) for i in self.minus])

    def weight(self, i: int, sign: int):
        return (self.plus if sign > 0 else self.minus).get(i, 0)

    def __add__(self, other: "HolonomicMeasure") -> "HolonomicMeasure":
        p, m = dict(self.plus), dict(self.minus)
        for i, w in other.plus.items():
            p[i] = p.get(i, 0) + w
        for i, w in other.minus.items():
            m[i] = m.get(i, 0) + w
        return HolonomicMeasure(self.complex, p, m)

    def scaled(self, t) -> "HolonomicMeasure":
        return HolonomicMeasure(self.complex, {i: t * w for i, w in self.plus.items()},
                                {i: t * w for i, w in self.minus.items()})

    @classmethod
    def from_chain(cls, cx: SimplicialComplex, a: Chain) -> "HolonomicMeasure":
        """The minimal-mass measure inducing a given top-degree chain."""
        return cls(cx, {i: v for i, v in a.coefficients.items() if v > 0},
                   {i: -v for i, v in a.coefficients.items() if v < 0})


@dataclass(frozen=True)
class DiscreteLagrangian:
    """Cost of each signed n-cell: ``plus[i]`` and ``minus[i]``."""

    complex: SimplicialComplex
    plus: tuple
    minus: tuple
    description: str = ""

    def __post_init__(self):
        n = self.complex.num_cells(self.complex.dimension)
        if len(self.plus) != n or len(self.minus) != n:
            raise ValueError(f"Lagrangian must give a cost to all {n} signed cells on each side")

    def cost(self, i: int, sign: int):
        return self.plus[i] if sign > 0 else self.minus[i]

    def __add__(self, other):
        if isinstance(other, DiscreteLagrangian):
            return DiscreteLagrangian(self.complex, tuple(a + b for a, b in zip(self.plus, other.plus)),
                                      tuple(a + b for a, b in zip(self.minus, other.minus)),
                                      f"({self.description}) + ({other.description})")
        # scalar shift
        return DiscreteLagrangian(self.complex, tuple(a + other for a in self.plus),
                                  tuple(a + other for a in self.minus),
                                  f"{self.description} + {other}")

    def scaled(self, t) -> "DiscreteLagrangian":
        return DiscreteLagrangian(self.complex, tuple(t * a for a in self.plus),
                                  tuple(t * a for a in self.minus), f"{t} * ({self.description})")

    def plus_exact(self, omega: Cochain) -> "DiscreteLagrangian":
        """Add the exact form ``d omega`` (a signed cell sees ``+-(d omega)(cell)``)."""
        d = coboundary(self.complex, omega)
        return DiscreteLagrangian(self.complex, tuple(a + v for a, v in zip(self.plus, d.values)),
                                  tuple(a - v for a, v in zip(self.minus, d.values)),
                                  f"{self.description} + d(omega)")

    # -- constructors --------------------------------------------------

    @classmethod
    def constant(cls, cx: SimplicialComplex, k) -> "DiscreteLagrangian":
        n = cx.num_cells(cx.dimension)
        return cls(cx, (k,) * n, (k,) * n, f"constant:{k}")

    @classmethod
    def mass(cls, cx: SimplicialComplex) -> "DiscreteLagrangian":
        return cls(cx, *([1] * cx.num_cells(cx.dimension),) * 2, "mass")

    @classmethod
    def area(cls, cx: SimplicialComplex) -> "DiscreteLagrangian":
        """n-volume of each cell from the embedding (orientation independent)."""
        n = cx.dimension
        vols = tuple(cx.volume(n, i) for i in range(cx.num_cells(n)))
        return cls(cx, vols, vols, "area")

    @classmethod
    def from_function(cls, cx: SimplicialComplex, fn: Callable, description: str = "") -> "DiscreteLagrangian":
        """Evaluate ``fn(x, frame)`` at each barycenter with the signed spanning frame.

        The reversed frame swaps the first two spanning vectors (negates the
        vector when n = 1).
        """
        n = cx.dimension
        plus, minus = [], []
        for i in range(cx.num_cells(n)):
            x = cx.barycenter(n, i)
            frame = cx.frame(n, i)
            plus.append(fn(x, frame))
            minus.append(fn(x, _reverse_frame(frame)))
        return cls(cx, tuple(plus), tuple(minus), description)

    @classmethod
    def from_costs(cls, cx: SimplicialComplex, plus, minus, description: str = "") -> "DiscreteLagrangian":
        return cls(cx, tuple(plus), tuple(minus), description)


def _reverse_frame(frame):
    if len(frame) == 1:
        return (tuple(-x for x in frame[0]),)
    return (frame[1], frame[0]) + tuple(frame[2:])


@dataclass(frozen=True)
class DualCertificate:
    """Discrete critical subsolution: ``g = L + c0 - d omega >= 0``.

    ``normalized`` is true when ``c0`` is minus the mean action of the
    minimizer and ``<c, omega> = 0``; otherwise the certificate is the plain
    LP dual at level ``c0 = 0``.
    """

    omega: Cochain
    c0: object
    residual_plus: tuple
    residual_minus: tuple
    normalized: bool = False

    def residual(self, i: int, sign: int):
        return self.residual_plus[i] if sign > 0 else self.residual_minus[i]


@dataclass
class CertificateReport:
    subsolution_defect: object
    slackness_defect: object
    integral_g: object
    boundary_defect: object
    tolerance: object
    passed: bool

    def as_dict(self) -> dict:
        return {
            "subsolution_defect": self.subsolution_defect,
            "slackness_defect": self.slackness_defect,
            "integral_g": self.integral_g,
            "boundary_defect": self.boundary_defect,
            "tolerance": self.tolerance,
            "pass": self.passed,
        }


# -- operations ---------------------------------------------------------

def boundary_of_measure(mu: HolonomicMeasure) -> Chain:
    return boundary(mu.complex, mu.chain())


def action(L: DiscreteLagrangian, mu: HolonomicMeasure):
    if L.complex is not mu.complex:
        raise ValueError("Lagrangian and measure live on different complexes")
    total = 0
    for i, w in mu.plus.items():
        total += L.plus[i] * w
    for i, w in mu.minus.items():
        total += L.minus[i] * w
    return total


def signed_derivative(cx: SimplicialComplex, omega: Cochain) -> tuple[tuple, tuple]:
    d = coboundary(cx, omega).values
    return d, tuple(-v for v in d)


def _filling_lp(L: DiscreteLagrangian, c: Chain, mass=None, mass_mode: str = "eq") -> LinearProgram:
    """Columns 2i / 2i+1 are the + / - weights of n-cell i; rows are (n-1)-cells.

    With ``mass`` set, an extra last row fixes (``eq``) or bounds (``le``,
    via a trailing slack column) the total weight.
    """
    cx = L.complex
    n = cx.dimension
    if c.degree != n - 1:
        raise ValueError(f"boundary chain must have degree {n - 1}, got {c.degree}")
    n_rows = cx.num_cells(n - 1)
    rows: list[dict] = [dict() for _ in range(n_rows)]
    cost = []
    for i in range(cx.num_cells(n)):
        for j, s in cx.faces(n, i):
            rows[j][2 * i] = s
            rows[j][2 * i + 1] = -s
        cost += [L.plus[i], L.minus[i]]
    b = [c[j] for j in range(n_rows)]
    for j in c.coefficients:
        if not 0 <= j < n_rows:
            raise ValueError(f"unknown {n - 1}-cell id {j}")
    if mass is not None:
        mrow = {k: 1 for k in range(len(cost))}
        if mass_mode == "le":
            mrow[len(cost)] = 1
            cost.append(0)
        elif mass_mode != "eq":
            raise ValueError(f"unknown mass mode {mass_mode!r}")
        rows.append(mrow)
        b.append(mass)
    return LinearProgram(cost, rows, b)


def _measure_from_x(cx, x) -> HolonomicMeasure:
    nf = cx.num_cells(cx.dimension)
    return HolonomicMeasure(cx, {i: x[2 * i] for i in range(nf) if x[2 * i]},
                            {i: x[2 * i + 1] for i in range(nf) if x[2 * i + 1]})


def _tol(arithmetic, tol):
    if arithmetic == "rational":
        return 0
    return FLOAT_TOL if tol is None else tol


def is_boundary(cx: SimplicialComplex, c: Chain, arithmetic: str = "rational", tol=None):
    """Return ``(True, filling measure)`` or ``(False, separating cochain)``."""
    L = DiscreteLagrangian.constant(cx, 0)
    res = farkas_certificate(_filling_lp(L, c), arithmetic, _tol(arithmetic, tol) or None)
    if res.feasible:
        return True, _measure_from_x(cx, res.x)
    return False, Cochain(c.degree, tuple(res.y))


def minimize_action(L: DiscreteLagrangian, c: Chain, arithmetic: str = "rational",
                    tol: float | None = None, normalize: bool = True):
    """Minimize the action over measures with boundary ``c``.

    Returns ``(mu, certificate)``.  With ``normalize`` the certificate level
    is ``c0 = -action(mu)/mass(mu)`` and ``omega`` satisfies
    ``d omega <= L + c0`` with equality on the support of ``mu`` and
    ``<c, omega> = 0``, when such an omega exists; otherwise (and with
    ``normalize=False``) the plain LP dual at level 0 is returned, for which
    ``<c, omega>`` equals the minimal action.

    Raises
    ------
    NotABoundary
        ``c`` has no filling.
    Unbounded
        A closed measure of negative action exists.
    """
    cx = L.complex
    t = _tol(arithmetic, tol)
    ok, sep = is_boundary(cx, c, arithmetic, tol)
    if not ok:
        raise NotABoundary("prescribed chain is not a boundary in this complex", sep)
    sol = solve_lp(_filling_lp(L, c), arithmetic, t or None)
    if sol.status == UNBOUNDED:
        raise Unbounded("action is unbounded below: negative-cost closed measure",
                        _measure_from_x(cx, sol.ray))
    if sol.status == INFEASIBLE:  # pragma: no cover - excluded by the Farkas check
        raise NotABoundary("filling LP infeasible")
    mu = _measure_from_x(cx, sol.x)
    omega = Cochain(c.degree, tuple(sol.y))
    c0 = 0
    normalized = False
    m = mu.mass()
    if normalize and m != 0:
        a = action(L, mu)
        level = -a / m if arithmetic == "rational" else -float(a) / float(m)
        if arithmetic == "rational" and isinstance(level, Fraction) and level.denominator == 1:
            level = level.numerator
        shifted = L + level
        sol0 = solve_lp(_filling_lp(shifted, c), arithmetic, t or None)
        if sol0.status == "optimal" and abs(sol0.value) <= t:
            omega = Cochain(c.degree, tuple(sol0.y))
            c0 = level
            normalized = True
    return mu, make_certificate(L, omega, c0, normalized)


def make_certificate(L: DiscreteLagrangian, omega: Cochain, c0, normalized: bool = False) -> DualCertificate:
    dp, dm = signed_derivative(L.complex, omega)
    gp = tuple(l + c0 - d for l, d in zip(L.plus, dp))
    gm = tuple(l + c0 - d for l, d in zip(L.minus, dm))
    return DualCertificate(omega, c0, gp, gm, normalized)


def verify_certificate(L: DiscreteLagrangian, mu: HolonomicMeasure, cert: DualCertificate,
                       c: Chain | None = None, tol=0) -> CertificateReport:
    """Check ``d omega - L <= c0`` everywhere and ``g = 0`` on the support of ``mu``."""
    cx = L.complex
    dp, dm = signed_derivative(cx, cert.omega)
    defects = [d - l - cert.c0 for d, l in zip(dp, L.plus)] + \
              [d - l - cert.c0 for d, l in zip(dm, L.minus)]
    sub = max(defects, default=0)
    g = lambda i, s: (L.cost(i, s) + cert.c0 - (dp[i] if s > 0 else dm[i]))  # noqa: E731
    supp = mu.support()
    slack = max((abs(g(i, s)) for i, s in supp), default=0)
    integral = sum((g(i, s) * mu.weight(i, s) for i, s in supp), 0)
    bdef = 0
    if c is not None:
        diff = boundary_of_measure(mu) - c if mu.degree >= 1 else c
        bdef = max((abs(v) for v in diff.coefficients.values()), default=0)
    passed = sub <= tol and slack <= tol and abs(integral) <= tol and bdef <= tol
    return CertificateReport(sub, slack, integral, bdef, tol, passed)


def q_cone_member(L: DiscreteLagrangian, c: Chain, arithmetic: str = "rational", tol=None) -> bool:
    """Is the action nonnegative on every measure with boundary ``c``?"""
    try:
        mu, _ = minimize_action(L, c, arithmetic, tol, normalize=False)
    except Unbounded:
        return False
    return action(L, mu) >= -_tol(arithmetic, tol)


def r_cone_certificate(L: DiscreteLagrangian, c: Chain, arithmetic: str = "rational",
                       tol=None, maximize: bool = False) -> Cochain | None:
    """Find omega with ``d omega <= L`` on signed cells and ``<c, omega> >= 0``.

    Solved directly in the cochain variables, independently of the
    filling LP.  With ``maximize`` the returned omega maximizes ``<c, omega>``.
    Returns ``None`` when no such omega exists.
    """
    cx = L.complex
    n = cx.dimension
    ne, nf = cx.num_cells(n - 1), cx.num_cells(n)
    # columns: omega+ (0..ne-1), omega- (ne..2ne-1), slacks (2ne..2ne+2nf-1), t
    n_cols = 2 * ne + 2 * nf + 1
    rows, b = [], []
    for i in range(nf):
        for sign, cost in ((1, L.plus[i]), (-1, L.minus[i])):
            row = {}
            for j, s in cx.faces(n, i):
                row[j] = row.get(j, 0) + sign * s
                row[ne + j] = row.get(ne + j, 0) - sign * s
            row[2 * ne + 2 * i + (0 if sign > 0 else 1)] = 1
            rows.append(row)
            b.append(cost)
    prow = {n_cols - 1: -1}
    for j, v in c.coefficients.items():
        prow[j] = v
        prow[ne + j] = -v
    rows.append(prow)
    b.append(0)
    obj = [0] * n_cols
    if maximize:
        for j, v in c.coefficients.items():
            obj[j] = -v
            obj[ne + j] = v
    t = _tol(arithmetic, tol)
    sol = solve_lp(LinearProgram(obj, rows, b), arithmetic, t or None)
    if sol.status == INFEASIBLE:
        return None
    if sol.status == UNBOUNDED:
        if not maximize:  # pragma: no cover - zero objective cannot be unbounded
            raise RuntimeError("feasibility LP reported unbounded")
        sol = solve_lp(LinearProgram([0] * n_cols, rows, b), arithmetic, t or None)
    x = sol.x
    return Cochain(n - 1, tuple(x[j] - x[ne + j] for j in range(ne)))


# -- file formats -------------------------------------------------------

def lagrangian_from_json(cx: SimplicialComplex, data) -> DiscreteLagrangian:
    """Builtin name (``"area"``, ``"mass"``, ``"constant:k"``) or ``{"costs": {"3+": v, ...}}``.

    A ``"default"`` entry next to ``"costs"`` fills the signed cells not listed.
    """
    if isinstance(data, Mapping) and "builtin" in data:
        data = data["builtin"]
    if isinstance(data, str):
        if data == "area":
            return DiscreteLagrangian.area(cx)
        if data == "mass":
            return DiscreteLagrangian.mass(cx)
        if data.startswith("constant:"):
            return DiscreteLagrangian.constant(cx, as_exact(data.split(":", 1)[1]))
        raise ValueError(f"unknown builtin Lagrangian {data!r}")
    costs = data["costs"] if "costs" in data else data
    nf = cx.num_cells(cx.dimension)
    fill = as_exact(data["default"]) if "costs" in data and "default" in data else None
    plus, minus = [fill] * nf, [fill] * nf
    for key, value in costs.items():
        idx, sign = int(key[:-1]), key[-1]
        if not 0 <= idx < nf or sign not in "+-":
            raise ValueError(f"bad Lagrangian key {key!r}")
        (plus if sign == "+" else minus)[idx] = as_exact(value)
    missing = [f"{i}{s}" for i in range(nf) for s, side in (("+", plus), ("-", minus)) if side[i] is None]
    if missing:
        raise ValueError(f"Lagrangian has no cost for signed cell {missing[0]}")
    return DiscreteLagrangian(cx, tuple(plus), tuple(minus), data.get("description", "file"))
