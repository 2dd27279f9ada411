"""Slices with a cotangential component, curves of slices, and the kernel bridge.

A slice is a finite quadrature measure on points ``(x, v_1..v_n, t)`` where
``t`` is a covector.  It acts on (n-1)-forms through ``t ^ omega`` evaluated
on the frame, and a curve of slices acts on n-forms through the frames
alone.  With these conventions a curve built from the level sets of a time
function satisfies ``<T_gamma|[0,t], d omega> = <T_nu_t, omega> - <T_nu_0, omega>``.

The second half of the module builds a finite slice space from closed chains
on a simplicial complex and turns it into a :class:`~holokam.kam.CostKernel`.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from .complex import Chain, Cochain, SimplicialComplex, pair
from .holonomy import DiscreteLagrangian, _filling_lp
from .kam import CostKernel
from .lp import INFEASIBLE, OPTIMAL, solve_lp


def _det(rows):
    n = len(rows)
    if n == 0:
        return 1
    if n == 1:
        return rows[0][0]
    if n == 2:
        return rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    total = 0
    for j in range(n):
        if rows[0][j] == 0:
            continue
        minor = [r[:j] + r[j + 1:] for r in rows[1:]]
        total += (-1) ** j * rows[0][j] * _det(minor)
    return total


def _dot(a, b):
    return sum(x * y for x, y in zip(a, b))


@dataclass(frozen=True)
class SampledForm:
    """A k-form given by an evaluation callback ``fn(x, vectors) -> value``.

    ``d`` is the exterior derivative as another :class:`SampledForm` (or
    None when unknown).  ``comass`` is an optional upper bound of the
    comass over the region where the form is used.
    """

    degree: int
    fn: Callable
    d: "SampledForm | None" = None
    description: str = ""
    comass: object = None

    def __call__(self, x, vectors):
        if len(vectors) != self.degree:
            raise ValueError(f"{self.degree}-form evaluated on {len(vectors)} vectors")
        return self.fn(x, vectors)

    def scaled(self, s) -> "SampledForm":
        d = self.d.scaled(s) if self.d is not None else None
        cm = abs(s) * self.comass if self.comass is not None else None
        return SampledForm(self.degree, lambda x, v: s * self.fn(x, v), d,
                           f"{s}*({self.description})", cm)


def constant_form(components: dict, description: str = "") -> SampledForm:
    """``sum_I c_I dx_I`` with constant coefficients; keys are increasing index tuples."""
    degrees = {len(k) for k in components}
    if len(degrees) != 1:
        raise ValueError("all components must have the same degree")
    k = degrees.pop()

    def fn(x, vs):
        return sum(c * _det([[v[i] for i in idx] for v in vs]) for idx, c in components.items())

    zero = SampledForm(k + 1, lambda x, vs: 0, None, "0", 0)
    return SampledForm(k, fn, zero, description or f"const{components}")


def coefficient_form(degree: int, coeffs: Callable, d: SampledForm | None = None,
                     description: str = "", comass=None) -> SampledForm:
    """Form with point-dependent coefficients ``coeffs(x) -> {index tuple: value}``."""

    def fn(x, vs):
        return sum(c * _det([[v[i] for i in idx] for v in vs]) for idx, c in coeffs(x).items())

    return SampledForm(degree, fn, d, description, comass)


def dtheta(power: int = 0) -> SampledForm:
    """``z**power * dtheta`` around the z-axis in 3-space, with its derivative."""

    def fn(x, vs):
        v = vs[0]
        r2 = x[0] * x[0] + x[1] * x[1]
        return x[2] ** power * (x[0] * v[1] - x[1] * v[0]) / r2

    if power == 0:
        d = SampledForm(2, lambda x, vs: 0, None, "0", 0)
    else:
        def dfn(x, vs):
            a, b = vs
            r2 = x[0] * x[0] + x[1] * x[1]
            th_a = (x[0] * a[1] - x[1] * a[0]) / r2
            th_b = (x[0] * b[1] - x[1] * b[0]) / r2
            return power * x[2] ** (power - 1) * (a[2] * th_b - b[2] * th_a)
        d = SampledForm(2, dfn, None, f"{power}z^{power - 1} dz^dtheta")
    name = "dtheta" if power == 0 else f"z^{power} dtheta"
    return SampledForm(1, fn, d, name)


def area_form_cylinder() -> SampledForm:
    """``dz ^ (x dy - y dx)/rho``: the unit area form of coaxial cylinders, comass 1."""

    def fn(x, vs):
        a, b = vs
        rho = math.hypot(x[0], x[1])
        u_a = (x[0] * a[1] - x[1] * a[0]) / rho
        u_b = (x[0] * b[1] - x[1] * b[0]) / rho
        return a[2] * u_b - b[2] * u_a

    return SampledForm(2, fn, None, "cylinder area form", 1)


def wedge_eval(omega: SampledForm, t_covec, vectors, x):
    """``(omega ^ t)(v_1..v_n) = sum_i (-1)**(n-i) omega(v_1..^v_i..v_n) t(v_i)``."""
    n = len(vectors)
    if omega.degree != n - 1:
        raise ValueError(f"degree {omega.degree} form against a {n}-frame")
    dim = len(t_covec)
    if any(len(v) != dim for v in vectors) or len(x) != dim:
        raise ValueError("frame, point and covector dimensions differ")
    total = 0
    for i in range(n):
        ti = _dot(t_covec, vectors[i])
        if ti == 0:
            continue
        rest = tuple(vectors[:i]) + tuple(vectors[i + 1:])
        sign = 1 if (n - 1 - i) % 2 == 0 else -1
        total += sign * omega(x, rest) * ti
    return total


@dataclass(frozen=True)
class Atom:
    x: tuple
    frame: tuple
    covec: tuple
    weight: object


@dataclass(frozen=True)
class QuadratureSlice:
    """Finite measure on ``(x, frame, covector)`` atoms, all frames of size n."""

    n: int
    atoms: tuple = ()

    def __post_init__(self):
        for a in self.atoms:
            if a.weight < 0:
                raise ValueError(f"negative atom weight {a.weight}")
            if len(a.frame) != self.n:
                raise ValueError(f"atom frame has {len(a.frame)} vectors, expected {self.n}")

    @classmethod
    def from_arrays(cls, points, frames, covecs, weights) -> "QuadratureSlice":
        frames = [tuple(tuple(v) for v in f) for f in frames]
        n = len(frames[0]) if frames else 0
        atoms = tuple(Atom(tuple(p), f, tuple(c), w)
                      for p, f, c, w in zip(points, frames, covecs, weights))
        return cls(n, atoms)

    def scaled(self, s) -> "QuadratureSlice":
        return QuadratureSlice(self.n, tuple(Atom(a.x, a.frame, a.covec, a.weight * s) for a in self.atoms))

    def __add__(self, other: "QuadratureSlice") -> "QuadratureSlice":
        if other.n != self.n:
            raise ValueError("cannot add slices of different dimension")
        return QuadratureSlice(self.n, self.atoms + other.atoms)

    def total_weight(self):
        return sum((a.weight for a in self.atoms), 0)


def slice_current(nu: QuadratureSlice, omega: SampledForm):
    """``<T_nu, omega>`` for an (n-1)-form.

    The integrand is ``t ^ omega``, i.e. ``(-1)**(n-1)`` times :func:`wedge_eval`;
    this is the sign for which curves of slices obey Stokes in every dimension.
    """
    if omega.degree != nu.n - 1:
        raise ValueError(f"slice of dimension {nu.n} pairs with {nu.n - 1}-forms, got {omega.degree}")
    sign = 1 if (nu.n - 1) % 2 == 0 else -1
    total = 0
    for a in nu.atoms:
        if a.weight:
            total += a.weight * wedge_eval(omega, a.covec, a.frame, a.x)
    return sign * total


def frame_pairing(nu: QuadratureSlice, eta: SampledForm):
    """``<pi_1* nu, eta>``: the slice as an n-dimensional measure, covectors dropped."""
    if eta.degree != nu.n:
        raise ValueError(f"expected an {nu.n}-form")
    return sum((a.weight * eta(a.x, a.frame) for a in nu.atoms if a.weight), 0)


def check_null_boundary(nu: QuadratureSlice, test_forms: Sequence[SampledForm]) -> dict:
    """Max of ``|<T_nu, d alpha>|`` over (n-2)-forms alpha."""
    if nu.n < 2:
        raise ValueError("null-boundary test needs n >= 2")
    worst = 0
    per_form = {}
    for alpha in test_forms:
        if alpha.d is None:
            raise ValueError(f"test form {alpha.description!r} has no derivative callback")
        r = abs(slice_current(nu, alpha.d))
        per_form[alpha.description] = r
        worst = max(worst, r)
    return {"residual": worst, "per_form": per_form}


@dataclass(frozen=True)
class FrameMeasure:
    """Quadrature measure on ``(x, frame)``: the holonomic-measure side of a curve."""

    n: int
    atoms: tuple = ()

    def mass(self):
        return sum((w for _, _, w in self.atoms), 0)

    def pair(self, eta: SampledForm):
        return sum((w * eta(x, f) for x, f, w in self.atoms if w), 0)

    def frame_mass(self):
        """``sum w |v_1 ^ ... ^ v_n|``, the current mass of the frames (float)."""
        total = 0.0
        for _, f, w in self.atoms:
            gram = [[float(_dot(a, b)) for b in f] for a in f]
            total += float(w) * math.sqrt(max(_det(gram), 0.0))
        return total

    def __add__(self, other: "FrameMeasure") -> "FrameMeasure":
        return FrameMeasure(self.n, self.atoms + other.atoms)


@dataclass(frozen=True)
class SliceCurve:
    """Slices at times ``t_0 < ... < t_K`` plus optional midpoint slices.

    The time integral uses the midpoint rule on ``midslices`` when given,
    otherwise the trapezoid rule on the endpoint slices.
    """

    times: tuple
    slices: tuple
    midslices: tuple | None = None

    def __post_init__(self):
        if len(self.times) != len(self.slices) or not self.times:
            raise ValueError("need one slice per time")
        if any(b < a for a, b in zip(self.times, self.times[1:])):
            raise ValueError("times must be nondecreasing")
        if self.midslices is not None and len(self.midslices) != len(self.times) - 1:
            raise ValueError("need one midpoint slice per time step")
        ns = {s.n for s in self.slices}
        if len(ns) > 1:
            raise ValueError("all slices must have the same dimension")

    @property
    def n(self):
        return self.slices[0].n

    @property
    def K(self):
        return len(self.times) - 1

    def _steps(self, j0, j1):
        for i in range(j0, j1):
            dt = self.times[i + 1] - self.times[i]
            if self.midslices is not None:
                yield dt, ((self.midslices[i], 1),)
            else:
                yield dt, ((self.slices[i], Fraction(1, 2)), (self.slices[i + 1], Fraction(1, 2)))

    def current(self, eta: SampledForm, j0: int = 0, j1: int | None = None):
        """``<T_gamma|[t_j0, t_j1], eta>`` by the time quadrature."""
        j1 = self.K if j1 is None else j1
        total = 0
        for dt, parts in self._steps(j0, j1):
            if dt:
                total += dt * sum(c * frame_pairing(s, eta) for s, c in parts)
        return total

    def reversed(self) -> "SliceCurve":
        T = self.times[-1]
        t0 = self.times[0]
        times = tuple(T + t0 - t for t in reversed(self.times))
        mids = tuple(reversed(self.midslices)) if self.midslices is not None else None
        return SliceCurve(times, tuple(reversed(self.slices)), mids)

    def concat(self, other: "SliceCurve") -> "SliceCurve":
        shift = self.times[-1] - other.times[0]
        times = self.times + tuple(t + shift for t in other.times[1:])
        if (self.midslices is None) != (other.midslices is None):
            raise ValueError("cannot mix midpoint and trapezoid curves")
        mids = None if self.midslices is None else self.midslices + other.midslices
        return SliceCurve(times, self.slices + other.slices[1:], mids)


def curve_boundary_residual(gamma: SliceCurve, omega: SampledForm, j: int | None = None):
    """``|<T_gamma|[0,t_j], d omega> - (<T_nu_j, omega> - <T_nu_0, omega>)|``."""
    if omega.d is None:
        raise ValueError(f"form {omega.description!r} has no derivative callback")
    j = gamma.K if j is None else j
    if not 0 <= j <= gamma.K:
        raise ValueError(f"time index {j} outside 0..{gamma.K}")
    lhs = gamma.current(omega.d, 0, j)
    rhs = slice_current(gamma.slices[j], omega) - slice_current(gamma.slices[0], omega)
    return abs(lhs - rhs)


def mass_of_curve(gamma: SliceCurve, form_battery: Sequence[SampledForm]) -> dict:
    """Lower bound on the curve mass from comass-bounded n-forms.

    Uses the finest stored partition; a form with comass bound ``c`` contributes
    ``sum_i |<T_gamma|[t_i,t_i+1], eta>| / c``.
    """
    best = 0
    which = None
    for eta in form_battery:
        c = eta.comass if eta.comass is not None else 1
        if c == 0:
            continue
        s = sum(abs(gamma.current(eta, i, i + 1)) for i in range(gamma.K)) / c
        if s > best:
            best, which = s, eta.description
    return {"lower_bound": best, "form": which, "is_lower_bound": True}


def associated_measure(gamma: SliceCurve) -> FrameMeasure:
    """Time quadrature of the frame measures of the slices."""
    atoms = []
    for dt, parts in gamma._steps(0, gamma.K):
        if not dt:
            continue
        for s, c in parts:
            atoms.extend((a.x, a.frame, a.weight * dt * c) for a in s.atoms if a.weight)
    return FrameMeasure(gamma.n, tuple(atoms))


def flat_distance_bracket(gamma: SliceCurve, battery: Sequence[SampledForm]) -> dict:
    """Bracket the flat distance between the endpoint slices of ``gamma``.

    Upper: frame mass of the associated measure of the connecting curve.
    Lower: ``|<T_nu_K - T_nu_0, omega>| / comass(d omega)`` over the battery.
    """
    upper = associated_measure(gamma).frame_mass()
    lower = 0.0
    a, b = gamma.slices[0], gamma.slices[-1]
    for omega in battery:
        if omega.d is None or omega.d.comass is None or omega.d.comass == 0:
            continue
        v = abs(float(slice_current(b, omega) - slice_current(a, omega))) / float(omega.d.comass)
        lower = max(lower, v)
    return {"lower": lower, "upper": upper}


def continuity_modulus(gamma: SliceCurve, test_fns: Sequence[Callable]) -> dict:
    """Discrete weak-* modulus: ``max_j |F(t_j+1) - F(t_j)|`` for ``F(t) = int f dnu_t``.

    ``f(x, frame, covec)`` are test functions; ``rate`` divides by the step.
    """
    jump = 0.0
    rate = 0.0
    for f in test_fns:
        vals = [sum(float(a.weight) * f(a.x, a.frame, a.covec) for a in s.atoms) for s in gamma.slices]
        for i in range(gamma.K):
            dv = abs(vals[i + 1] - vals[i])
            dt = float(gamma.times[i + 1] - gamma.times[i])
            jump = max(jump, dv)
            if dt > 0:
                rate = max(rate, dv / dt)
    return {"max_jump": jump, "max_rate": rate, "finite": math.isfinite(rate)}


def _circle_slice(radius, z, N, frames):
    h = 2 * math.pi * radius / N
    pts, frs, covs, ws = [], [], [], []
    for i in range(N):
        if frames == "exact":
            th = 2 * math.pi * i / N
            p = (radius * math.cos(th), radius * math.sin(th), z)
            tan = (-math.sin(th), math.cos(th), 0.0)
        elif frames == "polygon":
            a0, a1 = 2 * math.pi * i / N, 2 * math.pi * (i + 1) / N
            q0 = (radius * math.cos(a0), radius * math.sin(a0))
            q1 = (radius * math.cos(a1), radius * math.sin(a1))
            p = ((q0[0] + q1[0]) / 2, (q0[1] + q1[1]) / 2, z)
            tan = ((q1[0] - q0[0]) / h, (q1[1] - q0[1]) / h, 0.0)
        else:
            raise ValueError(f"unknown frame mode {frames!r}")
        pts.append(p)
        frs.append(((0.0, 0.0, 1.0), tan))
        covs.append((0.0, 0.0, 1.0))
        ws.append(h)
    return QuadratureSlice.from_arrays(pts, frs, covs, ws)


def cylinder_fixture(radius, T, K: int, N: int, frames: str = "polygon") -> SliceCurve:
    """Curve of circle slices sweeping the cylinder ``rho = radius, 0 <= z <= T``.

    The time function is the height, so the frames are ``(e_z, unit tangent)``
    with covector ``dz`` and arclength weights.  ``frames="exact"`` samples the
    smooth circle at uniform nodes; ``"polygon"`` uses the chord midpoints of
    the inscribed N-gon, a second-order discretization.
    """
    if not radius > 0:
        raise ValueError("radius must be positive")
    if T < 0:
        raise ValueError("height T must be nonnegative")
    if K < 2 or N < 2:
        raise ValueError("need at least 2 time steps and 2 atoms")
    times = tuple(T * j / K for j in range(K + 1))
    slices = tuple(_circle_slice(radius, t, N, frames) for t in times)
    mids = tuple(_circle_slice(radius, (a + b) / 2, N, frames) for a, b in zip(times, times[1:]))
    return SliceCurve(times, slices, mids)


def circle_battery() -> list[tuple[SampledForm, Callable]]:
    """1-forms with closed-form integrals over the circle ``(radius, z)``."""
    dz = constant_form({(2,): 1}, "dz")
    xdy = coefficient_form(1, lambda x: {(1,): x[0]},
                           constant_form({(0, 1): 1}, "dx^dy"), "x dy")
    return [
        (dtheta(0), lambda r, z: 2 * math.pi),
        (dz, lambda r, z: 0.0),
        (dtheta(1), lambda r, z: 2 * math.pi * z),
        (dtheta(3), lambda r, z: 2 * math.pi * z ** 3),
        (xdy, lambda r, z: math.pi * r * r),
    ]


def cylinder_identity_error(gamma: SliceCurve, radius, battery=None) -> float:
    """Max over slices and battery of ``|line integral - slice current|``."""
    battery = circle_battery() if battery is None else battery
    worst = 0.0
    for t, nu in zip(gamma.times, gamma.slices):
        for omega, exact in battery:
            worst = max(worst, abs(exact(radius, t) - slice_current(nu, omega)))
    return worst


def cylinder_convergence(radius=1.0, T=1.0, levels: Sequence[tuple[int, int]] = ((16, 4), (32, 8), (64, 16)),
                         frames: str = "polygon", c3_form: SampledForm | None = None) -> list[dict]:
    """Rows ``{N, K, identity_error, c3_residual}`` for each refinement level."""
    c3_form = dtheta(3) if c3_form is None else c3_form
    rows = []
    for N, K in levels:
        g = cylinder_fixture(radius, T, K, N, frames)
        rows.append({
            "N": N,
            "K": K,
            "identity_error": cylinder_identity_error(g, radius),
            "c3_residual": float(curve_boundary_residual(g, c3_form)),
        })
    return rows


def convergence_order(errors: Sequence[float], ratio: float = 2.0) -> list[float]:
    return [math.log(a / b, ratio) if a > 0 and b > 0 else math.inf for a, b in zip(errors, errors[1:])]


# Discrete slices on a complex ---------------------------------------------------------


def _threads(n_jobs):
    cap = os.environ.get("HOLOKAM_THREADS")
    limit = int(cap) if cap else (os.cpu_count() or 1)
    return max(1, min(limit, n_jobs))


@dataclass
class SliceKernel:
    kernel: CostKernel
    values: list
    infeasible: list = field(default_factory=list)
    sentinel: object = None


def _pair_value(L, c, delta, arithmetic, tol, mass_mode):
    lp = _filling_lp(L, c, mass=delta, mass_mode=mass_mode)
    sol = solve_lp(lp, arithmetic, tol)
    if sol.status == OPTIMAL:
        return sol.value
    if sol.status == INFEASIBLE:
        return None
    raise ValueError("mass-constrained filling LP is unbounded")  # pragma: no cover


def slice_filling_costs(cx: SimplicialComplex, S: Sequence[Chain], L: DiscreteLagrangian, delta,
                        arithmetic: str = "rational", tol=None, mass_mode: str = "eq") -> list[list]:
    """``cost[a][b]`` = min action over fillings of ``S[b] - S[a]`` with mass ``delta`` (None if none)."""
    if not S:
        raise ValueError("empty slice set")
    for z in S:
        if z.degree != cx.dimension - 1:
            raise ValueError(f"slices must be {cx.dimension - 1}-chains")
    n = len(S)
    jobs = [(a, b) for a in range(n) for b in range(n)]
    out = [[None] * n for _ in range(n)]

    def run(ab):
        a, b = ab
        return ab, _pair_value(L, S[b] - S[a], delta, arithmetic, tol, mass_mode)

    with ThreadPoolExecutor(max_workers=_threads(len(jobs))) as ex:
        for (a, b), v in ex.map(run, jobs):
            out[a][b] = v
    return out


def build_slice_kernel(cx: SimplicialComplex, S: Sequence[Chain], L: DiscreteLagrangian, delta,
                       arithmetic: str = "rational", tol=None, mass_mode: str = "eq",
                       labels: Sequence[str] | None = None) -> SliceKernel:
    """One-step kernel over a finite set of closed chains.

    ``h1[a][b]`` is the least action of a measure with boundary ``S[b] - S[a]``
    and total weight ``delta`` (``mass_mode="le"``: at most ``delta``).
    Infeasible pairs get a finite sentinel large enough that no cycle through
    it beats a feasible cycle, and are listed in ``infeasible``.
    """
    costs = slice_filling_costs(cx, S, L, delta, arithmetic, tol, mass_mode)
    n = len(S)
    bad = [(a, b) for a in range(n) for b in range(n) if costs[a][b] is None]
    for a in range(n):
        if all(costs[a][b] is None for b in range(n)):
            raise ValueError(f"slice {a} has no feasible transition")
    finite = [abs(v) for row in costs for v in row if v is not None]
    top = max(finite) if finite else 0
    sentinel = 2 * n * (top + 1)
    if arithmetic == "float":
        sentinel = float(sentinel)
    h1 = [[sentinel if v is None else v for v in row] for row in costs]
    k = CostKernel(h1, delta, labels=labels, arithmetic=arithmetic)
    return SliceKernel(k, costs, bad, sentinel)


def direct_lp_gap(cx: SimplicialComplex, S: Sequence[Chain], L: DiscreteLagrangian, sk: SliceKernel,
                  steps: int = 2, arithmetic: str = "rational", tol=None, mass_mode: str = "eq") -> dict:
    """Compare the min-plus power ``h_{steps*delta}`` with the direct LP at that mass.

    Diagnostic only; ``gap = power - direct`` is nonnegative whenever both exist.
    """
    delta = sk.kernel.delta
    direct = slice_filling_costs(cx, S, L, steps * delta, arithmetic, tol, mass_mode)
    power = sk.kernel.power(steps)
    n = len(S)
    gaps = {}
    for a in range(n):
        for b in range(n):
            if direct[a][b] is None or sk.values[a][b] is None and steps == 1:
                continue
            gaps[(a, b)] = power[a, b] - direct[a][b]
    worst = max(gaps.values(), default=0)
    return {"steps": steps, "max_gap": worst, "gaps": gaps}


@dataclass
class ExactDescentReport:
    shift: object
    deviation: object
    per_node: dict
    c0: object
    tolerance: object
    passed: bool

    def as_dict(self) -> dict:
        return {
            "shift": self.shift,
            "deviation": self.deviation,
            "per_node": self.per_node,
            "c0": self.c0,
            "tolerance": self.tolerance,
            "passed": self.passed,
        }


def exactdescent_check(u: Sequence, S: Sequence[Chain], omega: Cochain, c0=None,
                       nodes: Sequence[int] | None = None, tol=0) -> ExactDescentReport:
    """Test ``<z, omega> = u(z) + const`` over the chosen slices.

    The constant is the minimax fit, so the deviation is half the spread of
    ``<z, omega> - u(z)``; a constant shift of ``u`` leaves it unchanged.
    """
    nodes = list(range(len(S))) if nodes is None else list(nodes)
    if not nodes:
        raise ValueError("no slices to check")
    diffs = {i: pair(S[i], omega) - u[i] for i in nodes}
    hi, lo = max(diffs.values()), min(diffs.values())
    shift = (hi + lo) / 2
    dev = (hi - lo) / 2
    if isinstance(shift, Fraction) and shift.denominator == 1:
        shift = shift.numerator
    if isinstance(dev, Fraction) and dev.denominator == 1:
        dev = dev.numerator
    per_node = {i: d - shift for i, d in diffs.items()}
    return ExactDescentReport(shift, dev, per_node, c0, tol, dev <= tol)


def point_slices(cx: SimplicialComplex) -> list[Chain]:
    """Every vertex as a 0-chain, the slices of a graph."""
    return [Chain(0, {i: 1}) for i in range(cx.num_cells(0))]


def slices_from_json(cx: SimplicialComplex, data) -> list[Chain]:
    """Slice-set file: a JSON list of sparse chains ``{"v0,v1": coeff}`` (or full chain objects)."""
    from .complex import chain_from_json

    if not isinstance(data, list) or not data:
        raise ValueError("slice set must be a nonempty JSON list")
    out = []
    for item in data:
        if isinstance(item, dict) and "coefficients" in item:
            out.append(chain_from_json(cx, item))
        else:
            out.append(chain_from_json(cx, {"degree": cx.dimension - 1, "coefficients": item}))
    return out
