"""Weak KAM machinery on finite spaces via min-plus spectral theory.

A :class:`CostKernel` holds the one-step cost ``h1[x, y]`` for the mass
quantum ``delta``.  The cost at mass ``j * delta`` is the j-fold min-plus
power of ``h1``, so the inf-convolution (semigroup) identity holds on the
mass grid by construction.  The Lax-Oleinik operator is

    phi_j u (x) = min_y u(y) + h_j(y, x),

and a weak KAM solution is a pair ``(u, c0)`` with ``u = phi_j u + c0 j delta``
for every ``j``.  Then ``-c0 * delta`` is the min-plus eigenvalue of ``h1``,
i.e. its minimum cycle mean.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import _backend as mp


def _exact(v):
    if isinstance(v, Fraction):
        return v.numerator if v.denominator == 1 else v
    return v


def _as_matrix(rows, arithmetic):
    if arithmetic == "rational":
        arr = np.empty((len(rows), len(rows[0]) if len(rows) else 0), dtype=object)
        for i, row in enumerate(rows):
            for j, v in enumerate(row):
                if isinstance(v, float):
                    raise TypeError("float entry in a rational kernel; pass arithmetic='float'")
                arr[i, j] = _exact(Fraction(v))
        return arr
    return np.array(rows, dtype=np.float64)


def _infer_arithmetic(rows):
    for row in rows:
        for v in row:
            if isinstance(v, (float, np.floating)):
                return "float"
    return "rational"


class FiniteMetricSpace:
    """Labelled points with a symmetric distance matrix satisfying the metric axioms."""

    def __init__(self, dist, labels: Sequence | None = None, arithmetic: str | None = None,
                 tol: float = 1e-12):
        rows = [list(r) for r in dist]
        self.arithmetic = arithmetic or _infer_arithmetic(rows)
        self.dist = _as_matrix(rows, self.arithmetic)
        n = self.dist.shape[0]
        if self.dist.shape != (n, n):
            raise ValueError("distance matrix must be square")
        self.labels = list(labels) if labels is not None else [str(i) for i in range(n)]
        if len(self.labels) != n:
            raise ValueError(f"{len(self.labels)} labels for {n} points")
        t = 0 if self.arithmetic == "rational" else tol
        d = self.dist
        for x in range(n):
            if d[x, x] != 0:
                raise ValueError(f"dist({self.labels[x]}, {self.labels[x]}) is not zero")
            for y in range(n):
                if abs(d[x, y] - d[y, x]) > t:
                    raise ValueError(f"distance is not symmetric at ({self.labels[x]}, {self.labels[y]})")
                if x != y and d[x, y] <= 0:
                    raise ValueError(f"distinct points {self.labels[x]}, {self.labels[y]} at distance 0")
                for z in range(n):
                    if d[x, z] > d[x, y] + d[y, z] + t:
                        raise ValueError(
                            f"triangle inequality fails for ({self.labels[x]}, {self.labels[y]}, {self.labels[z]})")

    def __len__(self):
        return self.dist.shape[0]


class CostKernel:
    """One-step min-plus kernel with a cache of its powers.

    Parameters
    ----------
    h1
        Square matrix, ``h1[x][y]`` = cost of moving mass ``delta`` from x to y.
    delta
        Mass quantum, > 0.
    space
        Optional :class:`FiniteMetricSpace` (needed for hypothesis reports).
    arithmetic
        ``"rational"`` (exact) or ``"float"``; inferred from the entries by default.
    """

    def __init__(self, h1, delta=1, space: FiniteMetricSpace | None = None,
                 labels: Sequence | None = None, arithmetic: str | None = None):
        rows = [list(r) for r in h1]
        self.arithmetic = arithmetic or _infer_arithmetic(rows)
        self.h1 = _as_matrix(rows, self.arithmetic)
        n = self.h1.shape[0]
        if n == 0 or self.h1.shape != (n, n):
            raise ValueError("kernel must be a nonempty square matrix")
        if self.arithmetic == "float" and not np.all(np.isfinite(self.h1)):
            raise ValueError("kernel entries must be finite")
        if self.arithmetic == "rational":
            delta = _exact(Fraction(delta))
        if not delta > 0:
            raise ValueError("mass quantum delta must be positive")
        self.delta = delta
        if space is not None and len(space) != n:
            raise ValueError(f"space has {len(space)} points, kernel has {n}")
        self.space = space
        self.labels = list(labels) if labels is not None else (
            space.labels if space is not None else [str(i) for i in range(n)])
        self._powers = {1: self.h1}
        self._lock = threading.Lock()
        self._eig = None

    def __len__(self):
        return self.h1.shape[0]

    @property
    def tol(self):
        return 0 if self.arithmetic == "rational" else 1e-9 * (1 + float(np.max(np.abs(self.h1))))

    def power(self, j: int):
        if j < 1:
            raise ValueError("power must be >= 1")
        cached = self._powers.get(j)
        if cached is not None:
            return cached
        half = j // 2
        result = mp.product(self.power(half), self.power(j - half))
        with self._lock:
            self._powers.setdefault(j, result)
        return self._powers[j]

    def eigenvalue(self):
        """Min-plus eigenvalue of ``h1`` (minimum cycle mean), exact in rational mode."""
        if self._eig is None:
            self._eig = mp.karp(self.h1)
        return self._eig

    def to_rows(self):
        return [[_exact(v) if self.arithmetic == "rational" else float(v) for v in row] for row in self.h1]


@dataclass
class WeakKamSolution:
    u: list
    c0: object
    residual: object
    eigenvalue: object
    critical: list = field(default_factory=list)
    anchors: list | None = None


@dataclass
class HypothesisReport:
    """Constants of the Lipschitz and superlinearity hypotheses on the mass grid.

    ``K1_table[K0]`` is the smallest K1 that works for all pairs and all
    grid masses: the larger of the finite scan up to ``K_max`` steps and the
    tail bound derived from the eigenvalue.
    """

    P_best: object
    K1_table: dict
    K1_scan: dict
    K1_tail: dict
    K_max: int
    grid_ratio: object = None
    lipschitz: object = None
    lipschitz_bound: object = None
    lipschitz_ok: bool | None = None


def minplus_power(k: CostKernel, j: int):
    return k.power(j)


def lax_oleinik(k: CostKernel, u, j: int = 1):
    """``phi_{j delta} u (x) = min_y u(y) + h_{j delta}(y, x)``."""
    u = _vector(u, k)
    out = mp.vecmat(u, k.power(j))
    return [_exact(v) for v in out] if k.arithmetic == "rational" else out


def _vector(u, k: CostKernel):
    if k.arithmetic == "rational":
        arr = np.empty(len(u), dtype=object)
        for i, v in enumerate(u):
            arr[i] = _exact(Fraction(v))
        return arr
    return np.asarray(u, dtype=np.float64)


def critical_value(k: CostKernel):
    """``c0 = -lambda / delta`` with lambda the minimum cycle mean of ``h1``."""
    lam = k.eigenvalue()
    if k.arithmetic == "rational":
        return _exact(-Fraction(lam) / Fraction(k.delta))
    return -lam / k.delta


def _reduced_closure(k: CostKernel):
    lam = k.eigenvalue()
    bar = k.h1 - lam
    return mp.closure(bar)


def critical_nodes(k: CostKernel) -> list[int]:
    """Nodes on a cycle of mean exactly the eigenvalue."""
    plus = _reduced_closure(k)
    t = k.tol
    return [z for z in range(len(k)) if abs(plus[z, z]) <= t]


def fixed_point_residual(k: CostKernel, u, c0, j_max: int):
    uu = _vector(u, k)
    worst = 0
    for j in range(1, j_max + 1):
        shift = c0 * j * k.delta
        phi = mp.vecmat(uu, k.power(j))
        for x in range(len(k)):
            d = abs(uu[x] - phi[x] - shift)
            if d > worst:
                worst = d
    return _exact(worst) if k.arithmetic == "rational" else float(worst)


def solve_weak_kam(k: CostKernel, anchors: Sequence[int] | None = None,
                   j_check: int | None = None) -> WeakKamSolution:
    """Additive eigenvector of the Lax-Oleinik semigroup.

    ``u(x) = min_z star[z, x]`` over critical nodes ``z`` of the reduced
    kernel ``h1 - lambda``, where ``star`` is its min-plus Kleene star.
    ``anchors`` restricts the minimum to the critical nodes listed (each
    critical column is itself a solution).
    """
    plus = _reduced_closure(k)
    t = k.tol
    n = len(k)
    crit = [z for z in range(n) if abs(plus[z, z]) <= t]
    use = crit
    if anchors is not None:
        use = [z for z in anchors if z in crit]
        if not use:
            raise ValueError(f"none of the anchors {list(anchors)} is critical; critical nodes: {crit}")
    star = plus.copy()
    for z in range(n):
        star[z, z] = 0 if k.arithmetic == "rational" else 0.0
    u = [min(star[z, x] for z in use) for x in range(n)]
    if k.arithmetic == "rational":
        u = [_exact(v) for v in u]
    else:
        u = [float(v) for v in u]
    c0 = critical_value(k)
    j_check = j_check if j_check is not None else 2 * n
    res = fixed_point_residual(k, u, c0, j_check)
    return WeakKamSolution(u, c0, res, k.eigenvalue(), crit, None if anchors is None else use)


def is_dominated(k: CostKernel, u, c, K_max: int) -> bool:
    """``u(y) - u(x) <= h_{j delta}(x, y) + c j delta`` for all pairs and 1 <= j <= K_max."""
    if K_max < 1:
        raise ValueError("K_max must be >= 1")
    uu = _vector(u, k)
    t = k.tol
    n = len(k)
    for j in range(1, K_max + 1):
        H = k.power(j)
        shift = c * j * k.delta
        for x in range(n):
            for y in range(n):
                if uu[y] - uu[x] > H[x, y] + shift + t:
                    return False
    return True


def single_step_dominated(k: CostKernel, u, c) -> bool:
    """Equivalent one-step form ``u <= phi_delta u + c delta``."""
    uu = _vector(u, k)
    phi = mp.vecmat(uu, k.h1)
    t = k.tol
    return all(uu[x] <= phi[x] + c * k.delta + t for x in range(len(k)))


def lipschitz_constant(space: FiniteMetricSpace, u):
    n = len(space)
    best = 0
    for x in range(n):
        for y in range(x + 1, n):
            d = space.dist[x, y]
            r = abs(u[x] - u[y]) / d if space.arithmetic == "float" else Fraction(abs(u[x] - u[y])) / d
            if r > best:
                best = r
    return _exact(best) if space.arithmetic == "rational" else float(best)


def _grid_steps(d, delta):
    if isinstance(d, (int, Fraction)) and isinstance(delta, (int, Fraction)):
        q = Fraction(d) / Fraction(delta)
    else:
        q = d / delta
    return max(1, math.ceil(q))


def hypothesis_report(k: CostKernel, K0_list: Sequence = (1,), K_max: int | None = None,
                      solution: WeakKamSolution | None = None) -> HypothesisReport:
    """Best constants P and K1(K0) on the mass grid; optionally checks the Lipschitz bound.

    The grid stand-in for ``h_{dist(x, y)}`` uses ``ceil(dist / delta)`` steps.
    """
    if k.space is None:
        raise ValueError("hypothesis report needs a metric space")
    n = len(k)
    K_max = K_max if K_max is not None else 2 * n
    d = k.space.dist
    exact = k.arithmetic == "rational"
    div = (lambda a, b: Fraction(a) / Fraction(b)) if exact else (lambda a, b: a / b)
    P = None
    ratio = None
    for x in range(n):
        for y in range(n):
            if x == y:
                continue
            steps = _grid_steps(d[x, y], k.delta)
            val = div(k.power(steps)[x, y], d[x, y])
            P = val if P is None or val > P else P
            rho = div(steps * k.delta, d[x, y])
            ratio = rho if ratio is None or rho > ratio else ratio
    P = 0 if P is None else P
    lam = k.eigenvalue()
    beta = None
    plus = _reduced_closure(k)
    for x in range(n):
        for y in range(n):
            if beta is None or plus[x, y] < beta:
                beta = plus[x, y]
    dmax = max((d[x, y] for x in range(n) for y in range(n)), default=0)
    table, scan_t, tail_t = {}, {}, {}
    for K0 in K0_list:
        scan = None
        for j in range(1, K_max + 1):
            H = k.power(j)
            for x in range(n):
                for y in range(n):
                    val = div(K0 * d[x, y] - H[x, y], j * k.delta)
                    scan = val if scan is None or val > scan else scan
        tail = max(-div(lam, k.delta), div(K0 * dmax - beta, (K_max + 1) * k.delta) - div(lam, k.delta))
        K1 = max(scan, tail)
        if exact:
            scan, tail, K1 = _exact(scan), _exact(tail), _exact(K1)
        table[K0], scan_t[K0], tail_t[K0] = K1, scan, tail
    rep = HypothesisReport(_exact(P) if exact else float(P), table, scan_t, tail_t, K_max,
                           _exact(ratio) if exact and ratio is not None else ratio)
    if solution is not None:
        lip = lipschitz_constant(k.space, solution.u)
        bound = abs(solution.c0) * (rep.grid_ratio or 1) + rep.P_best
        rep.lipschitz = lip
        rep.lipschitz_bound = _exact(bound) if exact else bound
        rep.lipschitz_ok = lip <= bound + k.tol
    return rep
