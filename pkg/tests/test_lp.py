import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st
from scipy.optimize import linprog

from holokam.lp import (INFEASIBLE, OPTIMAL, UNBOUNDED, LinearProgram, farkas_certificate, read_triplets,
                        residuals, solve_lp)


def random_feasible_bounded(rng, m, n):
    """Feasible by construction (b = A x0), bounded by construction (c = A^T y0 + s, s >= 0)."""
    A = [[rng.randint(-4, 4) for _ in range(n)] for _ in range(m)]
    x0 = [rng.randint(0, 3) for _ in range(n)]
    y0 = [rng.randint(-3, 3) for _ in range(m)]
    b = [sum(A[i][j] * x0[j] for j in range(n)) for i in range(m)]
    c = [sum(A[i][j] * y0[i] for i in range(m)) + rng.randint(0, 4) for j in range(n)]
    rows = [{j: A[i][j] for j in range(n) if A[i][j]} for i in range(m)]
    return LinearProgram(c, rows, b), A


def test_single_variable():
    sol = solve_lp(LinearProgram([1], [{0: 1}], [1]))
    assert sol.status == OPTIMAL and sol.x == [1] and sol.y == [1] and sol.value == 1


def test_unbounded_has_ray():
    sol = solve_lp(LinearProgram([-1], [], []))
    assert sol.status == UNBOUNDED
    assert sol.ray == [1]


def test_infeasible_has_farkas_ray():
    p = LinearProgram([0], [{0: 1}], [-1])
    sol = solve_lp(p)
    assert sol.status == INFEASIBLE
    assert sol.ray == [-1]
    res = farkas_certificate(p)
    assert not res.feasible and res.y == [-1]


def test_dimension_mismatch():
    with pytest.raises(ValueError):
        LinearProgram([1, 2], [{0: 1}], [1, 2])
    with pytest.raises(ValueError):
        LinearProgram([1], [{3: 1}], [1])


def test_empty_row_consistent_and_not():
    assert solve_lp(LinearProgram([1], [{}, {0: 1}], [0, 2])).value == 2
    sol = solve_lp(LinearProgram([1], [{}, {0: 1}], [3, 2]))
    assert sol.status == INFEASIBLE and sol.ray[0] == 1


def test_redundant_rows():
    p = LinearProgram([1, 1], [{0: 1, 1: 1}, {0: 2, 1: 2}], [2, 4])
    sol = solve_lp(p)
    assert sol.status == OPTIMAL and sol.value == 2
    r = residuals(p, sol)
    assert r["primal"] == 0 and r["dual"] <= 0 and r["gap"] == 0


@given(st.integers(0, 100_000))
def test_random_duality_exact(seed):
    rng = random.Random(seed)
    p, _ = random_feasible_bounded(rng, rng.randint(1, 5), rng.randint(1, 7))
    sol = solve_lp(p)
    assert sol.status == OPTIMAL
    r = residuals(p, sol)
    assert r["primal"] == 0
    assert r["dual"] == 0
    assert r["complementary_slackness"] == 0
    assert r["gap"] == 0
    assert all(isinstance(v, (int, Fraction)) for v in sol.x)


@given(st.integers(0, 100_000))
def test_value_matches_scipy(seed):
    rng = random.Random(seed)
    p, A = random_feasible_bounded(rng, rng.randint(1, 4), rng.randint(2, 6))
    ref = linprog(p.c, A_eq=A, b_eq=p.b, bounds=[(0, None)] * len(p.c), method="highs")
    sol = solve_lp(p)
    assert ref.status == 0
    assert float(sol.value) == pytest.approx(ref.fun, abs=1e-7)
    fsol = solve_lp(p, "float", 1e-9)
    assert fsol.value == pytest.approx(ref.fun, abs=1e-7)


@given(st.integers(0, 100_000))
def test_infeasible_certificates_are_valid(seed):
    rng = random.Random(seed)
    m, n = rng.randint(1, 4), rng.randint(1, 5)
    rows = [{j: rng.randint(0, 3) for j in range(n)} for _ in range(m)]
    p = LinearProgram([1] * n, rows, [-rng.randint(1, 5)] + [rng.randint(0, 5) for _ in range(m - 1)])
    res = farkas_certificate(p)
    if res.feasible:
        assert all(sum(v * res.x[j] for j, v in r.items()) == bi for r, bi in zip(p.rows, p.b))
        return
    y = res.y
    for j in range(n):
        assert sum(y[i] * p.rows[i].get(j, 0) for i in range(m)) <= 0
    assert sum(yi * bi for yi, bi in zip(y, p.b)) > 0


@given(st.integers(0, 100_000))
def test_unbounded_rays_are_valid(seed):
    rng = random.Random(seed)
    n = rng.randint(2, 5)
    # x0 - x1 + ... free direction along (1, 1, 0, ...) with negative cost
    rows = [{0: 1, 1: -1}]
    c = [0] + [rng.randint(0, 3) for _ in range(n - 1)]
    c[0] = -c[1] - 1
    p = LinearProgram(c, rows, [rng.randint(0, 3)])
    sol = solve_lp(p)
    assert sol.status == UNBOUNDED
    d = sol.ray
    assert all(v >= 0 for v in d)
    assert sum(ci * di for ci, di in zip(c, d)) < 0
    assert sum(v * d[j] for j, v in rows[0].items()) == 0


def test_bland_is_deterministic():
    rng = random.Random(7)
    p, _ = random_feasible_bounded(rng, 4, 7)
    a, b = solve_lp(p), solve_lp(p)
    assert a.x == b.x and a.y == b.y and a.pivots == b.pivots


def test_degenerate_cycling_example_terminates():
    # Beale's classic cycling example in equality form with slacks
    c = [Fraction(-3, 4), 150, Fraction(-1, 50), 6, 0, 0, 0]
    rows = [
        {0: Fraction(1, 4), 1: -60, 2: Fraction(-1, 25), 3: 9, 4: 1},
        {0: Fraction(1, 2), 1: -90, 2: Fraction(-1, 50), 3: 3, 5: 1},
        {2: 1, 6: 1},
    ]
    sol = solve_lp(LinearProgram(c, rows, [0, 0, 1]))
    assert sol.status == OPTIMAL and sol.value == Fraction(-1, 20)


def test_triplet_roundtrip(tmp_path):
    p = LinearProgram([1, Fraction(2, 3)], [{0: 1, 1: -1}, {1: 5}], [Fraction(1, 2), 3])
    path = tmp_path / "lp.txt"
    p.dump_triplets(path)
    q = read_triplets(path)
    assert q.c == p.c and q.b == p.b and q.rows == p.rows
