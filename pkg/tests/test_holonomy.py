import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from holokam.complex import Chain, Cochain, boundary, coboundary, grid_disk, pair, torus_grid
from holokam.holonomy import (DiscreteLagrangian, HolonomicMeasure, NotABoundary, Unbounded, action,
                              boundary_of_measure, is_boundary, lagrangian_from_json, minimize_action,
                              q_cone_member, r_cone_certificate, verify_certificate)


def square_fixture():
    cx = grid_disk([0, 1, 2], [0, 1, 2])
    c = cx.chain({(0, 3): 1, (3, 4): 1, (4, 1): 1, (1, 0): 1})
    return cx, c


def unique_filling_cost(cx, w: Chain, L):
    """On a disk a filling is unique, so the optimum is the cost of the signed chain itself."""
    return sum((L.plus[i] * v if v > 0 else L.minus[i] * -v) for i, v in w.items())


def random_lagrangian(cx, rng, lo=0):
    nf = cx.num_cells(cx.dimension)
    plus = tuple(Fraction(rng.randint(lo, 6), rng.randint(1, 3)) for _ in range(nf))
    minus = tuple(Fraction(rng.randint(lo, 6), rng.randint(1, 3)) for _ in range(nf))
    return DiscreteLagrangian(cx, plus, minus, "random")


def test_square_fixture_value_and_certificate():
    cx, c = square_fixture()
    L = DiscreteLagrangian.area(cx)
    mu, cert = minimize_action(L, c)
    assert action(L, mu) == 1
    assert mu.mass() == 2
    assert cert.normalized and cert.c0 == Fraction(-1, 2)
    rep = verify_certificate(L, mu, cert, c)
    assert rep.passed
    assert rep.subsolution_defect <= 0 and rep.slackness_defect == 0 and rep.integral_g == 0
    assert rep.boundary_defect == 0
    assert pair(c, cert.omega) == 0


def test_action_identity_with_unnormalized_dual():
    cx, c = square_fixture()
    L = DiscreteLagrangian.area(cx)
    mu, cert = minimize_action(L, c, normalize=False)
    assert cert.c0 == 0 and not cert.normalized
    assert pair(c, cert.omega) == action(L, mu) == 1
    assert verify_certificate(L, mu, cert, c).passed


def test_zero_boundary_gives_zero():
    cx, _ = square_fixture()
    L = DiscreteLagrangian.area(cx)
    mu, cert = minimize_action(L, Chain.zero(1))
    assert action(L, mu) == 0 and mu.mass() == 0
    assert verify_certificate(L, mu, cert, Chain.zero(1)).passed


def test_float_mode_matches():
    cx, c = square_fixture()
    L = DiscreteLagrangian.area(cx)
    mu, cert = minimize_action(L, c, arithmetic="float", tol=1e-9)
    assert float(action(L, mu)) == pytest.approx(1.0)
    assert verify_certificate(L, mu, cert, c, tol=1e-9).passed


def test_nontrivial_cycle_is_not_a_boundary():
    cx = torus_grid(3, 3)
    z = cx.chain({(0, 3): 1, (3, 6): 1, (6, 0): 1})
    assert boundary(cx, z).is_zero()
    ok, y = is_boundary(cx, z)
    assert not ok
    assert coboundary(cx, y).is_zero()
    assert pair(z, y) > 0
    with pytest.raises(NotABoundary) as info:
        minimize_action(DiscreteLagrangian.area(cx), z)
    assert pair(z, info.value.ray) > 0


def test_negative_lagrangian_is_unbounded_with_cycle():
    cx = torus_grid(3, 3)
    L = DiscreteLagrangian.constant(cx, -1)
    with pytest.raises(Unbounded) as info:
        minimize_action(L, Chain.zero(1))
    ray = info.value.ray
    assert boundary_of_measure(ray).is_zero()
    assert action(L, ray) < 0


def test_measure_rejects_negative_weights():
    cx, _ = square_fixture()
    with pytest.raises(ValueError):
        HolonomicMeasure(cx, {0: -1}, {})


def test_from_chain_splits_signs():
    cx, _ = square_fixture()
    mu = HolonomicMeasure.from_chain(cx, Chain(2, {0: 2, 1: -3}))
    assert mu.plus == {0: 2} and mu.minus == {1: 3}
    assert mu.chain() == Chain(2, {0: 2, 1: -3}) and mu.mass() == 5


@given(st.integers(0, 100_000))
def test_disk_minimum_equals_unique_filling(seed):
    rng = random.Random(seed)
    cx = grid_disk([0, 1, 2, 4], [0, 1, 3])
    w = Chain(2, {i: rng.randint(-2, 2) for i in range(cx.num_cells(2))})
    c = boundary(cx, w)
    L = random_lagrangian(cx, rng)
    mu, cert = minimize_action(L, c)
    assert action(L, mu) == unique_filling_cost(cx, w, L)
    assert verify_certificate(L, mu, cert, c).passed
    expected_pair = action(L, mu) + cert.c0 * mu.mass()
    assert pair(c, cert.omega) == expected_pair


@given(st.integers(0, 100_000))
def test_exact_shift_changes_value_by_pairing(seed):
    rng = random.Random(seed)
    cx = grid_disk([0, 1, 2], [0, 1, 2])
    w = Chain(2, {i: rng.randint(-2, 2) for i in range(cx.num_cells(2))})
    c = boundary(cx, w)
    L = random_lagrangian(cx, rng, lo=2)
    theta = Cochain(1, tuple(Fraction(rng.randint(-1, 1), 4) for _ in range(cx.num_cells(1))))
    base, _ = minimize_action(L, c, normalize=False)
    Ls = L.plus_exact(theta)
    shifted, _ = minimize_action(Ls, c, normalize=False)
    assert action(Ls, shifted) == action(L, base) + pair(c, theta)


@given(st.integers(0, 100_000))
def test_q_and_r_cones_agree(seed):
    rng = random.Random(seed)
    cx = grid_disk([0, 1, 2], [0, 1, 2])
    w = Chain(2, {i: rng.randint(-1, 1) for i in range(cx.num_cells(2))})
    c = boundary(cx, w)
    L = random_lagrangian(cx, rng, lo=-3)
    q = q_cone_member(L, c)
    omega = r_cone_certificate(L, c)
    assert q == (omega is not None)
    if omega is not None:
        d = coboundary(cx, omega).values
        assert all(di <= l for di, l in zip(d, L.plus))
        assert all(-di <= l for di, l in zip(d, L.minus))
        assert pair(c, omega) >= 0


def test_perturbed_certificate_fails():
    cx, c = square_fixture()
    L = DiscreteLagrangian.area(cx)
    mu, cert = minimize_action(L, c)
    bad = type(cert)(Cochain(1, tuple(v + (1 if i == 0 else 0) for i, v in enumerate(cert.omega.values))),
                     cert.c0, cert.residual_plus, cert.residual_minus)
    assert not verify_certificate(L, mu, bad, c).passed


def test_lagrangian_json_forms():
    cx, _ = square_fixture()
    assert lagrangian_from_json(cx, "area").plus == DiscreteLagrangian.area(cx).plus
    assert set(lagrangian_from_json(cx, "constant:3/2").plus) == {Fraction(3, 2)}
    L = lagrangian_from_json(cx, {"costs": {"0+": 5}, "default": 1})
    assert L.plus[0] == 5 and L.minus[0] == 1
    with pytest.raises(ValueError):
        lagrangian_from_json(cx, {"costs": {"0+": 5}})
    with pytest.raises(ValueError):
        lagrangian_from_json(cx, "nonsense")
