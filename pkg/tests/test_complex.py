import json
import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from holokam.complex import (Chain, Cochain, ComplexError, DegreeError, SimplicialComplex, annulus,
                             boundary, chain_from_json, chain_to_json, check_invariants, coboundary,
                             complex_from_json, cylinder_grid, fan_disk, from_top_cells, grid_disk,
                             grid_graph, load_complex, pair, save_complex, torus_grid)

GENERATORS = [
    lambda: grid_disk([0, 1, 2, 3], [0, 1, 2]),
    lambda: fan_disk(7),
    lambda: annulus(6, 3),
    lambda: torus_grid(3, 4),
    lambda: cylinder_grid(2, 5),
    lambda: grid_graph([0, 1, 2], [0, 3]),
    lambda: from_top_cells([(0, 1, 2, 3), (1, 2, 3, 4)]),
]


def random_chain(cx, k, rng):
    coeffs = {}
    for i in range(cx.num_cells(k)):
        if rng.random() < 0.6:
            coeffs[i] = Fraction(rng.randint(-9, 9), rng.randint(1, 5))
    return Chain(k, coeffs)


def random_cochain(cx, k, rng):
    return Cochain(k, tuple(Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(cx.num_cells(k))))


@pytest.mark.parametrize("make", GENERATORS)
def test_generators_are_valid(make):
    cx = make()
    assert check_invariants(cx) == []


@pytest.mark.parametrize("make", GENERATORS)
def test_boundary_of_boundary_is_zero(make):
    cx = make()
    rng = random.Random(1)
    for k in range(2, cx.dimension + 1):
        for _ in range(5):
            a = random_chain(cx, k, rng)
            assert boundary(cx, boundary(cx, a)).is_zero()


@pytest.mark.parametrize("make", GENERATORS)
def test_coboundary_squares_to_zero(make):
    cx = make()
    rng = random.Random(2)
    for k in range(cx.dimension - 1):
        w = random_cochain(cx, k, rng)
        assert coboundary(cx, coboundary(cx, w)).is_zero()


@given(st.integers(0, 10_000), st.sampled_from(range(len(GENERATORS))))
def test_adjointness(seed, which):
    cx = GENERATORS[which]()
    rng = random.Random(seed)
    k = rng.randint(1, cx.dimension)
    a = random_chain(cx, k, rng)
    w = random_cochain(cx, k - 1, rng)
    assert pair(boundary(cx, a), w) == pair(a, coboundary(cx, w))


def test_boundary_of_triangle():
    cx = from_top_cells([(0, 1, 2)])
    b = boundary(cx, cx.chain({(0, 1, 2): 1}))
    assert b == cx.chain({(1, 2): 1, (0, 2): -1, (0, 1): 1})


def test_boundary_of_edge_and_reversal():
    cx = grid_graph([0, 1], [0])
    assert boundary(cx, cx.chain({(0, 1): 1})) == cx.chain({(1,): 1, (0,): -1})
    assert cx.chain({(1, 0): 1}) == -cx.chain({(0, 1): 1})


def test_square_boundary_is_a_cycle():
    cx = grid_disk([0, 1, 2], [0, 1, 2])
    c = cx.chain({(0, 3): 1, (3, 4): 1, (4, 1): 1, (1, 0): 1})
    assert boundary(cx, c).is_zero()


def test_chain_arithmetic_drops_zeros():
    a = Chain(1, {0: 1, 1: 2})
    b = Chain(1, {1: 2})
    assert (a - b).coefficients == {0: 1}
    assert (a * 0).is_zero()
    assert (a + a) == a * 2
    with pytest.raises(DegreeError):
        a + Chain(0, {0: 1})


def test_pair_degree_mismatch():
    with pytest.raises(DegreeError):
        pair(Chain(1, {0: 1}), Cochain(0, (1,)))


def test_missing_face_is_named():
    with pytest.raises(ComplexError, match=r"face \[1, 2\]"):
        SimplicialComplex([[(0,), (1,), (2,)], [(0, 1), (0, 2)], [(0, 1, 2)]])


def test_duplicate_and_degenerate_cells_rejected():
    with pytest.raises(ComplexError):
        SimplicialComplex([[(0,), (1,)], [(0, 1), (1, 0)]])
    with pytest.raises(ComplexError):
        SimplicialComplex([[(0,), (1,)], [(0, 0)]])


def test_volumes_are_exact():
    cx = grid_disk([0, 1, 3], [0, 2])
    areas = sorted(cx.volume(2, i) for i in range(cx.num_cells(2)))
    assert areas == [1, 1, 2, 2]
    assert cx.volume(1, cx.index_of((0, 1))[0]) == 2
    assert isinstance(grid_disk([0, 1], [0, 1]).volume(2, 0), (int, Fraction))
    assert grid_disk([0, 1], [0, 1]).volume(2, 0) == Fraction(1, 2)


def test_torus_uses_minimum_image():
    cx = torus_grid(3, 3)
    # vertex (2,0) -> (0,0) wraps around: one unit to the right
    assert cx.edge_vector(6, 0) == (1, 0)


def test_torus_rejects_wide_rows():
    with pytest.raises(ComplexError):
        torus_grid(3, 3, heights=(1, 1, 3))


def test_complex_json_roundtrip(tmp_path):
    cx = torus_grid(3, 3, heights=(1, 2, Fraction(3, 2)))
    path = tmp_path / "t.json"
    save_complex(cx, path)
    back = load_complex(path)
    assert back.to_json() == cx.to_json()
    assert back.volume(2, 0) == cx.volume(2, 0)


def test_chain_json_roundtrip():
    cx = annulus(5, 2)
    a = Chain(1, {0: Fraction(3, 7), 4: -2})
    data = json.loads(json.dumps(chain_to_json(cx, a)))
    assert chain_from_json(cx, data) == a


def test_chain_json_rejects_wrong_degree():
    cx = annulus(5, 2)
    with pytest.raises(DegreeError):
        chain_from_json(cx, {"degree": 1, "coefficients": {"0,1,2": 1}})


def test_complex_json_missing_face_fails():
    data = grid_disk([0, 1], [0, 1]).to_json()
    data["cells"][0] = data["cells"][0][1:]
    with pytest.raises(ComplexError):
        complex_from_json(data)


def test_cochain_arithmetic():
    w = Cochain(0, (1, 2, 3))
    assert (w + w).values == (2, 4, 6)
    assert (w - w).is_zero()
    assert (w * Fraction(1, 2)).values == (Fraction(1, 2), 1, Fraction(3, 2))
