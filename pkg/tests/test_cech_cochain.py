import numpy as np
import pytest

from cech.cochain import Cochain, delta, pullback_cocycle, random_cochain
from cech.complex import make_boundary_simplex, make_rp2
from common import angles
from common.errors import ComplexMismatch, NotSimplicial
from common.models import Coeff

COMPLEXES = [make_boundary_simplex(2), make_boundary_simplex(3), make_boundary_simplex(4), make_rp2()]


def test_delta_of_zero_cochain_on_an_edge():
    K = make_boundary_simplex(1)
    a = Cochain.from_mapping(K, 0, Coeff.REAL, {(0,): 0.5, (1,): 2.0, (2,): -1.0})
    assert delta(a)[(0, 1)] == pytest.approx(1.5)
    assert delta(a)[(0, 2)] == pytest.approx(-1.5)


def test_delta_squared_vanishes(rng):
    for _ in range(250):
        for K in COMPLEXES:
            k = int(rng.integers(0, K.dim + 1))
            n = random_cochain(K, k, Coeff.INTEGER, rng)
            assert delta(delta(n)).is_zero()
            g = random_cochain(K, k, Coeff.CIRCLE, rng)
            assert delta(delta(g)).max_abs() <= 1e-12


def test_delta_matches_five_term_product(rng):
    K = make_boundary_simplex(4)
    g = random_cochain(K, 3, Coeff.CIRCLE, rng)
    dg = delta(g)
    for i, j, k, l, m in K.faces_of(4):
        expected = g[(j, k, l, m)] - g[(i, k, l, m)] + g[(i, j, l, m)] - g[(i, j, k, m)] + g[(i, j, k, l)]
        assert angles.dist(dg[(i, j, k, l, m)] - expected) <= 1e-12


def test_delta_of_top_degree_is_empty():
    K = make_rp2()
    assert delta(Cochain.zeros(K, 2, Coeff.INTEGER)).values.size == 0


def test_circle_values_are_wrapped():
    K = make_boundary_simplex(1)
    g = Cochain(K, 0, Coeff.CIRCLE, np.array([1.25, -0.25, 3.0]))
    assert list(g.values) == pytest.approx([0.25, 0.75, 0.0])


def test_adding_cochains_on_different_complexes_fails():
    a = Cochain.zeros(make_boundary_simplex(2), 1, Coeff.INTEGER)
    b = Cochain.zeros(make_rp2(), 1, Coeff.INTEGER)
    with pytest.raises(ComplexMismatch):
        a + b


def test_json_round_trip():
    K = make_rp2()
    g = Cochain.from_function(K, 1, Coeff.CIRCLE, lambda face: 0.125 * face[0])
    again = Cochain.from_json(K, g.to_json())
    assert np.allclose(again.values, g.values)


def test_pullback_along_identity(rng):
    K = make_boundary_simplex(3)
    g = random_cochain(K, 2, Coeff.CIRCLE, rng)
    pulled = pullback_cocycle(g, {v: v for v in K.vertices}, K)
    assert np.allclose(pulled.values, g.values)


@pytest.mark.parametrize("coeff", [Coeff.INTEGER, Coeff.CIRCLE])
def test_pullback_commutes_with_delta(rng, coeff):
    K = make_boundary_simplex(3)
    collapse = {0: 1, 1: 1, 2: 2, 3: 3, 4: 4}
    swap = {0: 2, 1: 0, 2: 1, 3: 4, 4: 3}
    for phi in (collapse, swap):
        for k in (1, 2):
            g = random_cochain(K, k, coeff, rng)
            lhs = delta(pullback_cocycle(g, phi, K))
            rhs = pullback_cocycle(delta(g), phi, K)
            assert (lhs - rhs).max_abs() <= 1e-12


def test_pullback_rejects_non_simplicial_maps():
    domain = make_boundary_simplex(2)
    target = make_boundary_simplex(1)
    g = Cochain.zeros(target, 1, Coeff.CIRCLE)
    with pytest.raises(NotSimplicial):
        pullback_cocycle(g, {0: 0, 1: 1, 2: 2, 3: 0}, domain)
