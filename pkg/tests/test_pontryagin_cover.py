import numpy as np
import pytest

from cech.classes import cohomology
from common.errors import PoleTooClose, ValidationFailure
from pontryagin.clutch import Clutch
from pontryagin.cover import NORTH, SOUTH, make_cover
from pontryagin.pipeline import evaluation_points
from pathsu2.quat import ONE, qmul


def test_nerve_is_the_boundary_of_the_five_simplex():
    K = make_cover().nerve
    assert K.count(3) == 15
    assert K.count(4) == 6
    quads = set(K.faces_of(3))
    for top in K.faces_of(4):
        assert sum(1 for a in range(5) if top[:a] + top[a + 1:] in quads) == 5
    assert cohomology(K, 4) == (1, [])


def test_vertices_form_a_regular_simplex():
    V = make_cover().vertices
    assert np.allclose(np.linalg.norm(V, axis=1), 1.0)
    assert np.allclose(V.sum(axis=0), 0.0, atol=1e-12)
    gram = V @ V.T
    assert np.allclose(gram[~np.eye(6, dtype=bool)], -0.2)


def test_weights_invert_the_projection(rng):
    cover = make_cover()
    w = rng.uniform(0.0, 1.0, (20, 6))
    w[np.arange(20), rng.integers(0, 6, 20)] = 0.0
    w /= w.sum(axis=1, keepdims=True)
    assert np.allclose(cover.weights(cover.point(w)), w, atol=1e-12)


def test_poles_are_the_opposite_triangle_barycentres():
    cover = make_cover()
    north = cover.point(cover.barycenter(NORTH))
    south = cover.point(cover.barycenter(SOUTH))
    assert np.allclose(north, cover.poles["north"])
    assert np.allclose(south, cover.poles["south"])
    assert np.linalg.norm(cover.quaternion_coordinate(north)) <= 1e-12


def test_trivial_clutching_is_constant():
    c = Clutch(0)
    w = c.cover.barycenter((0, 3))
    assert np.array_equal(c.transition(0, 3, w), ONE)


@pytest.mark.parametrize("k", [1, -1, 2])
def test_transitions_are_an_exact_cocycle(k):
    c = Clutch(k)
    K = c.cover.nerve
    for i, j, l in K.faces_of(2):
        w = c.cover.barycenter((i, j, l))
        assert np.allclose(qmul(c.transition(i, j, w), c.transition(j, l, w)), c.transition(i, l, w), atol=1e-12)
        assert np.allclose(qmul(c.transition(i, j, w), c.transition(j, i, w)), ONE, atol=1e-12)
        assert np.allclose(c.transition(i, i, w), ONE)


def test_clutching_fails_at_the_poles():
    c = Clutch(1)
    with pytest.raises(PoleTooClose):
        c.u(c.cover.poles["north"])


def test_chart_assignment_must_use_both_charts():
    with pytest.raises(ValidationFailure):
        Clutch(1, (0, 0, 0, 0, 0, 0))


def test_evaluation_points_stay_away_from_the_poles():
    c = Clutch(1)
    points = evaluation_points(c)
    assert len(points) == 15 * (1 + 2 * 3)
    weights = np.array([w for *_, w in points])
    radius = np.linalg.norm(c.cover.quaternion_coordinate(c.cover.point(weights)), axis=-1)
    assert np.min(radius) >= 0.5
