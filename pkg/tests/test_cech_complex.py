import pytest

from cech.complex import Complex, cover_nerve, make_boundary_simplex, make_rp2, pointwise_nerve
from common.errors import DegreeOutOfRange, ValidationFailure


def test_boundary_simplex_face_counts():
    K = make_boundary_simplex(4)
    assert [K.count(k) for k in range(5)] == [6, 15, 20, 15, 6]
    assert K.dim == 4


def test_rp2_combinatorics():
    K = make_rp2()
    assert [K.count(k) for k in range(3)] == [6, 15, 10]
    assert K.euler_characteristic() == 1


def test_faces_sorted_and_indexed():
    K = make_boundary_simplex(2)
    faces = K.faces_of(2)
    assert faces == sorted(faces)
    for i, face in enumerate(faces):
        assert K.index(face) == i


def test_faces_must_be_closed_under_subsets():
    with pytest.raises(ValidationFailure):
        Complex((0, 1, 2), frozenset({(0,), (1,), (2,), (0, 1, 2)}))


def test_faces_must_be_increasing():
    with pytest.raises(ValidationFailure):
        Complex((0, 1), frozenset({(0,), (1,), (1, 0)}))


def test_degree_out_of_range():
    with pytest.raises(DegreeOutOfRange):
        make_rp2().check_degree(3)


def test_json_round_trip_keeps_faces():
    K = make_rp2()
    assert Complex.from_json(K.to_json()) == K


def test_cover_nerve_of_three_arcs_is_a_circle():
    cover = [frozenset("ab"), frozenset("bc"), frozenset("ca")]
    K = cover_nerve(cover)
    assert K.count(1) == 3
    assert K.count(2) == 0


def test_pointwise_nerve_labels_points_and_indices():
    cover = [frozenset({0, 1}), frozenset({1, 2})]
    K = pointwise_nerve(cover)
    assert K.labels == ((0, 0), (1, 0), (1, 1), (2, 1))
    assert K.faces_of(1) == [(1, 2)]
