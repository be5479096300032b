import numpy as np
import pytest

from common.errors import BoundaryMismatch, EndpointMismatch, InvalidGrid, ValidationFailure
from pathsu2.compose import associator_square, compose_paths, compose_squares, identity_square
from pathsu2.fixtures import random_chain
from pathsu2.grids import Path, constant_square, match_defect, stack_squares
from pathsu2.quat import ONE, qconj, qexp, qlog, qmul, qpow, random_unit, slerp


def test_log_inverts_exp_inside_the_principal_ball(rng):
    v = rng.standard_normal((50, 3))
    v *= (rng.uniform(0.0, 3.0, 50) / np.linalg.norm(v, axis=-1))[:, None]
    assert np.allclose(qlog(qexp(v)), v, atol=1e-10)


def test_powers_and_inverse(rng):
    q = random_unit(rng, 10)
    assert np.allclose(qpow(q, 3), qmul(q, qmul(q, q)), atol=1e-12)
    assert np.allclose(qpow(q, -1), qconj(q), atol=1e-12)
    assert np.allclose(qmul(qpow(q, 2), qpow(q, -2)), np.broadcast_to(ONE, q.shape), atol=1e-12)


def test_slerp_hits_both_ends(rng):
    a, b = random_unit(rng), random_unit(rng)
    assert np.allclose(slerp(a, b, 0.0), a)
    assert np.allclose(slerp(a, b, 1.0), b)
    assert np.allclose(slerp(a, -a, 1.0), -a, atol=1e-12)


@pytest.mark.parametrize("n", [4, 10])
def test_grid_sizes_are_checked(n):
    with pytest.raises(InvalidGrid):
        Path.constant(ONE, n)


def test_non_unit_samples_are_rejected():
    with pytest.raises(InvalidGrid):
        Path(np.full((9, 4), 0.7))


def test_compose_paths_endpoints(rng):
    f, g = random_chain(rng, 2, 16)
    gf = compose_paths(g, f)
    assert np.allclose(gf.start, f.start, atol=1e-15)
    assert np.allclose(gf.end, g.end, atol=1e-15)
    assert gf.n == 16


def test_compose_with_constant_path_is_constant_on_one_half(rng):
    (f,) = random_chain(rng, 1, 16)
    c = compose_paths(Path.constant(f.end, 16), f)
    assert match_defect(c.grid[8:], np.broadcast_to(f.end, (9, 4))) <= 1e-12
    assert match_defect(c.grid[:9], f.grid[::2]) <= 1e-12


def test_compose_paths_needs_matching_ends(rng):
    f, g = random_chain(rng, 2, 16)
    with pytest.raises(EndpointMismatch):
        compose_paths(f, g)


def test_associator_rows_are_the_two_bracketings(rng):
    c12, c23, c34 = random_chain(rng, 3, 16)
    square = associator_square(c34, c23, c12)
    left = compose_paths(compose_paths(c34, c23), c12)
    right = compose_paths(c34, compose_paths(c23, c12))
    assert match_defect(square.grid[0], left.grid) <= 1e-9
    assert match_defect(square.grid[-1], right.grid) <= 1e-9
    assert match_defect(square.column(0), np.broadcast_to(c12.start, (17, 4))) <= 1e-12
    assert match_defect(square.column(-1), np.broadcast_to(c34.end, (17, 4))) <= 1e-12


def test_associator_of_constant_paths_is_constant(rng):
    x = random_unit(rng)
    p = Path.constant(x, 16)
    square = associator_square(p, p, p)
    assert match_defect(square.grid, np.broadcast_to(x, square.grid.shape)) <= 1e-12


def test_unitor_rows(rng):
    (c,) = random_chain(rng, 1, 16)
    left = identity_square(c, "left")
    assert match_defect(left.grid[0], c.grid) <= 1e-9
    assert match_defect(left.grid[-1], compose_paths(c, Path.constant(c.start, 16)).grid) <= 1e-9
    right = identity_square(c, "right")
    assert match_defect(right.grid[0], c.grid) <= 1e-9
    assert match_defect(right.grid[-1], compose_paths(Path.constant(c.end, 16), c).grid) <= 1e-9
    with pytest.raises(ValidationFailure):
        identity_square(c, "top")


def test_vertical_composition_stacks_rows(rng):
    c12, c23, c34 = random_chain(rng, 3, 16)
    square = associator_square(c34, c23, c12)
    after = constant_square(square.target)
    stacked = compose_squares(after, square, "vertical")
    assert stacked.rows == 2 * square.rows
    assert match_defect(stacked.grid[: square.rows + 1], square.grid) <= 1e-12
    assert match_defect(stacked.target.grid, square.target.grid) <= 1e-12


def test_horizontal_composition_bottom_row(rng):
    f, g = random_chain(rng, 2, 16)
    m = compose_squares(constant_square(g), constant_square(f), "horizontal")
    assert match_defect(m.source.grid, compose_paths(g, f).grid) <= 1e-12


def test_mismatched_squares_do_not_stack(rng):
    f, g = random_chain(rng, 2, 16)
    with pytest.raises(BoundaryMismatch):
        stack_squares([constant_square(f), constant_square(g)])
    with pytest.raises(BoundaryMismatch):
        compose_squares(constant_square(f), constant_square(g), "horizontal")


def test_square_rows_resample_onto_a_finer_and_a_coarser_grid(rng):
    c12, c23, c34 = random_chain(rng, 3, 16)
    square = associator_square(c34, c23, c12)
    finer = square.resample_rows(2 * square.rows)
    assert finer.grid.shape == (2 * square.rows + 1, square.n + 1, 4)
    assert match_defect(finer.grid[::2], square.grid) <= 1e-12
    coarser = square.resample_rows(8)
    assert coarser.grid.shape == (9, square.n + 1, 4)
    assert match_defect(coarser.source.grid, square.source.grid) <= 1e-12
    assert match_defect(coarser.target.grid, square.target.grid) <= 1e-12


def test_path_resample_keeps_grid_points(rng):
    (c,) = random_chain(rng, 1, 16)
    assert match_defect(c.resample(32).grid[::2], c.grid) <= 1e-12
