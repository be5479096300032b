import numpy as np
import pytest

from common.errors import BoundaryInconsistent, BoundaryMismatch, NoUnhitPoint
from pathsu2.compose import associator_square, compose_paths
from pathsu2.fill import (
    fill_cube,
    fill_square,
    from_chart,
    given_pole,
    homotopy_faces,
    sample_step,
    to_chart,
    unhit_point,
)
from pathsu2.fixtures import random_chain
from pathsu2.grids import Path, constant_square, match_defect
from pathsu2.quat import random_unit


def test_chart_round_trip(rng):
    pole = random_unit(rng)
    g = random_unit(rng, 20)
    assert np.allclose(from_chart(to_chart(g, pole), pole), g, atol=1e-12)


def test_unhit_point_avoids_the_samples(rng):
    samples = random_unit(rng, 200)
    pole, clearance = unhit_point(samples)
    assert clearance > 1e-2
    assert np.min(np.linalg.norm(samples - pole, axis=-1)) == pytest.approx(clearance)


def test_clearance_holds_between_coarse_samples(rng):
    (p,) = random_chain(rng, 1, 8)
    step = sample_step(p.grid)
    assert step > 0
    pole, clearance = unhit_point(p.grid, step=step)
    _, sampled = unhit_point(p.grid)
    assert clearance < sampled
    dense = p.resample(256).grid
    assert np.min(np.linalg.norm(dense - pole, axis=-1)) >= clearance - 1e-12


def test_a_step_wider_than_the_sphere_leaves_no_pole(rng):
    with pytest.raises(NoUnhitPoint):
        unhit_point(random_unit(rng, 20), step=2.0 * np.pi)


def test_equal_paths_give_the_constant_homotopy(rng):
    (p,) = random_chain(rng, 1, 16)
    m = fill_square(p, p)
    for k in range(m.rows + 1):
        assert match_defect(m.grid[k], p.grid) <= 1e-9


def test_filled_square_keeps_its_boundary(rng):
    c12, c23, c34 = random_chain(rng, 3, 16)
    p0 = compose_paths(compose_paths(c34, c23), c12)
    p1 = compose_paths(c34, compose_paths(c23, c12))
    m = fill_square(p0, p1)
    assert match_defect(m.source.grid, p0.grid) <= 1e-12
    assert match_defect(m.target.grid, p1.grid) <= 1e-12
    assert match_defect(m.column(0), np.broadcast_to(p0.start, (17, 4))) <= 1e-12
    assert match_defect(m.column(-1), np.broadcast_to(p0.end, (17, 4))) <= 1e-12
    assert m.meta["clearance"] > 1e-2
    assert m.meta["smoothness"] <= 3.0


def test_fill_square_needs_common_endpoints(rng):
    f, g = random_chain(rng, 2, 16)
    with pytest.raises(BoundaryInconsistent):
        fill_square(f, g)


def test_constant_faces_give_a_constant_cube(rng):
    x = random_unit(rng)
    m = constant_square(Path.constant(x, 8))
    cube = fill_cube(homotopy_faces(m, m))
    assert cube.shape == (9, 9, 9)
    assert match_defect(cube.grid, np.broadcast_to(x, cube.grid.shape)) <= 1e-12


def test_cube_between_two_homotopies_keeps_both(rng):
    c12, c23, c34 = random_chain(rng, 3, 16)
    a = associator_square(c34, c23, c12)
    f = fill_square(a.source, a.target)
    cube = fill_cube(homotopy_faces(a, f))
    assert match_defect(cube.grid[0], a.grid) <= 1e-12
    assert match_defect(cube.grid[-1], f.grid) <= 1e-12


def test_homotopies_with_different_boundaries_are_rejected(rng):
    f, g = random_chain(rng, 2, 16)
    with pytest.raises(BoundaryMismatch):
        homotopy_faces(constant_square(f), constant_square(g))


def test_given_pole_on_the_boundary_is_refused(rng):
    (p,) = random_chain(rng, 1, 16)
    with pytest.raises(NoUnhitPoint):
        given_pole(p.grid, p.grid[5])


def test_fills_at_two_resolutions_share_a_given_pole(rng):
    c12, c23, c34 = random_chain(rng, 3, 32)
    p0 = compose_paths(compose_paths(c34, c23), c12)
    p1 = compose_paths(c34, compose_paths(c23, c12))
    pole, _ = unhit_point(np.concatenate([p0.grid, p1.grid]), step=max(sample_step(p0.grid), sample_step(p1.grid)))
    fine = fill_square(p0, p1, 16, pole=pole)
    coarse = fill_square(p0.resample(16), p1.resample(16), 8, pole=pole)
    assert np.allclose(fine.meta["pole"], pole)
    assert np.allclose(coarse.meta["pole"], pole)
    # the coarse filler samples the same surface
    assert match_defect(fine.grid[::2, ::2], coarse.grid) <= 1e-9


def test_cube_depth_is_independent_of_the_path_grid(rng):
    (f,) = random_chain(rng, 1, 32)
    m = constant_square(f, 8)
    faces = homotopy_faces(m, m, depth=8)
    assert faces["s0"].rows == 8
    assert fill_cube(faces).shape == (9, 9, 33)
