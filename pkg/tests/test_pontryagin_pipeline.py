from functools import lru_cache

import numpy as np
import pytest

from common import angles
from common.errors import ValidationFailure
from pathsu2.compose import compose_paths
from pathsu2.grids import match_defect
from pathsu2.quat import ONE, qexp, qlog, qmul
from pontryagin.clutch import Clutch
from pontryagin.lifts import path_gamma, square_gamma, transported_gamma
from pontryagin.oracle import degree_oracle
from pontryagin.pipeline import T_REFINE, coarse_grid, cocycle_loop, cocycle_value, compute_p1, lift_arcs
from pontryagin.tasks import cocycle_value_task, compute_p1_task, orientation_sign

# vertices 0, 1, 2 sit in one chart and 3, 4, 5 in the other
MIXED = (0, 1, 3)


def quad_point(c, quad=(0, 1, 3, 4)):
    return c.cover.barycenter(quad)


@lru_cache(maxsize=None)
def p1_report(k, n):
    return compute_p1_task.apply(args=[k, n]).get()


def test_trivial_bundle_paths_are_constant():
    c = Clutch(0)
    for lift in (path_gamma, transported_gamma):
        p = lift(c, 0, 3, quad_point(c), 16)
        assert match_defect(p.grid, np.broadcast_to(ONE, p.grid.shape)) == 0.0


def test_path_endpoints_are_exact():
    c = Clutch(1)
    m = quad_point(c)
    for lift in (path_gamma, transported_gamma):
        p = lift(c, 1, 3, m, 16)
        assert np.allclose(p.start, ONE, atol=1e-15)
        assert match_defect(p.end, c.transition(1, 3, m)) <= 1e-12


def test_path_gamma_runs_the_one_parameter_subgroup():
    c = Clutch(2)
    m = quad_point(c)
    g = c.transition(0, 4, m)
    p = path_gamma(c, 0, 4, m, 16)
    assert np.allclose(qmul(p.grid, g), qmul(g, p.grid), atol=1e-9)
    t = np.linspace(0.0, 1.0, 17)[:, None]
    assert match_defect(p.grid[1:-1], qexp(t * qlog(g))[1:-1]) <= 1e-12
    assert match_defect(p.end, g) <= 1e-12


def test_transported_lift_is_path_gamma_at_the_edge_barycentre():
    c = Clutch(1)
    b = c.cover.barycenter((1, 3))
    assert match_defect(transported_gamma(c, 1, 3, b, 32).grid, path_gamma(c, 1, 3, b, 32).grid) <= 1e-12


def test_transported_lift_moves_continuously_with_the_point():
    c = Clutch(2)
    a = quad_point(c)
    b = c.cover.barycenter((0, 1, 3, 4, 5))
    near = transported_gamma(c, 0, 3, a + 1e-6 * (b - a), 32)
    assert match_defect(near.grid, transported_gamma(c, 0, 3, a, 32).grid) <= 1e-4


def test_square_boundary_conditions():
    c = Clutch(1)
    i, j, k = MIXED
    m = quad_point(c)
    square = square_gamma(c, i, j, k, m, 64, 16)
    composite = compose_paths(
        transported_gamma(c, j, k, m, 64).translate(c.transition(i, j, m)), transported_gamma(c, i, j, m, 64)
    )
    assert square.n == 64
    assert square.rows == 3 * 16
    assert match_defect(square.source.grid, transported_gamma(c, i, k, m, 64).grid) <= 1e-9
    assert match_defect(square.target.grid, composite.grid) <= 1e-9
    rows = square.rows + 1
    assert match_defect(square.column(0), np.broadcast_to(ONE, (rows, 4))) <= 1e-12
    assert match_defect(square.column(-1), np.broadcast_to(c.transition(i, k, m), (rows, 4))) <= 1e-12


def test_square_is_deterministic():
    c = Clutch(1)
    a = square_gamma(c, *MIXED, quad_point(c), 16)
    b = square_gamma(c, *MIXED, quad_point(c), 16)
    assert np.array_equal(a.grid, b.grid)


def test_trivial_bundle_squares_and_values():
    c = Clutch(0)
    square = square_gamma(c, *MIXED, quad_point(c), 16)
    assert match_defect(square.grid, np.broadcast_to(ONE, square.grid.shape)) == 0.0
    assert cocycle_value(c, 0, 1, 3, 4, quad_point(c), 16) == 0.0


@pytest.mark.parametrize("n, coarse", [(16, 8), (20, 8), (24, 12), (32, 16)])
def test_coarse_companion_grids(n, coarse):
    assert coarse_grid(n) == coarse


def test_cocycle_loop_keeps_every_edge_path_at_grid_resolution():
    c = Clutch(1)
    m = quad_point(c)
    loop = cocycle_loop(c, (0, 1, 3, 4), m, 16)
    assert loop.n == T_REFINE * 16
    assert loop.rows == 13 * 16
    assert match_defect(loop.source.grid, loop.target.grid) <= 1e-9
    # on its first row the associator runs c23 over the third quarter
    c23 = transported_gamma(c, 1, 3, m, loop.n).translate(c.transition(0, 1, m))
    start = 6 * 16
    assert match_defect(loop.grid[start, 32:49], c23.grid[::4]) <= 1e-9


def test_lifting_follows_wraps():
    quad, top = (0, 1, 2, 3), (0, 1, 2, 3, 4)
    points = [(quad, None, 0, None)] + [(quad, top, step, None) for step in (1, 2, 3)]
    lifted, worst = lift_arcs(points, [0.95, 0.05, 0.15, 0.25])
    assert lifted[(quad, top)] == pytest.approx(0.25)
    assert worst == pytest.approx(0.1)


def test_trivial_bundle_has_zero_class():
    report = compute_p1(0, 16)
    assert report["pairing"] == 0
    assert report["class"]["free"] == [0]
    assert report["defects"]["delta"] == 0.0


def test_coarse_grids_are_rejected():
    with pytest.raises(ValidationFailure):
        compute_p1(1, 8)


def test_orientation_sign():
    assert orientation_sign(-2, 1.99) == -1
    assert orientation_sign(1, 1.01) == 1
    assert orientation_sign(0, 0.0) is None


@pytest.mark.parametrize("k", [0, 1, -1])
def test_degree_oracle(k):
    assert degree_oracle(k, 48) == pytest.approx(k, abs=2e-2)


@pytest.mark.slow
def test_degree_oracle_is_linear():
    assert degree_oracle(2, 48) == pytest.approx(2.0 * degree_oracle(1, 48), abs=2e-2)


@pytest.mark.slow
def test_cocycle_value_task_matches_direct_call():
    c = Clutch(1)
    m = quad_point(c)
    value = cocycle_value_task.apply(args=[1, 16, [0, 1, 3, 4], m.tolist()]).get()
    assert value == pytest.approx(cocycle_value(c, 0, 1, 3, 4, m, 16))
    assert 0.0 <= value < 1.0


@pytest.mark.slow
def test_values_vary_continuously_between_quintuples():
    c = Clutch(1)
    quad = (0, 1, 3, 4)
    a = cocycle_value(c, *quad, c.cover.barycenter(quad + (2,)), 16)
    b = cocycle_value(c, *quad, c.cover.barycenter(quad + (5,)), 16)
    assert angles.dist(a - b) <= 0.2


@pytest.mark.slow
def test_extrapolation_is_a_small_correction():
    c = Clutch(1)
    m = quad_point(c)
    plain = cocycle_value(c, 0, 1, 3, 4, m, 16, extrapolate=False)
    assert angles.dist(cocycle_value(c, 0, 1, 3, 4, m, 16) - plain) <= 0.05


@pytest.mark.slow
@pytest.mark.parametrize("k", [1, 2])
def test_alternating_sum_over_a_quintuple_vanishes(k):
    c = Clutch(k)
    top = (0, 1, 2, 3, 5)
    m = c.cover.barycenter(top)
    values = [cocycle_value(c, *(top[:a] + top[a + 1:]), m, 24) for a in range(5)]
    assert angles.dist(sum((-1) ** a * v for a, v in enumerate(values))) <= 1e-2


@pytest.mark.slow
@pytest.mark.parametrize("k", [-1, 0, 1, 2])
def test_pontryagin_class_at_grid_24(k):
    report = p1_report(k, 24)
    assert abs(report["pairing"]) == abs(k)
    assert abs(report["class"]["free"][0]) == abs(k)
    assert report["defects"]["delta"] <= 1e-2
    assert report["defects"]["integrality"] <= 0.1


@pytest.mark.slow
def test_class_is_stable_under_grid_refinement():
    coarse, fine = p1_report(1, 16), p1_report(1, 24)
    assert coarse["class"] == fine["class"]
    assert coarse["pairing"] == fine["pairing"]


@pytest.mark.slow
def test_instanton_numbers_have_one_global_sign():
    signs = set()
    for k in (1, -1, 2):
        report = p1_report(k, 24)
        assert report["degree_oracle"] == pytest.approx(k, abs=2e-2)
        assert report["pairing"] == report["sign"] * k
        signs.add(report["sign"])
    assert len(signs) == 1
