import numpy as np
import pytest

from pathsu2.grids import Cube
from pathsu2.nu import degree_s3, exp_chart, integrate_nu_cube, nu_density
from pathsu2.quat import qconj, qexp, qmul, qpow, random_unit


def test_chart_covers_the_group_once():
    assert integrate_nu_cube(exp_chart(48)) == pytest.approx(1.0, abs=5e-3)


def test_constant_cube_has_no_volume(rng):
    x = random_unit(rng)
    cube = Cube(np.broadcast_to(x, (9, 9, 9, 4)).copy())
    assert integrate_nu_cube(cube) == 0.0


def test_one_parameter_subgroup_has_no_volume(rng):
    axis = rng.standard_normal(3)
    axis /= np.linalg.norm(axis)
    r, s, t = np.meshgrid(*(np.linspace(0.0, 1.0, 9),) * 3, indexing="ij")
    angle = (r + 2.0 * s * s + np.sin(t))[..., None]
    cube = Cube(qexp(angle * axis))
    assert abs(integrate_nu_cube(cube)) <= 1e-12


def test_translation_invariance(rng):
    chart = exp_chart(16)
    base = integrate_nu_cube(chart)
    q = random_unit(rng)
    assert abs(integrate_nu_cube(Cube(qmul(q, chart.grid))) - base) <= 1e-6
    assert abs(integrate_nu_cube(Cube(qmul(chart.grid, q))) - base) <= 1e-6


def test_split_cube_is_additive():
    grid = exp_chart(16).grid
    whole = integrate_nu_cube(Cube(grid))
    halves = integrate_nu_cube(Cube(grid[:9])) + integrate_nu_cube(Cube(grid[8:]))
    assert abs(whole - halves) <= 1e-12


def test_density_shape():
    assert nu_density(exp_chart(8).grid).shape == (8, 8, 8)


def test_degree_of_powers_and_inverse():
    assert degree_s3(lambda q: q, 48) == pytest.approx(1.0, abs=5e-3)
    assert degree_s3(qconj, 48) == pytest.approx(-1.0, abs=5e-3)
    assert degree_s3(lambda q: qpow(q, 2), 48) == pytest.approx(2.0, abs=2e-2)
