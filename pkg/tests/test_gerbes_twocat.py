import pytest

from common import angles
from common.errors import NotDescendable
from gerbes.fixtures import gerbe_family, random_morphism, random_transformation
from gerbes.finite import compose_morphisms, identity_morphism
from gerbes.tasks import check_laws_task
from gerbes.twocat import (
    descend_section,
    hcompose,
    identity_transformation,
    interchange_defect,
    lift_section,
    phi_fg,
    pointwise_product,
    transport_cocycle_defect,
    vcompose,
)


@pytest.fixture
def grid(rng):
    P, Q, R = gerbe_family(rng, n_base=4, max_fiber=3)
    fs = [random_morphism(P, Q, rng) for _ in range(3)]
    gs = [random_morphism(Q, R, rng) for _ in range(3)]
    return P, Q, R, fs, gs


def test_phi_ff_is_the_identity(grid, rng):
    P, _, _, (f, _, _), _ = grid
    for x1, x2 in P.surj.tuples(2):
        v = float(rng.random())
        assert angles.dist(phi_fg(f, f, x1, x2, v) - v) <= 1e-12


def test_phi_on_the_diagonal_is_the_identity(grid):
    P, _, _, (f, g, _), _ = grid
    for x in P.surj.total:
        assert angles.dist(phi_fg(f, g, x, x, 0.7) - 0.7) <= 1e-12


def test_phi_is_independent_of_u(grid):
    P, _, _, (f, g, _), _ = grid
    for x1, x2 in P.surj.tuples(2):
        assert angles.dist(phi_fg(f, g, x1, x2, 0.2, u=0.0) - phi_fg(f, g, x1, x2, 0.2, u=0.81)) <= 1e-12


def test_phi_satisfies_the_descent_cocycle(grid):
    _, _, _, (f, g, _), _ = grid
    assert transport_cocycle_defect(f, g) <= 1e-12


def test_constant_section_descends_for_equal_morphisms(grid):
    P, _, _, (f, _, _), _ = grid
    t = descend_section(f, f, {x: 0.4 for x in P.surj.total})
    assert all(angles.dist(v - 0.4) <= 1e-12 for v in t.theta.values())


def test_lift_then_descend_is_identity(grid, rng):
    _, _, _, (f, g, _), _ = grid
    for _ in range(100):
        t = random_transformation(f, g, rng)
        again = descend_section(f, g, lift_section(t))
        assert again.distance(t) <= 1e-12


def test_perturbed_lift_is_not_descendable(grid, rng):
    P, _, _, (f, g, _), _ = grid
    hat = lift_section(random_transformation(f, g, rng))
    x = next((x for x in P.surj.total if len(P.surj.fiber(P.surj.proj[x])) > 1), None)
    if x is None:
        pytest.skip("all fibers are singletons")
    hat[x] = angles.wrap(hat[x] + 0.3)
    with pytest.raises(NotDescendable):
        descend_section(f, g, hat)


def test_vertical_composition_is_unital_and_associative(grid, rng):
    _, _, _, (f, g, h), _ = grid
    t1, t2 = random_transformation(f, g, rng), random_transformation(g, h, rng)
    t3 = random_transformation(h, h, rng)
    assert vcompose(identity_transformation(f), t1).distance(t1) <= 1e-12
    assert vcompose(t1, identity_transformation(g)).distance(t1) <= 1e-12
    assert vcompose(vcompose(t1, t2), t3).distance(vcompose(t1, vcompose(t2, t3))) <= 1e-12


def test_vertical_composition_matches_pointwise_product(grid, rng):
    _, _, _, (f, g, h), _ = grid
    t1, t2 = random_transformation(f, g, rng), random_transformation(g, h, rng)
    direct = descend_section(f, h, pointwise_product(t1, t2))
    assert direct.distance(vcompose(t1, t2)) <= 1e-12


def test_horizontal_composite_of_identities(grid):
    _, _, _, (f, _, _), (g, _, _) = grid
    t = hcompose(identity_transformation(f), identity_transformation(g))
    assert all(angles.dist(v) <= 1e-12 for v in t.theta.values())


def test_horizontal_composite_with_identity_morphism(grid, rng):
    _, Q, _, (f1, f2, _), _ = grid
    theta = random_transformation(f1, f2, rng)
    one = identity_transformation(identity_morphism(Q))
    whiskered = hcompose(theta, one)
    assert whiskered.source.f == compose_morphisms(identity_morphism(Q), f1).f
    assert max(angles.dist(whiskered[m] - theta[m]) for m in theta.theta) <= 1e-12


def test_interchange_law(grid, rng):
    _, _, _, (f1, f2, f3), (g1, g2, g3) = grid
    for _ in range(5):
        t12, t23 = random_transformation(f1, f2, rng), random_transformation(f2, f3, rng)
        l12, l23 = random_transformation(g1, g2, rng), random_transformation(g2, g3, rng)
        assert interchange_defect(t12, t23, l12, l23) <= 1e-12


def test_law_sweep_task():
    worst = check_laws_task.apply(args=[7, 5]).get()
    assert max(worst.values()) <= 1e-12
