import pytest

from common import angles
from common.errors import NotAssociative, NotCompatible, NotNormalized, NotOverIdentity, ValidationFailure
from gerbes.finite import (
    FinGerbe,
    FinSurjection,
    compose_morphisms,
    gerbe_isomorphism,
    groupoid_at,
    identity_morphism,
    make_gerbe,
    make_morphism,
)
from gerbes.fixtures import gerbe_family, random_gerbe, random_morphism, random_surjection


def test_surjection_rejects_empty_fibers():
    with pytest.raises(ValidationFailure):
        FinSurjection({"a": "m0"}, base=("m0", "m1"))


def test_section_picks_fiber_minimum():
    surj = FinSurjection({"b": "m", "a": "m", "c": "n"})
    assert surj.section("m") == "a"
    assert surj.fiber("m") == ("a", "b")


def test_trivial_gerbe_is_valid(rng):
    surj = random_surjection(rng)
    P = make_gerbe(surj, {})
    assert P.c == {}


def test_coboundary_gerbes_are_valid(rng):
    for _ in range(10):
        P = random_gerbe(random_surjection(rng), rng)
        assert isinstance(P, FinGerbe)


def test_single_violation_is_not_associative():
    surj = FinSurjection({"a": "m", "b": "m", "c": "m"})
    with pytest.raises(NotAssociative):
        make_gerbe(surj, {("a", "b", "c"): 0.2})


def test_phase_on_degenerate_triple_is_not_normalized():
    surj = FinSurjection({"a": "m", "b": "m"})
    with pytest.raises(NotNormalized):
        make_gerbe(surj, {("a", "a", "b"): 0.1})


def test_json_round_trip(rng):
    P = random_gerbe(random_surjection(rng), rng)
    Q = FinGerbe.from_json(P.to_json())
    for t in P.surj.tuples(3):
        assert angles.dist(P.phase(*t) - Q.phase(*t)) <= 1e-12


def test_random_morphisms_satisfy_the_law(rng):
    P, Q, _ = gerbe_family(rng)
    f = random_morphism(P, Q, rng)
    for t in P.surj.tuples(3):
        assert f.law_defect(*t) <= 1e-12


def test_perturbed_morphism_is_not_compatible(rng):
    P, Q, _ = gerbe_family(rng, max_fiber=3)
    f = random_morphism(P, Q, rng)
    pairs = [p for p in P.surj.tuples(2) if p[0] != p[1]]
    if not pairs:
        pytest.skip("all fibers are singletons")
    lam = dict(f.lam)
    lam[pairs[0]] = lam.get(pairs[0], 0.0) + 0.3
    with pytest.raises(NotCompatible):
        make_morphism(P, Q, f.f, lam)


def test_morphism_must_cover_identity():
    P = make_gerbe(FinSurjection({"a": "m", "b": "n"}), {})
    Q = make_gerbe(FinSurjection({"p": "m", "q": "n"}), {})
    with pytest.raises(NotOverIdentity):
        make_morphism(P, Q, {"a": "q", "b": "p"}, {})


def test_composition_with_identity(rng):
    P, Q, _ = gerbe_family(rng)
    f = random_morphism(P, Q, rng)
    composed = compose_morphisms(identity_morphism(Q), f)
    assert composed.f == f.f
    assert composed.lam == f.lam


def test_composite_morphism_satisfies_the_law(rng):
    P, Q, R = gerbe_family(rng)
    h = compose_morphisms(random_morphism(Q, R, rng), random_morphism(P, Q, rng))
    for t in P.surj.tuples(3):
        assert h.law_defect(*t) <= 1e-12


def test_gerbes_on_one_surjection_are_isomorphic(rng):
    surj = random_surjection(rng)
    iso = gerbe_isomorphism(random_gerbe(surj, rng), random_gerbe(surj, rng))
    assert iso.f == {x: x for x in surj.total}


def test_one_point_fiber_groupoid():
    P = make_gerbe(FinSurjection({"a": "m"}), {})
    table = groupoid_at(P, "m")
    assert table.objects == ("a",)
    assert table.check() <= 1e-12


def test_groupoid_axioms_on_three_point_fiber(rng):
    surj = FinSurjection({"a": "m", "b": "m", "c": "m"})
    P = random_gerbe(surj, rng)
    table = groupoid_at(P, "m")
    assert table.check() <= 1e-12
    u = 0.3
    inv = table.inverse("a", "b", u)
    assert angles.dist(inv - (-u - P.phase("a", "b", "a"))) <= 1e-12
    assert angles.dist(table.compose("a", "b", "a", u, inv)) <= 1e-12
