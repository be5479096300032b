from common.models import join_key
from gerbes.finite import FinSurjection
from twogerbe.fixtures import coherent_2gerbe, constant_associator, random_kappa, trivial_2gerbe
from twogerbe.model import COHERENCE_SIGNS, Fin2Gerbe, twist_associator, validate_2gerbe


def test_trivial_model_passes(rng):
    g = trivial_2gerbe(rng, n_base=2, max_fiber=2, order=3)
    report = validate_2gerbe(g, 1e-9)
    assert report.passed, report.entries
    assert set(report.entries) == {"structure", "gerbe", "product", "associator_descent", "coherence"}


def test_coherent_models_pass(make_rng):
    for seed in range(20):
        g = coherent_2gerbe(make_rng(seed), twisted=seed % 2 == 0)
        report = validate_2gerbe(g, 1e-9)
        assert report.passed, (seed, report.defects())


def test_random_kappa_breaks_only_coherence(rng):
    g = trivial_2gerbe(rng)
    twisted = twist_associator(g, random_kappa(g.surj, rng))
    report = validate_2gerbe(twisted, 1e-9)
    assert report.entries["associator_descent"].passed
    assert report.entries["product"].passed
    entry = report.entries["coherence"]
    assert not entry.passed
    assert len(entry.witness["quadruple"].split(",")) == 4


def test_constant_associator_fails_by_the_constant(rng):
    g = constant_associator(trivial_2gerbe(rng), 0.25)
    report = validate_2gerbe(g, 1e-9)
    assert report.entries["associator_descent"].passed
    assert abs(report.entries["coherence"].max_defect - 0.25) <= 1e-12


def test_flipping_any_coherence_sign_is_detected(rng):
    g = coherent_2gerbe(rng, max_y=2, twisted=True)
    assert validate_2gerbe(g, 1e-9).passed
    for i in range(5):
        signs = list(COHERENCE_SIGNS)
        signs[i] = -signs[i]
        report = validate_2gerbe(g, 1e-9, signs)
        assert not report.entries["coherence"].passed, i


def test_missing_product_is_a_structure_failure(rng):
    g = trivial_2gerbe(rng)
    key = next(iter(g.m))
    broken = Fin2Gerbe(g.surj, g.y, {k: v for k, v in g.m.items() if k != key})
    report = validate_2gerbe(broken)
    assert not report.passed
    assert report.entries["structure"].witness["pair"] == join_key(key)


def test_point_without_y_fiber_is_a_structure_failure():
    surj = FinSurjection({"a": "m", "b": "m"})
    g = Fin2Gerbe(surj, {"e": ("a", "a")}, {})
    report = validate_2gerbe(g)
    assert not report.entries["structure"].passed


def test_json_round_trip_keeps_the_model_valid(rng):
    g = coherent_2gerbe(rng)
    again = Fin2Gerbe.from_json(g.to_json())
    assert set(again.y) == set(g.y)
    assert validate_2gerbe(again, 1e-9).passed
