import pytest

from cech.classes import circle_class, trivialize_circle
from cech.cochain import delta
from common.errors import NotAssociative
from descent.fixtures import random_cover
from twogerbe.cocycle import cocycle_defect, default_choices, extract_3cocycle, random_choices
from twogerbe.fixtures import coherent_2gerbe, edit_associator, trivial_2gerbe
from twogerbe.tasks import extract_task


def test_trivial_model_gives_zero(rng):
    g = trivial_2gerbe(rng, n_base=2)
    cover = random_cover(rng, list(g.surj.base), 5)
    eps = extract_3cocycle(g, default_choices(g, cover))
    assert eps.values.size > 0
    assert eps.max_abs() <= 1e-12


def test_extraction_is_a_cocycle_for_any_choices(make_rng):
    for seed in range(10):
        rng = make_rng(seed)
        g = coherent_2gerbe(rng)
        cover = random_cover(rng, list(g.surj.base), 5)
        eps = extract_3cocycle(g, random_choices(g, cover, rng))
        assert cocycle_defect(eps) <= 1e-12, seed
        assert circle_class(eps, 1e-9).is_zero()


def test_changing_choices_changes_by_a_coboundary(rng):
    g = coherent_2gerbe(rng)
    cover = random_cover(rng, list(g.surj.base), 5)
    first = extract_3cocycle(g, default_choices(g, cover))
    second = extract_3cocycle(g, random_choices(g, cover, rng))
    diff = second - first
    h = trivialize_circle(diff, 1e-8)
    assert (delta(h) - diff).max_abs() <= 1e-7


def test_small_covers_have_no_three_faces(rng):
    g = coherent_2gerbe(rng)
    eps = extract_3cocycle(g, cover=[frozenset(g.surj.base)])
    assert eps.values.size == 0
    assert cocycle_defect(eps) == 0.0


def test_extract_task_reports_labels(rng):
    g = trivial_2gerbe(rng)
    base = [str(m) for m in g.surj.base]
    cover = [base, base, base, base]
    out = extract_task.apply(args=[g.to_json(), cover]).get()
    assert out["delta_defect"] == 0.0
    assert len(out["labels"]) == 4 * len(base)
    assert all(value == 0.0 for value in out["cochain"]["values"].values())


def test_extraction_refuses_an_incoherent_2gerbe(rng):
    g = coherent_2gerbe(rng, twisted=True)
    edited, _ = edit_associator(g)
    with pytest.raises(NotAssociative) as caught:
        extract_3cocycle(edited, cover=[frozenset(g.surj.base)])
    assert caught.value.witness["failed"]
    assert caught.value.witness["max_defect"] > 0.1
