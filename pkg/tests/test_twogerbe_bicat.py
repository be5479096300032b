from dataclasses import replace

import pytest

from common import angles
from common.models import join_key
from gerbes.finite import FinSurjection
from twogerbe.bicat import Bicat, check_bicat, find_inverse, group_bicat
from twogerbe.fixtures import coherent_2gerbe, trivial_2gerbe
from twogerbe.model import Fin2Gerbe
from twogerbe.pointwise import restrict_to_point
from twogerbe.tasks import validate_task


def cyclic_bicat(n: int) -> Bicat:
    elements = [str(k) for k in range(n)]
    table = {(g, f): str((int(g) + int(f)) % n) for g in elements for f in elements}
    return group_bicat(elements, table, "0")


def test_singleton_point_gives_the_delooped_circle():
    g = Fin2Gerbe(FinSurjection({"x": "m"}), {"e": ("x", "x")}, {("e", "e"): "e"})
    b = restrict_to_point(g, "m")
    assert b.objects == ("x",)
    assert b.hom("x", "x") == ["e"]
    assert b.synthesized_units
    report = check_bicat(b)
    assert report.passed
    assert not report.entries["triangle"].skipped


def test_trivial_model_points_pass(rng):
    g = trivial_2gerbe(rng, n_base=2, max_fiber=2)
    for m in g.surj.base:
        assert check_bicat(restrict_to_point(g, m), 1e-9).passed


def test_coherent_model_points_pass(make_rng):
    for seed in range(8):
        g = coherent_2gerbe(make_rng(seed))
        for m in g.surj.base:
            report = check_bicat(restrict_to_point(g, m), 1e-9)
            assert report.passed, (seed, m, report.defects())
            assert report.entries["pentagon"].max_defect <= 1e-9
            for name in ("triangle", "unitor_naturality", "one_cell_inverses"):
                assert not report.entries[name].skipped, name


def test_cyclic_group_passes_every_check():
    report = check_bicat(cyclic_bicat(3))
    assert report.passed
    assert not report.entries["triangle"].skipped
    assert not report.entries["unitor_naturality"].skipped


def test_edited_group_associator_breaks_the_pentagon():
    b = cyclic_bicat(3)
    edited = replace(b, assoc={("1", "1", "1"): 0.25})
    entry = check_bicat(edited).entries["pentagon"]
    assert not entry.passed
    assert len(entry.witness["cells"].split(",")) == 4
    assert "1,1,1" in entry.witness["associators"]
    assert len(entry.witness["associators"]) == 5


def test_edited_point_associator_is_located(rng):
    g = coherent_2gerbe(rng)
    m = g.surj.base[0]
    b = restrict_to_point(g, m)
    key = next(iter(sorted(b.assoc)))
    assoc = dict(b.assoc)
    assoc[key] = assoc[key] + 0.3
    entry = check_bicat(replace(b, assoc=assoc), 1e-9).entries["pentagon"]
    assert not entry.passed
    assert join_key(key) in entry.witness["associators"]


def test_bicat_json_round_trip():
    b = cyclic_bicat(4)
    again = Bicat.from_json(b.to_json())
    assert set(again.cells) == set(b.cells)
    assert check_bicat(again).passed


def test_validate_task_checks_every_point(rng):
    g = coherent_2gerbe(rng)
    out = validate_task.apply(args=[g.to_json(), 1e-9]).get()
    assert out["kind"] == "2gerbe"
    assert out["passed"]
    assert set(out["points"]) == {str(m) for m in g.surj.base}


def test_validate_task_accepts_bicat_documents():
    out = validate_task.apply(args=[cyclic_bicat(2).to_json(), 1e-9]).get()
    assert out["kind"] == "bicat"
    assert out["passed"]


def test_canonical_unitors_solve_the_identity_triangles(rng):
    g = coherent_2gerbe(rng, twisted=True)
    b = restrict_to_point(g, g.surj.base[0])
    for x, e in b.identities.items():
        assert angles.dist(b.right.get(e, 0.0)) <= 1e-12
        assert angles.dist(b.left.get(e, 0.0)) <= 1e-9, x


def test_shifted_right_unitor_breaks_the_triangle(rng):
    g = coherent_2gerbe(rng)
    b = restrict_to_point(g, g.surj.base[0])
    f = sorted(b.cells)[0]
    right = dict(b.right)
    right[f] = right.get(f, 0.0) + 0.3
    report = check_bicat(replace(b, right=right), 1e-9)
    assert not report.entries["triangle"].passed
    assert f in report.entries["triangle"].witness["cells"].split(",")


def test_cell_without_a_reverse_is_named():
    b = Bicat(
        ("x", "y"),
        {"ex": ("x", "x"), "ey": ("y", "y"), "f": ("x", "y")},
        {("ex", "ex"): "ex", ("ey", "ey"): "ey", ("f", "ex"): "f", ("ey", "f"): "f"},
        identities={"x": "ex", "y": "ey"},
    )
    entry = check_bicat(b).entries["one_cell_inverses"]
    assert not entry.passed
    assert entry.witness["cell"] == "f"


def test_idempotent_cell_has_no_inverse_up_to_invertible_two_cells():
    # f∘f = f never reaches the identity; the only 2-cells back to it fail to invert
    b = Bicat(
        ("x",),
        {"u": ("x", "x"), "f": ("x", "x")},
        {("u", "u"): "u", ("u", "f"): "f", ("f", "u"): "f", ("f", "f"): "f"},
        vc={("f", "u", "f"): 0.25},
        identities={"x": "u"},
    )
    entry = check_bicat(b).entries["one_cell_inverses"]
    assert not entry.passed
    assert entry.witness["cell"] == "f"
    assert entry.max_defect == pytest.approx(0.25)


def test_group_elements_find_their_inverses():
    b = cyclic_bicat(5)
    for f in b.cells:
        g, defect = find_inverse(b, f)
        assert (int(f) + int(g)) % 5 == 0
        assert defect == 0.0
