import json

import pytest

from cech.classes import torsion_circle_cocycle
from cech.cochain import delta, random_cochain
from cech.complex import make_boundary_simplex, make_rp2
from cli import runner
from cli.main import main, parse_config
from cli.runner import RunConfig, dump_report, run
from common.errors import NumericDefectExceeded
from common.models import Coeff, Command, RunStatus
from descent.fixtures import break_psi, restricted_global
from gerbes.tasks import validate_gerbe_task
from scripts.make_fixtures import cochain_document
from twogerbe.fixtures import coherent_2gerbe, edit_associator


def write(tmp_path, name, document):
    path = tmp_path / f"{name}.json"
    path.write_text(json.dumps(document), encoding="utf-8")
    return str(path)


def test_cohomology_of_the_four_sphere(tmp_path, capsys):
    path = write(tmp_path, "sphere", make_boundary_simplex(4).to_json())
    assert main(["cohomology", "--input", path, "--degree", "4"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["status"] == "ok"
    assert report["result"]["betti"] == 1
    assert report["result"]["torsion"] == []


def test_cohomology_without_degree_lists_all(tmp_path):
    code, report = run(RunConfig(command=Command.COHOMOLOGY), data=make_rp2().to_json())
    assert code == 0
    assert [(d["betti"], d["torsion"]) for d in report.result["degrees"]] == [(1, []), (0, []), (0, [2])]


def test_unknown_command_exits_one(capsys):
    assert main(["frobnicate"]) == 1


@pytest.mark.parametrize("grid", ["7", "10"])
def test_bad_grid_exits_one(grid):
    assert main(["pi2-demo", "--grid", grid]) == 1


def test_non_positive_tolerance_exits_one():
    assert main(["pontryagin", "--k", "0", "--grid", "16", "--tol", "0"]) == 1


def test_missing_input_file_is_a_validation_failure(tmp_path, capsys):
    assert main(["glue", "--input", str(tmp_path / "nope.json")]) == 1
    report = json.loads(capsys.readouterr().out)
    assert report["status"] == "validation_failure"
    assert report["error"]["error"] == "SchemaError"


def test_malformed_document_is_a_validation_failure():
    code, report = run(RunConfig(command=Command.COHOMOLOGY), data={"faces": [[0, 1]]})
    assert code == 1
    assert report.error["error"] == "SchemaError"


def test_missing_document_is_a_validation_failure():
    code, report = run(RunConfig(command=Command.GLUE))
    assert code == 1
    assert report.status is RunStatus.VALIDATION_FAILURE


def test_gerbe_class_of_the_rp2_torsion_cocycle():
    document = cochain_document(torsion_circle_cocycle(make_rp2(), 2))
    code, report = run(RunConfig(command=Command.GERBE_CLASS), data=document)
    assert code == 0
    assert report.result["class"] == {"degree": 2, "free": [], "torsion": [[1, 2]]}
    assert report.defects["delta"] <= 1e-12


def test_gerbe_class_needs_the_complex():
    document = torsion_circle_cocycle(make_rp2(), 2).to_json()
    code, report = run(RunConfig(command=Command.GERBE_CLASS), data=document)
    assert code == 1


def test_gerbe_class_rejects_non_cocycles(rng):
    document = cochain_document(random_cochain(make_rp2(), 1, Coeff.CIRCLE, rng))
    code, report = run(RunConfig(command=Command.GERBE_CLASS), data=document)
    assert code == 1
    assert report.error["error"] == "NotACocycle"


def test_trivialize_reports_nonzero_classes():
    document = cochain_document(torsion_circle_cocycle(make_rp2(), 2))
    code, report = run(RunConfig(command=Command.TRIVIALIZE), data=document)
    assert code == 0
    assert report.result["trivial"] is False


def test_trivialize_a_coboundary(rng):
    g = delta(random_cochain(make_boundary_simplex(3), 1, Coeff.CIRCLE, rng))
    code, report = run(RunConfig(command=Command.TRIVIALIZE), data=cochain_document(g))
    assert code == 0
    assert report.result["trivial"] is True
    assert report.defects["primitive"] <= 1e-8


def test_glue_restricted_global_gerbe(rng, tmp_path, capsys):
    datum, _ = restricted_global(rng)
    path = write(tmp_path, "descent", datum.to_json())
    assert main(["glue", "--input", path]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["result"]["passed"] is True
    checked = validate_gerbe_task.apply(args=[report["result"]["glued"]["gerbe"]]).get()
    assert checked["groupoid_defect"] <= 1e-9


def test_glue_broken_psi_exits_one(rng):
    datum, _ = restricted_global(rng)
    broken, _, _ = break_psi(datum)
    code, report = run(RunConfig(command=Command.GLUE), data=broken.to_json())
    assert code == 1
    assert report.result["passed"] is False
    assert max(report.defects.values()) > 0.1


def test_coherence_check_on_two_gerbes(rng):
    g = coherent_2gerbe(rng, twisted=True)
    code, report = run(RunConfig(command=Command.COHERENCE_CHECK), data=g.to_json())
    assert code == 0
    assert report.result["kind"] == "2gerbe"
    assert all(value <= 1e-9 for value in report.defects.values())

    edited, _ = edit_associator(g)
    code, report = run(RunConfig(command=Command.COHERENCE_CHECK), data=edited.to_json())
    assert code == 1


def test_pontryagin_trivial_bundle(capsys):
    assert main(["pontryagin", "--k", "0", "--grid", "16"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["result"]["pairing"] == 0
    assert report["result"]["class"]["free"] == [0]
    assert "evaluate" in report["timings"]
    assert "timings" not in report["result"]


def test_numeric_defects_exit_two(monkeypatch):
    def failing(config, data):
        raise NumericDefectExceeded("lifted coboundary is not integral", {"face": "0,1,2,3,4", "integrality": 0.4})

    monkeypatch.setitem(runner.HANDLERS, Command.PONTRYAGIN, failing)
    code, report = run(RunConfig(command=Command.PONTRYAGIN, grid=16))
    assert code == 2
    assert report.status is RunStatus.NUMERIC_DEFECT
    assert report.defects == {"integrality": 0.4}
    assert report.error["witness"]["face"] == "0,1,2,3,4"


def test_reports_are_deterministic_apart_from_timings():
    document = cochain_document(torsion_circle_cocycle(make_rp2(), 2))
    outputs = []
    for _ in range(2):
        _, report = run(RunConfig(command=Command.GERBE_CLASS, seed=3), data=document)
        report.timings = {}
        outputs.append(dump_report(report))
    assert outputs[0] == outputs[1]


def test_text_format_and_output_file(tmp_path):
    path = write(tmp_path, "rp2", make_rp2().to_json())
    out = tmp_path / "report.txt"
    assert main(["cohomology", "-i", path, "--degree", "2", "--format", "text", "-o", str(out)]) == 0
    text = out.read_text(encoding="utf-8")
    assert "cohomology | status: ok" in text
    assert "betti = 0" in text


def test_parse_config_fills_defaults():
    config = parse_config(["pontryagin", "--k", "2", "--grid", "24"])
    assert config.command is Command.PONTRYAGIN
    assert (config.k, config.grid, config.format) == (2, 24, "json")
    assert config.tol is None


@pytest.mark.slow
def test_pi2_demo_with_an_impossible_tolerance_is_a_numeric_defect():
    code, report = run(RunConfig(command=Command.PI2_DEMO, grid=16, seed=7, chains=1, tol=1e-12))
    assert code == 2
    assert set(report.defects) == {"normalization", "bubble", "pentagon", "associator_rows"}
