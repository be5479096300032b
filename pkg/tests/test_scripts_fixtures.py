from cech.complex import Complex
from cli.runner import RunConfig, run
from common.models import Command
from scripts.make_fixtures import build_fixtures


def test_fixtures_are_deterministic():
    assert build_fixtures(11) == build_fixtures(11)


def test_fixtures_drive_the_commands():
    fixtures = build_fixtures(20240607)
    for n in (2, 3, 4):
        assert Complex.from_json(fixtures[f"boundary_simplex_{n}"]).dim == n
    expectations = [
        (Command.GERBE_CLASS, "rp2_torsion_cocycle", 0),
        (Command.TRIVIALIZE, "coboundary_cocycle", 0),
        (Command.GLUE, "descent_restricted_global", 0),
        (Command.GLUE, "descent_broken_psi", 1),
        (Command.COHERENCE_CHECK, "twogerbe_trivial", 0),
        (Command.COHERENCE_CHECK, "twogerbe_twisted", 0),
        (Command.COHERENCE_CHECK, "twogerbe_edited_associator", 1),
    ]
    for command, name, expected in expectations:
        code, report = run(RunConfig(command=command), data=fixtures[name])
        assert code == expected, (name, report.error, report.defects)
