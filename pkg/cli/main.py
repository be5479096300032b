"""gerbe-lab command line.

Usage::

    python -m cli.main cohomology --input fixtures/boundary_simplex_5.json --degree 4
    python -m cli.main pontryagin --k 1 --grid 24
    python -m cli.main pi2-demo --grid 32 --seed 7 --format text

The JSON report goes to stdout (or ``--output``); logs go to stderr.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional

from pydantic import ValidationError

from cli.runner import RunConfig, dump_report, run
from common.errors import SchemaError
from common.models import Command
from reporter.render import render_text

logger = logging.getLogger("gerbe_lab.cli")


class _Parser(argparse.ArgumentParser):
    """Usage errors are validation failures (exit 1), not argparse's exit 2."""

    def error(self, message: str) -> None:  # type: ignore[override]
        raise SchemaError(message, {"prog": self.prog})


def _common(p: argparse.ArgumentParser, *, needs_input: bool = False) -> None:
    if needs_input:
        p.add_argument("--input", "-i", required=True, help="JSON input document")
    p.add_argument("--tol", type=float, default=None, help="Tolerance (defaults per command)")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--output", "-o", default=None, help="Write the report here instead of stdout")
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.add_argument("--verbose", "-v", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="gerbe-lab", description="Čech classes, gerbes, 2-gerbes and the SU(2) Pontryagin pipeline")
    sub = ap.add_subparsers(dest="command", required=True)

    c = sub.add_parser(Command.COHOMOLOGY.value, help="Integer cohomology of a complex")
    _common(c, needs_input=True)
    c.add_argument("--degree", "-k", type=int, default=None, help="Single degree (default: all)")

    for command, text in (
        (Command.GERBE_CLASS, "Integer class of a circle cocycle"),
        (Command.TRIVIALIZE, "Primitive of a circle cocycle with zero class"),
        (Command.GLUE, "Validate and glue 2-descent data"),
        (Command.COHERENCE_CHECK, "Coherence of a finite 2-gerbe or bicategory"),
    ):
        _common(sub.add_parser(command.value, help=text), needs_input=True)

    d = sub.add_parser(Command.PI2_DEMO.value, help="Π₂(SU(2)) normalization, bubble and pentagon checks")
    _common(d)
    d.add_argument("--grid", type=int, default=None)
    d.add_argument("--chains", type=int, default=5)

    p = sub.add_parser(Command.PONTRYAGIN.value, help="First Pontryagin class of a clutched bundle over S⁴")
    _common(p)
    p.add_argument("--k", type=int, default=1, help="Instanton number")
    p.add_argument("--grid", type=int, default=None)
    p.add_argument("--arc-steps", type=int, default=None)
    return ap


def parse_config(argv: Optional[List[str]] = None) -> RunConfig:
    args = vars(build_parser().parse_args(argv))
    return RunConfig(**{key: value for key, value in args.items() if value is not None})


def _emit(text: str, output: Optional[str]) -> None:
    if output:
        Path(output).write_text(text + "\n", encoding="utf-8")
    else:
        sys.stdout.write(text + "\n")


def main(argv: Optional[List[str]] = None) -> int:
    try:
        config = parse_config(argv)
    except (SchemaError, ValidationError) as exc:
        logging.basicConfig(level=logging.WARNING, stream=sys.stderr)
        logger.error("Invalid invocation: %s", exc)
        return 1

    logging.basicConfig(
        level=logging.INFO if config.verbose else logging.WARNING,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    code, report = run(config)
    _emit(render_text(report) if config.format == "text" else dump_report(report), config.output)
    return code


if __name__ == "__main__":
    sys.exit(main())
