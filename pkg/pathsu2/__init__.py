"""Sampled paths, homotopies and ν-volumes in SU(2)."""

from pathsu2.compose import (  # noqa: F401
    associator_square,
    compose_paths,
    compose_squares,
    identity_square,
    whisker_left,
    whisker_right,
)
from pathsu2.fill import fill_cube, fill_square  # noqa: F401
from pathsu2.grids import Cube, Path, Square, constant_square, reverse_square, stack_squares  # noqa: F401
from pathsu2.homotopy import equiv_check, pentagon_defect  # noqa: F401
from pathsu2.nu import degree_s3, integrate_nu_cube  # noqa: F401
