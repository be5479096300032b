"""Finite bicategories sampled from a chain of paths in SU(2).

Objects are the chain's endpoints and 1-cells every bracketed composite of a
run of consecutive paths. Each pair of parallel 1-cells gets a reference
homotopy (the filler between them, or the constant homotopy on the diagonal),
and every structure phase is the ν-volume of a filling from the composite of
reference homotopies to the reference homotopy on its boundary.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import product
from typing import Dict, List, Optional, Sequence, Tuple

from celery.utils.log import get_logger

from common import angles
from common.errors import EndpointMismatch
from pathsu2.compose import associator_square, compose_paths, compose_squares
from pathsu2.fill import fill_square
from pathsu2.grids import MATCH_TOL, Path, Square, constant_square, match_defect, stack_squares
from pathsu2.homotopy import homotopy_integral
from twogerbe.bicat import Bicat

logger = get_logger(__name__)

Span = Tuple[int, int]


def _word(g: str, f: str) -> str:
    return f"({g}*{f})"


def export_bicat(paths: Sequence[Path], n: Optional[int] = None) -> Bicat:
    """Sample the sub-bicategory generated by a composable chain (earliest first)."""
    n = max(p.n for p in paths) if n is None else n
    chain = [p.resample(n) for p in paths]
    for k, (first, then) in enumerate(zip(chain, chain[1:])):
        defect = match_defect(first.end, then.start)
        if defect > MATCH_TOL:
            raise EndpointMismatch("chain is not composable", {"index": k + 1, "defect": defect})

    objects = tuple(f"x{i}" for i in range(len(chain) + 1))
    words: Dict[Span, List[str]] = {}
    path_of: Dict[str, Path] = {}
    for i, p in enumerate(chain):
        words[(i, i + 1)] = [f"p{i}"]
        path_of[f"p{i}"] = p
    compose: Dict[Tuple[str, str], str] = {}
    for length in range(2, len(chain) + 1):
        for i in range(len(chain) - length + 1):
            k = i + length
            out: List[str] = []
            for j in range(i + 1, k):
                for g, f in product(words[(j, k)], words[(i, j)]):
                    w = _word(g, f)
                    compose[(g, f)] = w
                    path_of[w] = compose_paths(path_of[g], path_of[f])
                    out.append(w)
            words[(i, k)] = out
    cells = {w: (f"x{i}", f"x{k}") for (i, k), ws in words.items() for w in ws}

    @lru_cache(maxsize=None)
    def reference(f: str, g: str) -> Square:
        if f == g:
            return constant_square(path_of[f])
        return fill_square(path_of[f], path_of[g])

    def phase(m: Square, f: str, g: str) -> float:
        return angles.wrap(homotopy_integral(m, reference(f, g)))

    vc = {}
    for hom in words.values():
        for f, g, h in product(hom, repeat=3):
            vc[(f, g, h)] = phase(stack_squares([reference(f, g), reference(g, h)]), f, h)

    hc = {}
    spans = sorted(words)
    for (i, j), (j2, k) in product(spans, spans):
        if j != j2:
            continue
        for (g, g2), (f, f2) in product(product(words[(j, k)], repeat=2), product(words[(i, j)], repeat=2)):
            square = compose_squares(reference(g, g2), reference(f, f2), "horizontal")
            hc[(g, f, g2, f2)] = phase(square, compose[(g, f)], compose[(g2, f2)])

    assoc = {}
    for (i, j), (j2, k), (k2, m) in product(spans, spans, spans):
        if j != j2 or k != k2:
            continue
        for h, g, f in product(words[(k, m)], words[(j, k)], words[(i, j)]):
            square = associator_square(path_of[h], path_of[g], path_of[f])
            assoc[(h, g, f)] = phase(square, compose[(compose[(h, g)], f)], compose[(h, compose[(g, f)])])

    logger.info(
        "Exported %d objects, %d 1-cells, %d vertical, %d horizontal and %d associator phases",
        len(objects), len(cells), len(vc), len(hc), len(assoc),
    )
    return Bicat(objects, cells, compose, vc, hc, assoc)
