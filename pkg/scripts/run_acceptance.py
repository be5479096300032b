"""Run the acceptance sweep and print one row per criterion.

Usage::

    python -m scripts.run_acceptance            # everything, Pontryagin included
    python -m scripts.run_acceptance --skip-slow

Exit status is 0 when every criterion passes.
"""

import argparse
import sys
import time
from dataclasses import dataclass
from typing import Callable, List, Tuple

import numpy as np

from cech.classes import circle_class, cohomology, torsion_circle_cocycle
from cech.cochain import delta, product_cocycle, random_cochain
from cech.complex import make_boundary_simplex, make_rp2
from common.models import Coeff
from descent.fixtures import break_psi, restricted_global
from descent.gluing import validate_2descent
from descent.tasks import glue_task
from gerbes.tasks import check_laws_task
from pathsu2.fixtures import random_chain
from pathsu2.homotopy import pentagon_defect
from pathsu2.nu import exp_chart, integrate_nu_cube
from pontryagin.tasks import compute_p1_task
from twogerbe.cocycle import cocycle_defect, extract_3cocycle
from twogerbe.fixtures import coherent_2gerbe, edit_associator, trivial_2gerbe
from twogerbe.model import validate_2gerbe

SEED = 20240607


@dataclass
class Criterion:
    name: str
    check: Callable[[np.random.Generator], Tuple[bool, str]]
    slow: bool = False


def delta_squared(rng):
    worst = 0.0
    complexes = [make_boundary_simplex(n) for n in (2, 3, 4)] + [make_rp2()]
    for trial in range(1000):
        K = complexes[trial % len(complexes)]
        degree = int(rng.integers(0, K.dim - 1))
        coeff = Coeff.INTEGER if trial % 2 else Coeff.CIRCLE
        worst = max(worst, delta(delta(random_cochain(K, degree, coeff, rng))).max_abs())
    return worst <= 1e-12, f"max |δδc| = {worst:.1e}"


def sphere_cohomology(rng):
    ok = all(cohomology(make_boundary_simplex(n), n) == (1, []) for n in (2, 3, 4))
    ok &= all(cohomology(make_boundary_simplex(n), j) == (0, []) for n in (2, 3, 4) for j in range(1, n))
    ok &= cohomology(make_rp2(), 2) == (0, [2])
    return ok, "∂Δ³..∂Δ⁵ and RP²"


def gauge_invariance(rng):
    K = make_rp2()
    g = torsion_circle_cocycle(K, 2)
    base = circle_class(g, 1e-9)
    changed = 0
    for _ in range(200):
        h = random_cochain(K, 0, Coeff.CIRCLE, rng)
        if circle_class(product_cocycle(g, delta(h)), 1e-9) != base:
            changed += 1
    return changed == 0 and base.torsion == ((1, 2),), f"class {base.torsion}, {changed}/200 changed"


def two_category_laws(rng):
    worst = check_laws_task.apply(args=[int(rng.integers(1 << 30)), 20]).get()
    top = max(worst.values())
    return top <= 1e-12, f"worst law defect {top:.1e}"


def two_descent(rng):
    glued = broken = 0
    for _ in range(50):
        datum, _ = restricted_global(rng)
        glued += glue_task.apply(args=[datum.to_json(), 1e-9]).get()["passed"]
        bad, _, _ = break_psi(datum)
        broken += not validate_2descent(bad, 1e-9).passed
    return glued == 50 and broken == 50, f"glued {glued}/50, broken detected {broken}/50"


def two_gerbe(rng):
    passed = validate_2gerbe(trivial_2gerbe(rng), 1e-9).passed
    twisted = coherent_2gerbe(rng, twisted=True)
    passed &= validate_2gerbe(twisted, 1e-9).passed
    edited, _ = edit_associator(twisted)
    passed &= not validate_2gerbe(edited, 1e-9).passed
    defect = cocycle_defect(extract_3cocycle(twisted))
    return passed and defect <= 1e-12, f"δε = {defect:.1e}"


def normalization(rng):
    value = integrate_nu_cube(exp_chart(48))
    return abs(value - 1.0) <= 5e-3, f"∫ν = {value:.5f}"


def pentagon(rng):
    chains = [(random_chain(rng, 4, 16), random_chain(rng, 4, 32)) for _ in range(20)]
    coarse = max(pentagon_defect(*c16) for c16, _ in chains)
    fine = max(pentagon_defect(*c32) for _, c32 in chains)
    return fine <= 5e-3, f"N=16: {coarse:.1e}  N=32: {fine:.1e}"


def pontryagin(rng):
    pairings, signs = {}, set()
    for k in (-1, 0, 1, 2):
        report = compute_p1_task.apply(args=[k, 24]).get()
        pairings[k] = report["pairing"]
        if report["sign"] is not None:
            signs.add(report["sign"])
    sign = next(iter(signs)) if len(signs) == 1 else None
    ok = sign is not None and all(abs(pairings[k]) == abs(k) for k in pairings)
    return ok, f"pairings {pairings}, sign {sign}"


CRITERIA: List[Criterion] = [
    Criterion("δ² = 0", delta_squared),
    Criterion("cohomology fixtures", sphere_cohomology),
    Criterion("circle class gauge invariance", gauge_invariance),
    Criterion("2-category laws", two_category_laws),
    Criterion("2-descent gluing", two_descent),
    Criterion("2-gerbe coherence", two_gerbe),
    Criterion("ν normalization", normalization),
    Criterion("pentagon integral", pentagon),
    Criterion("first Pontryagin class", pontryagin, slow=True),
]


def main() -> int:
    ap = argparse.ArgumentParser(description="gerbe-lab acceptance sweep")
    ap.add_argument("--skip-slow", action="store_true")
    ap.add_argument("--seed", type=int, default=SEED)
    args = ap.parse_args()

    failures = 0
    print(f"{'criterion':34} {'ok':4} {'seconds':>8}  detail")
    for criterion in CRITERIA:
        if criterion.slow and args.skip_slow:
            print(f"{criterion.name:34} {'--':4} {'':>8}  skipped")
            continue
        started = time.perf_counter()
        ok, detail = criterion.check(np.random.default_rng(args.seed))
        failures += not ok
        print(f"{criterion.name:34} {'yes' if ok else 'NO':4} {time.perf_counter() - started:8.2f}  {detail}")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
