"""Write the JSON fixtures consumed by the command line.

Usage::

    python -m scripts.make_fixtures --out fixtures --seed 20240607

Then, for example::

    python -m cli.main cohomology --input fixtures/boundary_simplex_4.json --degree 4
    python -m cli.main glue --input fixtures/descent_restricted_global.json
"""

import argparse
import json
from pathlib import Path
from typing import Any, Dict

import numpy as np

from cech.classes import torsion_circle_cocycle
from cech.cochain import Cochain, delta, random_cochain
from cech.complex import Complex, make_boundary_simplex, make_rp2
from common.models import Coeff
from descent.fixtures import break_psi, restricted_global
from twogerbe.fixtures import coherent_2gerbe, edit_associator, trivial_2gerbe


def cochain_document(g: Cochain) -> Dict[str, Any]:
    return {**g.to_json(), "complex": g.complex.to_json()}


def build_fixtures(seed: int) -> Dict[str, Dict[str, Any]]:
    """Fixture name → JSON document, deterministic in ``seed``."""
    rng = np.random.default_rng(seed)
    out: Dict[str, Dict[str, Any]] = {}
    for n in (2, 3, 4):
        out[f"boundary_simplex_{n}"] = make_boundary_simplex(n).to_json()
    rp2: Complex = make_rp2()
    out["rp2"] = rp2.to_json()

    out["rp2_torsion_cocycle"] = cochain_document(torsion_circle_cocycle(rp2, 2))
    sphere = make_boundary_simplex(3)
    out["coboundary_cocycle"] = cochain_document(delta(random_cochain(sphere, 1, Coeff.CIRCLE, rng)))

    datum, _ = restricted_global(rng)
    out["descent_restricted_global"] = datum.to_json()
    broken, _, _ = break_psi(datum)
    out["descent_broken_psi"] = broken.to_json()

    out["twogerbe_trivial"] = trivial_2gerbe(rng).to_json()
    twisted = coherent_2gerbe(rng, twisted=True)
    out["twogerbe_twisted"] = twisted.to_json()
    edited, _ = edit_associator(twisted)
    out["twogerbe_edited_associator"] = edited.to_json()
    return out


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="fixtures")
    ap.add_argument("--seed", type=int, default=20240607)
    args = ap.parse_args()

    target = Path(args.out)
    target.mkdir(parents=True, exist_ok=True)
    for name, document in build_fixtures(args.seed).items():
        path = target / f"{name}.json"
        path.write_text(json.dumps(document, indent=2, sort_keys=True) + "\n", encoding="utf-8")
        print(f"Wrote {path}")


if __name__ == "__main__":
    main()
