"""Seeded random finite gerbes, morphisms and transformations."""

from __future__ import annotations

from typing import Optional, Sequence

import numpy as np

from common import angles
from gerbes.finite import (
    FinGerbe,
    FinSurjection,
    GerbeMorphism,
    contract,
    fiber_coboundary,
    make_gerbe,
    make_morphism,
)
from gerbes.twocat import Transformation


def random_surjection(
    rng: np.random.Generator, n_base: int = 3, max_fiber: int = 3, prefix: str = "x", base: Optional[Sequence[str]] = None
) -> FinSurjection:
    base = list(base) if base is not None else [f"m{i}" for i in range(n_base)]
    proj = {}
    for m in base:
        for _ in range(int(rng.integers(1, max_fiber + 1))):
            proj[f"{prefix}{len(proj)}"] = m
    return FinSurjection(proj)


def random_gerbe(surj: FinSurjection, rng: np.random.Generator) -> FinGerbe:
    """c = δb for random fiber-pair angles b vanishing on the diagonal."""
    b = {(x1, x2): (0.0 if x1 == x2 else float(rng.random())) for x1, x2 in surj.tuples(2)}
    c = fiber_coboundary(lambda x1, x2: b[(x1, x2)])
    return make_gerbe(surj, {t: c(*t) for t in surj.tuples(3)})


def random_morphism(P: FinGerbe, Q: FinGerbe, rng: np.random.Generator) -> GerbeMorphism:
    """Random fiber map with λ = contract(c_P − f*c_Q) + δd."""
    f = {x: Q.surj.fiber(P.surj.proj[x])[int(rng.integers(len(Q.surj.fiber(P.surj.proj[x]))))] for x in P.surj.total}
    base_lam = contract(P.surj, lambda a, b, c: P.phase(a, b, c) - Q.phase(f[a], f[b], f[c]))
    d = {x: float(rng.random()) for x in P.surj.total}
    lam = {(x1, x2): angles.wrap(v + d[x2] - d[x1]) for (x1, x2), v in base_lam.items()}
    return make_morphism(P, Q, f, lam)


def random_transformation(f: GerbeMorphism, g: GerbeMorphism, rng: np.random.Generator) -> Transformation:
    return Transformation(f, g, {m: float(rng.random()) for m in f.source.surj.base})


def gerbe_family(rng: np.random.Generator, n_base: int = 3, max_fiber: int = 3, count: int = 3):
    """Gerbes over one base, each on its own surjection."""
    base = [f"m{i}" for i in range(n_base)]
    return [
        random_gerbe(random_surjection(rng, max_fiber=max_fiber, prefix=f"{chr(ord('p') + i)}", base=base), rng)
        for i in range(count)
    ]
