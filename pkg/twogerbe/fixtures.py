"""Seeded finite 2-gerbes.

``coherent_2gerbe`` writes every structure phase in trivialized form: Q has
cocycle δb, the product morphism is built from b and a random phase D on
composable pairs, and the associator is whatever makes the two routes agree,
shifted by an optional X-quadruple phase κ. κ = δη keeps the model coherent;
any other κ breaks only the five-term coherence.
"""

from __future__ import annotations

from itertools import product
from typing import Dict, Optional, Tuple

import numpy as np

from gerbes.finite import FinSurjection, Point, fiber_coboundary
from gerbes.fixtures import random_surjection
from twogerbe.model import Fin2Gerbe, YPair, twist_associator

XQuad = Tuple[Point, Point, Point, Point]


def trivial_2gerbe(rng: np.random.Generator, n_base: int = 2, max_fiber: int = 2, order: int = 2) -> Fin2Gerbe:
    """Y over (x1, x2) is ℤ/order; the product adds and every phase is 0."""
    surj = random_surjection(rng, n_base=n_base, max_fiber=max_fiber)
    y = {f"{x1}~{x2}~{k}": (x1, x2) for x1, x2 in surj.tuples(2) for k in range(order)}
    m = {}
    for x1, x2, x3 in surj.tuples(3):
        for k23, k12 in product(range(order), repeat=2):
            m[(f"{x2}~{x3}~{k23}", f"{x1}~{x2}~{k12}")] = f"{x1}~{x3}~{(k23 + k12) % order}"
    return Fin2Gerbe(surj, y, m)


def coboundary_kappa(surj: FinSurjection, eta: Dict[Tuple[Point, Point, Point], float]) -> Dict[XQuad, float]:
    """κ = δη for a phase η on fiberwise X-triples."""
    out = {}
    for x1, x2, x3, x4 in surj.tuples(4):
        out[(x1, x2, x3, x4)] = (
            eta.get((x2, x3, x4), 0.0) - eta.get((x1, x3, x4), 0.0) + eta.get((x1, x2, x4), 0.0) - eta.get((x1, x2, x3), 0.0)
        )
    return out


def random_kappa(surj: FinSurjection, rng: np.random.Generator) -> Dict[XQuad, float]:
    return {quad: float(rng.random()) for quad in surj.tuples(4)}


def coherent_2gerbe(
    rng: np.random.Generator,
    n_base: int = 2,
    max_fiber: int = 2,
    max_y: int = 2,
    twisted: bool = True,
) -> Fin2Gerbe:
    """A 2-gerbe passing every check; ``twisted`` adds κ = δη for a random η."""
    surj = random_surjection(rng, n_base=n_base, max_fiber=max_fiber)
    y: Dict[Point, Tuple[Point, Point]] = {}
    for x1, x2 in surj.tuples(2):
        for _ in range(int(rng.integers(1, max_y + 1))):
            y[f"y{len(y)}"] = (x1, x2)
    y_surj = FinSurjection(y)

    b_vals = {(a, c): (0.0 if a == c else float(rng.random())) for a, c in y_surj.tuples(2)}

    def b(a: Point, c: Point) -> float:
        return b_vals[(a, c)]

    c_fn = fiber_coboundary(b)
    c = {t: c_fn(*t) for t in y_surj.tuples(3)}

    shell = Fin2Gerbe(surj, y, {})
    m: Dict[YPair, Point] = {}
    D: Dict[YPair, float] = {}
    for x1, x2, x3 in surj.tuples(3):
        targets = shell.fiber(x1, x3)
        for pair in shell.composable((x1, x2, x3)):
            m[pair] = targets[int(rng.integers(len(targets)))]
            D[pair] = float(rng.random())

    def mul(later: Point, earlier: Point) -> Point:
        return m[(later, earlier)]

    m_hat = {}
    for x1, x2, x3 in surj.tuples(3):
        pairs = list(shell.composable((x1, x2, x3)))
        for p, q in product(pairs, repeat=2):
            m_hat[p + q] = b(p[0], q[0]) + b(p[1], q[1]) - b(mul(*p), mul(*q)) + D[q] - D[p]

    a_hat = {}
    for xs in surj.tuples(4):
        for w in shell.composable(xs):
            y34, y23, y12 = w
            d1 = D[(y34, y23)] + D[(mul(y34, y23), y12)]
            d2 = D[(y23, y12)] + D[(y34, mul(y23, y12))]
            a_hat[w] = d2 - d1 - b(mul(mul(y34, y23), y12), mul(y34, mul(y23, y12)))

    g = Fin2Gerbe(surj, y, m, c, m_hat, a_hat)
    if twisted:
        eta = {t: float(rng.random()) for t in surj.tuples(3)}
        g = twist_associator(g, coboundary_kappa(surj, eta))
    return g


def constant_associator(g: Fin2Gerbe, value: float) -> Fin2Gerbe:
    """Replace every associator value by one constant."""
    a_hat = {w: value for xs in g.x_tuples(4) for w in g.composable(xs)}
    return Fin2Gerbe(g.surj, g.y, g.m, g.c, g.m_hat, a_hat)


def edit_associator(g: Fin2Gerbe, amount: float = 0.3, rng: Optional[np.random.Generator] = None) -> Tuple[Fin2Gerbe, tuple]:
    """Shift one associator value; returns the edited 2-gerbe and the shifted triple."""
    triples = [w for xs in g.x_tuples(4) for w in g.composable(xs)]
    w = triples[int(rng.integers(len(triples)))] if rng is not None else triples[0]
    a_hat = dict(g.a_hat)
    a_hat[w] = a_hat.get(w, 0.0) + amount
    return Fin2Gerbe(g.surj, g.y, g.m, g.c, g.m_hat, a_hat), w
