"""Seeded 2-descent data.

Every datum here is built from one global gerbe G on Y → M: X_i is a
relabeled copy of Y|U_i (ids ``"y/i"``) and the φ_ij move a point to its
copy. ``coherent_twist`` conjugates that datum by random fiber phases μ_i,
point phases e_ij and cover-level phases τ_ij, which keeps every invariant.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from itertools import product
from typing import Dict, List, Tuple

import numpy as np

from common import angles
from descent.gluing import TwoDescentData
from gerbes.finite import FinGerbe, FinSurjection, Point, make_gerbe, restrict_gerbe
from gerbes.fixtures import random_gerbe, random_surjection


def local_id(y: Point, i: int) -> str:
    return f"{y}/{i}"


def underlying(label: str) -> str:
    """Point of Y behind a local id or a glued id ``"i:y/j"``."""
    return label.split(":", 1)[-1].rsplit("/", 1)[0]


def random_cover(rng: np.random.Generator, base: List[Point], n_sets: int) -> List[frozenset]:
    """Random cover whose sets all contain the first base point."""
    sets: List[set] = [{base[0]} for _ in range(n_sets)]
    for m in base[1:]:
        chosen = [i for i in range(n_sets) if rng.random() < 0.5] or [int(rng.integers(n_sets))]
        for i in chosen:
            sets[i].add(m)
    return [frozenset(u) for u in sets]


@dataclass(frozen=True)
class _Twist:
    mu: Dict[int, Dict[Tuple[Point, Point], float]]
    e: Dict[Tuple[int, int], Dict[Point, float]]
    tau: Dict[Tuple[int, int], Dict[Point, float]]


def _zero_twist() -> _Twist:
    return _Twist({}, {}, {})


def _random_twist(rng: np.random.Generator, G: FinGerbe, cover: List[frozenset]) -> _Twist:
    n = len(cover)
    mu = {
        i: {(a, b): (0.0 if a == b else float(rng.random())) for a, b in G.surj.restrict(U).tuples(2)}
        for i, U in enumerate(cover)
    }
    e, tau = {}, {}
    for i, j in product(range(n), repeat=2):
        U = cover[i] & cover[j]
        if i == j or not U:
            continue
        e[(i, j)] = {y: float(rng.random()) for y in G.surj.total if G.surj.proj[y] in U}
        tau[(i, j)] = {m: float(rng.random()) for m in U}
    return _Twist(mu, e, tau)


def _build(G: FinGerbe, cover: List[frozenset], twist: _Twist) -> TwoDescentData:
    n = len(cover)
    proj = G.surj.proj

    def mu(i: int, a: Point, b: Point) -> float:
        return twist.mu.get(i, {}).get((a, b), 0.0)

    def e(i: int, j: int, y: Point) -> float:
        return twist.e.get((i, j), {}).get(y, 0.0)

    def tau(i: int, j: int, m: Point) -> float:
        return twist.tau.get((i, j), {}).get(m, 0.0)

    gerbes = []
    for i, U in enumerate(cover):
        local = restrict_gerbe(G, U)
        relabeled = FinSurjection({local_id(y, i): m for y, m in local.surj.proj.items()}, tuple(U))
        c = {
            tuple(local_id(y, i) for y in t): G.phase(*t) - (mu(i, t[1], t[2]) - mu(i, t[0], t[2]) + mu(i, t[0], t[1]))
            for t in local.surj.tuples(3)
        }
        gerbes.append(make_gerbe(relabeled, c))

    maps, lams, psi = {}, {}, {}
    for i, j in product(range(n), repeat=2):
        U = cover[i] & cover[j]
        if i == j or not U:
            continue
        ys = [y for y in G.surj.total if proj[y] in U]
        maps[(i, j)] = {local_id(y, i): local_id(y, j) for y in ys}
        lams[(i, j)] = {
            (local_id(a, i), local_id(b, i)): mu(j, a, b) - mu(i, a, b) + e(i, j, b) - e(i, j, a)
            for a, b in G.surj.restrict(U).tuples(2)
        }
    for i, j, k in product(range(n), repeat=3):
        U = cover[i] & cover[j] & cover[k]
        if not U or i == j or j == k:
            continue
        psi[(i, j, k)] = {
            local_id(y, i): angles.wrap(
                e(i, k, y) - e(i, j, y) - e(j, k, y)
                + tau(j, k, proj[y]) - tau(i, k, proj[y]) + tau(i, j, proj[y])
            )
            for y in G.surj.total
            if proj[y] in U
        }
    return TwoDescentData(tuple(cover), tuple(gerbes), maps, lams, psi)


def restricted_global(
    rng: np.random.Generator, n_base: int = 4, n_sets: int = 3, max_fiber: int = 2
) -> Tuple[TwoDescentData, FinGerbe]:
    """A random global gerbe and its restriction to a random cover, φ = copy, ψ = 0."""
    G = random_gerbe(random_surjection(rng, n_base=n_base, max_fiber=max_fiber, prefix="y"), rng)
    cover = random_cover(rng, list(G.surj.base), n_sets)
    return _build(G, cover, _zero_twist()), G


def coherent_twist(
    rng: np.random.Generator, n_base: int = 4, n_sets: int = 3, max_fiber: int = 2
) -> Tuple[TwoDescentData, TwoDescentData]:
    """A twisted datum together with the untwisted one it is gauge equivalent to."""
    G = random_gerbe(random_surjection(rng, n_base=n_base, max_fiber=max_fiber, prefix="y"), rng)
    cover = random_cover(rng, list(G.surj.base), n_sets)
    return _build(G, cover, _random_twist(rng, G, cover)), _build(G, cover, _zero_twist())


def break_psi(d: TwoDescentData, amount: float = 0.3) -> Tuple[TwoDescentData, Tuple[int, int, int], Point]:
    """Shift one non-normalized ψ̂ value; returns the new datum and the location."""
    for ijk in sorted(d.psi):
        i, j, k = ijk
        if i != j and j != k and d.psi[ijk]:
            x = sorted(d.psi[ijk])[0]
            psi = {key: dict(values) for key, values in d.psi.items()}
            psi[ijk][x] = angles.wrap(psi[ijk][x] + amount)
            return replace(d, psi=psi), ijk, x
    raise ValueError("datum has no non-normalized transformation to break")
