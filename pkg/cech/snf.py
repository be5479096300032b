"""Smith normal form over the integers.

All matrices are numpy arrays of Python ints (``dtype=object``) so that no
entry ever overflows. ``smith_normal_form(A)`` returns unimodular ``U`` and
``V`` together with their inverses such that ``U @ A @ V == S`` is diagonal,
the nonzero diagonal entries come first, are positive and each divides the
next.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional

import numpy as np


def exgcd(a: int, b: int) -> np.ndarray:
    """2x2 integer matrix M with det 1 and M @ [a, b] == [gcd(a, b), 0]."""
    a_sign = -1 if a < 0 else 1
    b_sign = -1 if b < 0 else 1
    a, b = a * a_sign, b * b_sign

    # Euclid on the column [a, b], tracking the row operations.
    M = np.array([[b, 0, 1], [a, 1, 0]], dtype=object)
    while M[1, 0] != 0:
        q = M[0, 0] // M[1, 0]
        M[0] -= q * M[1]
        M = M[::-1]

    g = M[0, 0]
    M = M[:, 1:] * np.array([a_sign, b_sign], dtype=object)
    if g == 0:
        return np.eye(2, dtype=object)
    M[1] = [-b_sign * b // g, a_sign * a // g]
    return M


def inv_unimodular_2x2(M: np.ndarray) -> np.ndarray:
    return np.array([[M[1, 1], -M[0, 1]], [-M[1, 0], M[0, 0]]], dtype=object)


@dataclass(frozen=True, eq=False)
class SmithForm:
    S: np.ndarray
    U: np.ndarray
    V: np.ndarray
    U_inv: np.ndarray
    V_inv: np.ndarray
    rank: int

    @property
    def divisors(self) -> List[int]:
        return [int(self.S[i, i]) for i in range(self.rank)]

    def kernel(self) -> np.ndarray:
        """Columns spanning the integer kernel of the original matrix."""
        return self.V[:, self.rank:]


def as_int_matrix(A: np.ndarray) -> np.ndarray:
    A = np.asarray(A)
    out = np.empty(A.shape, dtype=object)
    for idx, value in np.ndenumerate(A):
        out[idx] = int(value)
    return out


def smith_normal_form(A: np.ndarray) -> SmithForm:
    D = as_int_matrix(A).copy()
    m, n = D.shape
    U, U_inv = np.eye(m, dtype=object), np.eye(m, dtype=object)
    V, V_inv = np.eye(n, dtype=object), np.eye(n, dtype=object)

    def swap_rows(i: int, j: int) -> None:
        if i != j:
            D[[i, j]] = D[[j, i]]
            U[[i, j]] = U[[j, i]]
            U_inv[:, [i, j]] = U_inv[:, [j, i]]

    def swap_cols(i: int, j: int) -> None:
        if i != j:
            D[:, [i, j]] = D[:, [j, i]]
            V[:, [i, j]] = V[:, [j, i]]
            V_inv[[i, j]] = V_inv[[j, i]]

    def clear_col(t: int) -> bool:
        if (D[t + 1:, t] == 0).all():
            return False
        for j in range(t + 1, m):
            if D[j, t] == 0:
                continue
            M = exgcd(D[t, t], D[j, t])
            D[[t, j]] = M @ D[[t, j]]
            U[[t, j]] = M @ U[[t, j]]
            U_inv[:, [t, j]] = U_inv[:, [t, j]] @ inv_unimodular_2x2(M)
        return True

    def clear_row(t: int) -> bool:
        if (D[t, t + 1:] == 0).all():
            return False
        for j in range(t + 1, n):
            if D[t, j] == 0:
                continue
            M = exgcd(D[t, t], D[t, j]).T
            D[:, [t, j]] = D[:, [t, j]] @ M
            V[:, [t, j]] = V[:, [t, j]] @ M
            V_inv[[t, j]] = inv_unimodular_2x2(M) @ V_inv[[t, j]]
        return True

    rank = 0
    for t in range(min(m, n)):
        block = D[t:, t:]
        nonzero = [(abs(block[i, j]), i, j) for i, j in zip(*np.nonzero(block != 0))]
        if not nonzero:
            break
        _, i, j = min(nonzero)
        swap_rows(t, t + i)
        swap_cols(t, t + j)
        while True:
            clear_col(t)
            while clear_row(t) and clear_col(t):
                pass
            bad = [i for i in range(t + 1, m) if any(D[i, j] % D[t, t] for j in range(t + 1, n))]
            if not bad:
                break
            # fold a row holding a non-multiple into the pivot row
            i = bad[0]
            D[t] = D[t] + D[i]
            U[t] = U[t] + U[i]
            U_inv[:, i] = U_inv[:, i] - U_inv[:, t]
        if D[t, t] < 0:
            D[t] = -D[t]
            U[t] = -U[t]
            U_inv[:, t] = -U_inv[:, t]
        rank += 1

    return SmithForm(D, U, V, U_inv, V_inv, rank)


def solve_integer(form: SmithForm, b: np.ndarray) -> Optional[np.ndarray]:
    """Integer x with A x = b for the matrix behind ``form``; None if none exists."""
    y = form.U @ as_int_matrix(b)
    if any(y[i] != 0 for i in range(form.rank, len(y))):
        return None
    w = np.zeros(form.V.shape[0], dtype=object)
    for i, d in enumerate(form.divisors):
        if y[i] % d:
            return None
        w[i] = y[i] // d
    return form.V @ w
