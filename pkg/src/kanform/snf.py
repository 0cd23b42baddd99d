"""Smith normal form over the integers, with transform matrices and an
integer linear solver built on it.

All matrices are numpy arrays with dtype=object (python ints) to avoid
overflow; inputs may be ordinary int arrays or nested lists.
"""

from __future__ import annotations

from typing import List, Optional, Tuple

import numpy as np


def _as_int_matrix(A) -> np.ndarray:
    M = np.array(A, dtype=object)
    if M.ndim != 2:
        M = M.reshape(M.shape[0], -1) if M.ndim == 1 else M
    return M


def smith_normal_form(A) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Return (U, S, V) with U A V = S diagonal, U and V unimodular.

    Diagonal entries are nonnegative and each divides the next.
    """
    S = _as_int_matrix(A).copy()
    m, n = S.shape
    U = np.eye(m, dtype=object)
    V = np.eye(n, dtype=object)

    def swap_rows(i, j):
        S[[i, j], :] = S[[j, i], :]
        U[[i, j], :] = U[[j, i], :]

    def swap_cols(i, j):
        S[:, [i, j]] = S[:, [j, i]]
        V[:, [i, j]] = V[:, [j, i]]

    def add_row(dst, src, c):
        S[dst, :] += c * S[src, :]
        U[dst, :] += c * U[src, :]

    def add_col(dst, src, c):
        S[:, dst] += c * S[:, src]
        V[:, dst] += c * V[:, src]

    t = 0
    while t < min(m, n):
        # find pivot of least absolute value in the remaining block
        piv = None
        best = None
        for i in range(t, m):
            for j in range(t, n):
                v = abs(S[i, j])
                if v and (best is None or v < best):
                    best, piv = v, (i, j)
        if piv is None:
            break
        swap_rows(t, piv[0])
        swap_cols(t, piv[1])
        dirty = False
        for i in range(t + 1, m):
            if S[i, t]:
                q = S[i, t] // S[t, t]
                add_row(i, t, -q)
                dirty = dirty or bool(S[i, t])
        for j in range(t + 1, n):
            if S[t, j]:
                q = S[t, j] // S[t, t]
                add_col(j, t, -q)
                dirty = dirty or bool(S[t, j])
        if dirty:
            continue
        # enforce divisibility of the remaining block by the pivot
        stuck = False
        for i in range(t + 1, m):
            for j in range(t + 1, n):
                if S[i, j] % S[t, t]:
                    add_row(t, i, 1)
                    stuck = True
                    break
            if stuck:
                break
        if stuck:
            continue
        if S[t, t] < 0:
            S[t, :] = -S[t, :]
            U[t, :] = -U[t, :]
        t += 1
    return U, S, V


def invariant_factors(A) -> List[int]:
    """Nonzero diagonal entries of the Smith form."""
    _, S, _ = smith_normal_form(A)
    return [int(S[i, i]) for i in range(min(S.shape)) if S[i, i]]


def solve_integer(A, b) -> Optional[np.ndarray]:
    """One integer solution x of A x = b, or None if there is none."""
    A = _as_int_matrix(A)
    bvec = np.array(b, dtype=object).reshape(-1)
    m, n = A.shape
    if bvec.shape[0] != m:
        raise ValueError("shape mismatch in solve_integer")
    U, S, V = smith_normal_form(A)
    c = U @ bvec
    y = np.zeros(n, dtype=object)
    r = min(m, n)
    for i in range(m):
        d = S[i, i] if i < r else 0
        if d:
            if c[i] % d:
                return None
            y[i] = c[i] // d
        elif c[i]:
            return None
    return V @ y


def nullspace_basis(A) -> List[np.ndarray]:
    """Integer basis of the kernel of A."""
    A = _as_int_matrix(A)
    _, S, V = smith_normal_form(A)
    m, n = A.shape
    rank = sum(1 for i in range(min(m, n)) if S[i, i])
    return [V[:, j].copy() for j in range(rank, n)]
