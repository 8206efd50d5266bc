"""Row reduction over F_p on int64 numpy arrays."""
from __future__ import annotations

import numpy as np


def rref(M, p: int):
    """Reduced row echelon form of ``M`` over F_p.

    Pivots are the first nonzero entry of each row, columns scanned left to
    right, so the result depends only on the row space.  Returns
    ``(R, pivots)`` with ``R`` holding exactly ``len(pivots)`` rows.
    """
    A = np.array(M, dtype=np.int64, copy=True) % p
    if A.ndim != 2:
        raise ValueError("rref expects a 2-d array")
    rows, cols = A.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(A[r:, c])
        if nz.size == 0:
            continue
        k = r + nz[0]
        if k != r:
            A[[r, k]] = A[[k, r]]
        A[r] = A[r] * pow(int(A[r, c]), -1, p) % p
        col = A[:, c].copy()
        col[r] = 0
        hit = np.flatnonzero(col)
        if hit.size:
            A[hit] = (A[hit] - np.outer(col[hit], A[r])) % p
        pivots.append(c)
        r += 1
    return A[:r], pivots


def rank(M, p: int) -> int:
    M = np.asarray(M)
    if M.size == 0:
        return 0
    return len(rref(M, p)[1])


def nullspace(M, p: int) -> np.ndarray:
    """Basis (as rows) of ``{v : M v = 0}`` over F_p, one row per free column."""
    M = np.asarray(M, dtype=np.int64)
    n = M.shape[1]
    if M.shape[0] == 0:
        return np.eye(n, dtype=np.int64)
    R, piv = rref(M, p)
    free = [c for c in range(n) if c not in set(piv)]
    out = np.zeros((len(free), n), dtype=np.int64)
    for k, f in enumerate(free):
        out[k, f] = 1
        for row, pc in enumerate(piv):
            out[k, pc] = (-R[row, f]) % p
    return out


def quotient_projection(R, pivots, n: int, p: int):
    """Projection ``F_p^n -> F_p^n / rowspace(R)`` in the basis of non-pivot columns.

    Returns ``(P, free)`` where ``P`` is ``n x len(free)`` and ``v @ P`` gives
    the coordinates of the image of ``v``.
    """
    pivset = set(pivots)
    free = [c for c in range(n) if c not in pivset]
    P = np.zeros((n, len(free)), dtype=np.int64)
    for k, f in enumerate(free):
        P[f, k] = 1
    if free:
        for row, pc in enumerate(pivots):
            P[pc] = (-R[row, free]) % p
    return P, free
