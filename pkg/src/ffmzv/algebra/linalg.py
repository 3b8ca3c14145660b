"""Gaussian elimination over F_q on integer-code matrices."""

from __future__ import annotations

import numpy as np

from .field import FieldConfig


def rref(F: FieldConfig, M):
    """Reduced row echelon form and pivot columns."""
    A = np.array(M, dtype=np.int64, copy=True)
    if A.ndim != 2:
        raise ValueError("matrix expected")
    rows, cols = A.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(A[r:, c])
        if len(nz) == 0:
            continue
        p = r + int(nz[0])
        if p != r:
            A[[r, p]] = A[[p, r]]
        A[r] = F.vscale(A[r], F.inv(int(A[r, c])))
        for i in np.flatnonzero(A[:, c]):
            if i != r:
                A[i] = F.vsub(A[i], F.vscale(A[r], int(A[i, c])))
        pivots.append(c)
        r += 1
    return A, pivots


def nullspace(F: FieldConfig, M, ncols: int | None = None):
    """Basis of {x : M x = 0} as code vectors."""
    M = np.asarray(M, dtype=np.int64)
    if M.size == 0:
        n = ncols if ncols is not None else (M.shape[1] if M.ndim == 2 else 0)
        return [np.eye(n, dtype=np.int64)[i] for i in range(n)]
    R, piv = rref(F, M)
    n = R.shape[1]
    free = [c for c in range(n) if c not in piv]
    basis = []
    for f in free:
        v = np.zeros(n, dtype=np.int64)
        v[f] = 1
        for i, p in enumerate(piv):
            v[p] = F.neg(int(R[i, f]))
        basis.append(v)
    return basis


def solve(F: FieldConfig, M, b):
    """One solution of M x = b, or None when inconsistent; also returns the nullity."""
    M = np.asarray(M, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64).reshape(-1, 1)
    aug = np.hstack([M, b])
    R, piv = rref(F, aug)
    n = M.shape[1]
    if n in piv:
        return None, n - len(piv) + 1
    x = np.zeros(n, dtype=np.int64)
    for i, p in enumerate(piv):
        x[p] = R[i, n]
    return x, n - len(piv)
