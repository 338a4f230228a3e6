"""Exact rational linear algebra on numpy object arrays.

Entries are ``int`` or ``fractions.Fraction``. Elimination is fraction-free
(Bareiss) on integer rows; fractions only appear in the final normalization.
"""
from __future__ import annotations

from fractions import Fraction
from math import lcm

import numpy as np


def qmatrix(rows) -> np.ndarray:
    """Object array of Fractions from nested sequences or an existing array."""
    arr = np.array(rows, dtype=object)
    if arr.ndim == 1:
        arr = arr.reshape(-1, 1) if arr.size else arr.reshape(0, 0)
    return np.vectorize(Fraction, otypes=[object])(arr) if arr.size else arr


def identity(d: int) -> np.ndarray:
    out = np.full((d, d), Fraction(0), dtype=object)
    for k in range(d):
        out[k, k] = Fraction(1)
    return out


def zeros(r: int, c: int) -> np.ndarray:
    return np.full((r, c), Fraction(0), dtype=object)


def to_float(M: np.ndarray, dtype=float) -> np.ndarray:
    return np.array([[dtype(x) for x in row] for row in M], dtype=dtype).reshape(M.shape)


def is_zero(M: np.ndarray) -> bool:
    return all(x == 0 for x in np.asarray(M).flat)


def _integer_rows(A) -> list[list[int]]:
    rows = []
    for row in A:
        row = [Fraction(x) for x in row]
        scale = lcm(*(x.denominator for x in row)) if row else 1
        rows.append([int(x * scale) for x in row])
    return rows


def echelon(A) -> tuple[list[list[int]], list[int]]:
    """Fraction-free row echelon form of ``A``; returns (nonzero integer rows, pivot columns)."""
    M = _integer_rows(A)
    nrows = len(M)
    ncols = len(M[0]) if M else 0
    pivots = []
    prev = 1
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        p = next((i for i in range(r, nrows) if M[i][c] != 0), None)
        if p is None:
            continue
        M[r], M[p] = M[p], M[r]
        piv = M[r][c]
        for i in range(r + 1, nrows):
            a = M[i][c]
            row_i = M[i]
            row_r = M[r]
            new = []
            for j in range(ncols):
                q, rem = divmod(piv * row_i[j] - a * row_r[j], prev)
                if rem:
                    raise ArithmeticError("Bareiss division was not exact")
                new.append(q)
            M[i] = new
        # rows above r keep their scale; entries left of c in lower rows are zero
        prev = piv
        pivots.append(c)
        r += 1
    return M[:r], pivots


def rref(A) -> tuple[np.ndarray, list[int]]:
    rows, pivots = echelon(A)
    ncols = np.asarray(A).shape[1]
    R = [[Fraction(x) for x in row] for row in rows]
    for k in range(len(R) - 1, -1, -1):
        c = pivots[k]
        inv = 1 / R[k][c]
        R[k] = [x * inv for x in R[k]]
        for i in range(k):
            f = R[i][c]
            if f:
                R[i] = [a - f * b for a, b in zip(R[i], R[k])]
    out = np.array(R, dtype=object).reshape(len(R), ncols)
    return out, pivots


def rank(A) -> int:
    return len(echelon(A)[1])


def nullspace(A) -> np.ndarray:
    """Basis of the right kernel of ``A`` as columns (one per free variable)."""
    A = np.asarray(A, dtype=object)
    ncols = A.shape[1]
    R, pivots = rref(A) if A.shape[0] else (np.zeros((0, ncols), dtype=object), [])
    free = [c for c in range(ncols) if c not in pivots]
    basis = zeros(ncols, len(free))
    for k, f in enumerate(free):
        basis[f, k] = Fraction(1)
        for r, c in enumerate(pivots):
            basis[c, k] = -R[r, f]
    return basis


def solve(A, B) -> np.ndarray:
    """Exact solution ``X`` of ``A X = B`` for full-column-rank ``A``.

    Raises ``ValueError`` if the system is inconsistent.
    """
    A = np.asarray(A, dtype=object)
    B = np.asarray(B, dtype=object)
    vector = B.ndim == 1
    if vector:
        B = B.reshape(-1, 1)
    n = A.shape[1]
    R, pivots = rref(np.hstack([A, B]))
    if len([p for p in pivots if p < n]) < n:
        raise ValueError("coefficient matrix is not of full column rank")
    if any(p >= n for p in pivots):
        raise ValueError("inconsistent linear system")
    X = R[:n, n:]
    return X[:, 0] if vector else X


def matrix_to_json(M: np.ndarray) -> list[list[str]]:
    """Rational entries as ``"p/q"`` strings (``"p"`` for integers)."""
    return [[str(Fraction(x)) for x in row] for row in M]


def matrix_from_json(data) -> np.ndarray:
    return qmatrix([[Fraction(x) for x in row] for row in data])
