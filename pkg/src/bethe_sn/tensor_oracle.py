"""Brute-force realization of ``W^shape`` inside ``(C^n)^{(x)N}``.

Everything happens inside the single weight space of weight
``sum_k shape[k] L_k``: its basis is the set of index strings with
``shape[k]`` copies of ``k``, which is preserved by place permutations and
mapped by the raising operators ``e_{k,k+1}`` into neighbouring weight
spaces. Highest weight vectors are the common kernel of those raising maps.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import permutations
from typing import Sequence

import numpy as np

from . import exact
from .combinatorics import Partition
from .specht import _check_distinct, _is_exact


def _gl_unit(n: int, i: int, j: int) -> np.ndarray:
    E = np.zeros((n, n), dtype=np.int64)
    E[i, j] = 1
    return E


def sl_basis(n: int) -> list[np.ndarray]:
    """Root vectors ``e_ij`` (i != j) followed by ``h_i = e_ii - e_nn``."""
    roots = [_gl_unit(n, i, j) for i in range(n) for j in range(n) if i != j]
    cartan = [_gl_unit(n, i, i) - _gl_unit(n, n - 1, n - 1) for i in range(n - 1)]
    return roots + cartan


def _coordinates(n: int, M: np.ndarray) -> np.ndarray:
    off = [M[i, j] for i in range(n) for j in range(n) if i != j]
    return np.array(off + [M[i, i] for i in range(n - 1)], dtype=np.int64)


def killing_form(n: int) -> np.ndarray:
    """Gram matrix ``tr(ad_x ad_y)`` on :func:`sl_basis`, computed from structure constants."""
    basis = sl_basis(n)
    ad = [np.column_stack([_coordinates(n, x @ y - y @ x) for y in basis]) for x in basis]
    return np.array([[int(np.sum(a * b.T)) for b in ad] for a in ad], dtype=object)


@lru_cache(maxsize=None)
def _dual_coefficients(n: int) -> np.ndarray:
    G = killing_form(n)
    return exact.solve(G, exact.identity(G.shape[0]))


def dual_basis(n: int) -> list[np.ndarray]:
    """Killing-dual basis: ``<g_a, g'_b> = delta_ab``."""
    basis = sl_basis(n)
    C = _dual_coefficients(n)
    out = []
    for a in range(len(basis)):
        M = exact.zeros(n, n)
        for b, g in enumerate(basis):
            if C[b, a]:
                M = M + C[b, a] * g
        out.append(M)
    return out


def casimir_matrix(n: int) -> np.ndarray:
    """Exact action of ``Omega = sum_a g_a (x) g'_a`` on ``C^n (x) C^n``."""
    if n < 2:
        raise ValueError("casimir_matrix needs n >= 2")
    out = exact.zeros(n * n, n * n)
    for g, gd in zip(sl_basis(n), dual_basis(n)):
        out = out + np.kron(g.astype(object), gd)
    return out


def swap_matrix(n: int) -> np.ndarray:
    P = exact.zeros(n * n, n * n)
    for k in range(n):
        for l in range(n):
            P[l * n + k, k * n + l] = Fraction(1)
    return P


@dataclass(frozen=True)
class WeightBasis:
    n: int
    shape: Partition
    sequences: tuple[tuple[int, ...], ...]

    @property
    def N(self) -> int:
        return self.shape.N

    def index(self) -> dict[tuple[int, ...], int]:
        return {s: k for k, s in enumerate(self.sequences)}


def weight_basis(n: int, shape: Partition | Sequence[int]) -> WeightBasis:
    shape = shape if isinstance(shape, Partition) else Partition(tuple(shape))
    if n < shape.rows:
        raise ValueError(f"dim V = {n} is smaller than the number of rows {shape.rows}")
    letters = [k + 1 for k, p in enumerate(shape.parts) for _ in range(p)]
    return WeightBasis(n, shape, tuple(sorted(set(permutations(letters)))))


def raising_matrix(wb: WeightBasis, k: int) -> np.ndarray:
    """Action of ``e_{k,k+1}`` from the weight space into the weight space above it."""
    image: dict[tuple[int, ...], dict[int, int]] = {}
    for col, s in enumerate(wb.sequences):
        for p, letter in enumerate(s):
            if letter == k + 1:
                t = s[:p] + (k,) + s[p + 1:]
                image.setdefault(t, {})
                image[t][col] = image[t].get(col, 0) + 1
    rows = sorted(image)
    M = np.zeros((len(rows), len(wb.sequences)), dtype=object)
    for r, t in enumerate(rows):
        for col, v in image[t].items():
            M[r, col] = v
    return M


@dataclass(frozen=True)
class HighestWeightSpace:
    weights: WeightBasis
    basis: np.ndarray  # columns, exact

    @property
    def dim(self) -> int:
        return self.basis.shape[1]


@lru_cache(maxsize=64)
def _highest_weight_space(n: int, parts: tuple[int, ...]) -> HighestWeightSpace:
    shape = Partition(parts)
    if n <= shape.rows:
        raise ValueError(f"need dim V = n > {shape.rows} rows, got n = {n}")
    wb = weight_basis(n, shape)
    blocks = [raising_matrix(wb, k) for k in range(1, n)]
    blocks = [b for b in blocks if b.shape[0]]
    if blocks:
        ker = exact.nullspace(np.vstack(blocks))
    else:
        ker = exact.identity(len(wb.sequences))
    expected = shape.hook_length_dimension()
    if ker.shape[1] != expected:
        raise ArithmeticError(f"highest weight space has dimension {ker.shape[1]}, expected {expected}")
    return HighestWeightSpace(wb, ker)


def highest_weight_space(n: int, shape: Partition | Sequence[int]) -> HighestWeightSpace:
    shape = shape if isinstance(shape, Partition) else Partition(tuple(shape))
    return _highest_weight_space(n, shape.parts)


def place_permutation(wb: WeightBasis, i: int, j: int) -> np.ndarray:
    idx = wb.index()
    d = len(wb.sequences)
    P = np.zeros((d, d), dtype=object)
    for col, s in enumerate(wb.sequences):
        t = list(s)
        t[i - 1], t[j - 1] = t[j - 1], t[i - 1]
        P[idx[tuple(t)], col] = 1
    return P


@lru_cache(maxsize=256)
def _restricted_transposition(n: int, parts: tuple[int, ...], i: int, j: int) -> np.ndarray:
    hw = _highest_weight_space(n, parts)
    image = place_permutation(hw.weights, i, j).dot(hw.basis)
    try:
        return exact.solve(hw.basis, image)
    except ValueError as err:
        raise ArithmeticError(f"s_{i}{j} does not preserve the highest weight space") from err


def restricted_transposition(n: int, shape: Partition | Sequence[int], i: int, j: int) -> np.ndarray:
    shape = shape if isinstance(shape, Partition) else Partition(tuple(shape))
    return _restricted_transposition(n, shape.parts, min(i, j), max(i, j))


def theta_on_tensor(n: int, shape: Partition | Sequence[int], i: int, z: Sequence) -> np.ndarray:
    """``sum_{j != i} P_ij / (z_i - z_j)`` restricted to the highest weight space."""
    shape = shape if isinstance(shape, Partition) else Partition(tuple(shape))
    N = shape.N
    if len(z) != N:
        raise ValueError(f"expected {N} points, got {len(z)}")
    _check_distinct(z)
    hw = highest_weight_space(n, shape)
    if _is_exact(z):
        out = exact.zeros(hw.dim, hw.dim)
        for j in range(1, N + 1):
            if j != i:
                out = out + restricted_transposition(n, shape, i, j) / (Fraction(z[i - 1]) - Fraction(z[j - 1]))
        return out
    zc = np.asarray(z, dtype=complex)
    out = np.zeros((hw.dim, hw.dim), dtype=complex)
    for j in range(1, N + 1):
        if j != i:
            out += exact.to_float(restricted_transposition(n, shape, i, j)) / (zc[i - 1] - zc[j - 1])
    return out


def default_n(shape: Partition | Sequence[int]) -> int:
    shape = shape if isinstance(shape, Partition) else Partition(tuple(shape))
    return shape.rows + 1
