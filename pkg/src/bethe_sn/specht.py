"""Specht modules from standard polytabloids, with exact integer matrices.

A tabloid is stored as ``row_of``: ``row_of[j - 1]`` is the row holding
entry ``j``. This is the same data as the tensor ``v_{i_1} (x) ... (x) v_{i_N}``
with ``i_j = row_of[j - 1]``, which is what lets :mod:`bethe_sn.tensor_oracle`
reuse it.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations, product
from numbers import Rational
from typing import Sequence

import numpy as np

from . import exact
from .combinatorics import Partition, StandardTableau, enumerate_standard_tableaux

Tabloid = tuple[int, ...]


def _perm_sign(p: Sequence[int]) -> int:
    sign = 1
    seen = [False] * len(p)
    for start in range(len(p)):
        if seen[start]:
            continue
        length = 0
        k = start
        while not seen[k]:
            seen[k] = True
            k = p[k]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def tabloid_of(T: StandardTableau) -> Tabloid:
    return tuple(T.row(j) for j in range(1, T.N + 1))


def act_on_tabloid(perm: dict[int, int] | Sequence[int], tab: Tabloid) -> Tabloid:
    """Apply a permutation of entries (1-indexed map) to a tabloid.

    The entry ``v`` moves to ``perm[v]``, so ``row_of'[perm[v]] = row_of[v]``.
    """
    out = [0] * len(tab)
    for v in range(1, len(tab) + 1):
        out[perm[v] - 1] = tab[v - 1]
    return tuple(out)


def transpose_tabloid(i: int, j: int, tab: Tabloid) -> Tabloid:
    out = list(tab)
    out[i - 1], out[j - 1] = out[j - 1], out[i - 1]
    return tuple(out)


def polytabloid(T: StandardTableau) -> dict[Tabloid, int]:
    """Signed sum of ``sigma . e_T`` over the column group of ``T``."""
    conj = T.shape.conjugate().parts
    columns = [[T.rows[x][y] for x in range(conj[y])] for y in range(len(conj))]
    base = tabloid_of(T)
    vec: dict[Tabloid, int] = {}
    for choice in product(*(permutations(range(len(col))) for col in columns)):
        perm = {}
        sign = 1
        for col, p in zip(columns, choice):
            sign *= _perm_sign(p)
            for a, b in enumerate(p):
                perm[col[a]] = col[b]
        tab = act_on_tabloid(perm, base)
        vec[tab] = vec.get(tab, 0) + sign
    return {k: v for k, v in vec.items() if v}


def tabloids(shape: Partition) -> list[Tabloid]:
    """All row assignments with ``shape[k]`` entries in row ``k + 1``, sorted."""
    letters = [k + 1 for k, p in enumerate(shape.parts) for _ in range(p)]
    return sorted(set(permutations(letters)))


@dataclass(frozen=True)
class SpechtRep:
    """Irreducible representation ``W^shape`` on the standard-polytabloid basis.

    ``generators[k - 1]`` is the integer matrix of ``s_{k,k+1}``.
    """

    shape: Partition
    basis: tuple[StandardTableau, ...]
    generators: tuple[np.ndarray, ...]
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def N(self) -> int:
        return self.shape.N

    @property
    def dim(self) -> int:
        return len(self.basis)

    def transposition(self, i: int, j: int) -> np.ndarray:
        """Exact matrix of ``s_ij``, built as ``s_{j-1,j} s_{i,j-1} s_{j-1,j}``."""
        if i == j or not (1 <= i <= self.N and 1 <= j <= self.N):
            raise ValueError(f"invalid transposition ({i} {j}) for N={self.N}")
        i, j = min(i, j), max(i, j)
        key = (i, j)
        if key not in self._cache:
            if j == i + 1:
                M = self.generators[i - 1]
            else:
                g = self.generators[j - 2]
                M = g.dot(self.transposition(i, j - 1)).dot(g)
            self._cache[key] = M
        return self._cache[key]

    def transposition_float(self, i: int, j: int) -> np.ndarray:
        key = ("f", min(i, j), max(i, j))
        if key not in self._cache:
            self._cache[key] = exact.to_float(self.transposition(i, j))
        return self._cache[key]

    def to_json(self) -> dict:
        return {
            "shape": list(self.shape.parts),
            "basis": [T.to_json() for T in self.basis],
            "generators": [exact.matrix_to_json(g) for g in self.generators],
        }


def build_rep(shape: Partition | Sequence[int]) -> SpechtRep:
    """Exact matrices of the adjacent transpositions on ``W^shape``.

    Each ``s_{k,k+1} v_T`` is expanded in tabloid space and re-expressed in
    the standard polytabloid basis by one exact linear solve.
    """
    shape = shape if isinstance(shape, Partition) else Partition(tuple(shape))
    basis = tuple(enumerate_standard_tableaux(shape))
    N = shape.N
    index = {tab: r for r, tab in enumerate(tabloids(shape))}
    d = len(basis)
    polys = [polytabloid(T) for T in basis]
    B = np.zeros((len(index), d), dtype=object)
    for c, vec in enumerate(polys):
        for tab, coeff in vec.items():
            B[index[tab], c] = coeff
    rhs = []
    for k in range(1, N):
        SB = np.zeros((len(index), d), dtype=object)
        for c, vec in enumerate(polys):
            for tab, coeff in vec.items():
                SB[index[transpose_tabloid(k, k + 1, tab)], c] += coeff
        rhs.append(SB)
    if rhs:
        try:
            X = exact.solve(B, np.hstack(rhs))
        except ValueError as err:
            raise ArithmeticError(f"standard polytabloids do not span the orbit: {err}") from err
    else:
        X = np.zeros((d, 0), dtype=object)
    gens = []
    for k in range(N - 1):
        G = X[:, k * d:(k + 1) * d]
        if all(x.denominator == 1 for x in G.flat):
            G = np.vectorize(int, otypes=[object])(G)
        gens.append(G)
    return SpechtRep(shape, basis, tuple(gens))


def _is_exact(values) -> bool:
    return all(isinstance(v, Rational) for v in values)


def _check_distinct(z):
    for a in range(len(z)):
        for b in range(a + 1, len(z)):
            if z[a] == z[b]:
                raise ZeroDivisionError(f"coincident points z_{a + 1} = z_{b + 1}")


def theta_matrix(rep: SpechtRep, i: int, z: Sequence) -> np.ndarray:
    """Matrix of ``theta_i = sum_{j != i} s_ij / (z_i - z_j)`` on ``rep``.

    Exact (object array of Fractions) when every ``z`` is rational; complex
    floating point otherwise.
    """
    if len(z) != rep.N:
        raise ValueError(f"expected {rep.N} points, got {len(z)}")
    if not 1 <= i <= rep.N:
        raise ValueError(f"index {i} out of range 1..{rep.N}")
    _check_distinct(z)
    d = rep.dim
    if _is_exact(z):
        out = exact.zeros(d, d)
        for j in range(1, rep.N + 1):
            if j != i:
                out = out + rep.transposition(i, j) * Fraction(1, 1) / (Fraction(z[i - 1]) - Fraction(z[j - 1]))
        return out
    zc = np.asarray(z, dtype=complex)
    out = np.zeros((d, d), dtype=complex)
    for j in range(1, rep.N + 1):
        if j != i:
            out += rep.transposition_float(i, j) / (zc[i - 1] - zc[j - 1])
    return out


def theta_family(rep: SpechtRep, z: Sequence) -> list[np.ndarray]:
    return [theta_matrix(rep, i, z) for i in range(1, rep.N + 1)]


def jm_matrix(rep: SpechtRep, i: int) -> np.ndarray:
    """Jucys-Murphy element ``sum_{j<i} s_ij`` as an exact integer matrix."""
    if not 1 <= i <= rep.N:
        raise ValueError(f"index {i} out of range 1..{rep.N}")
    out = np.zeros((rep.dim, rep.dim), dtype=object)
    for j in range(1, i):
        out = out + rep.transposition(j, i)
    return out


def young_basis(rep: SpechtRep) -> tuple[np.ndarray, list[tuple[int, ...]]]:
    """Exact joint eigenbasis of the Jucys-Murphy elements.

    Column ``k`` spans the joint eigenspace whose eigenvalue tuple is the
    content vector of ``rep.basis[k]``.
    """
    d = rep.dim
    jms = [jm_matrix(rep, i) for i in range(2, rep.N + 1)]
    columns = []
    contents = []
    for T in rep.basis:
        c = T.content_vector()
        if jms:
            stacked = np.vstack([M - c[i + 1] * exact.identity(d) for i, M in enumerate(jms)])
            ker = exact.nullspace(stacked)
        else:
            ker = exact.identity(d)
        if ker.shape[1] != 1:
            raise ArithmeticError(f"joint eigenspace for contents {c} has dimension {ker.shape[1]}")
        columns.append(ker[:, 0])
        contents.append(c)
    return np.column_stack(columns), contents
