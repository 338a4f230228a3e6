"""Joint spectra of commuting matrix families.

A random combination ``sum a_i M_i`` is diagonalized; its eigenvalue
clusters give candidate weight spaces, and each family member is compressed
onto them to read off its eigenvalue. A cluster on which some member still
has distinct eigenvalues means the combination was unlucky (its
coefficients hit one of finitely many bad hyperplanes), so a fresh
combination is drawn.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
import scipy.linalg
from scipy.optimize import linear_sum_assignment

from .exact import to_float


class NotCommuting(ValueError):
    pass


@dataclass
class Weight:
    values: np.ndarray  # eigenvalue of each family member
    multiplicity: int
    basis: np.ndarray  # orthonormal columns spanning the generalized weight space
    eigenspace_dim: int
    nilpotent_norm: float


@dataclass
class JointSpectrum:
    weights: list[Weight]
    dim: int
    attempts: int
    seed: int
    separated: bool
    coefficients: np.ndarray = field(repr=False, default=None)

    @property
    def tuples(self) -> list[np.ndarray]:
        """Weight tuples repeated by multiplicity."""
        return [w.values for w in self.weights for _ in range(w.multiplicity)]

    @property
    def semisimple(self) -> bool:
        return sum(w.eigenspace_dim for w in self.weights) == self.dim

    def to_json(self) -> dict:
        enc = lambda v: [[float(x.real), float(x.imag)] for x in v]
        return {
            "dim": self.dim,
            "attempts": self.attempts,
            "seed": self.seed,
            "separated": self.separated,
            "semisimple": self.semisimple,
            "weights": [
                {"values": enc(w.values), "multiplicity": w.multiplicity, "eigenspace_dim": w.eigenspace_dim}
                for w in self.weights
            ],
        }


def _as_complex(M) -> np.ndarray:
    M = np.asarray(M)
    return to_float(M, complex) if M.dtype == object else M.astype(complex)


def _clusters(values: np.ndarray, thr: float) -> list[list[int]]:
    n = len(values)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if abs(values[i] - values[j]) <= thr:
                parent[find(i)] = find(j)
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return sorted(groups.values(), key=lambda g: (values[g[0]].real, values[g[0]].imag))


def _check_commuting(ops, tol):
    for a in range(len(ops)):
        for b in range(a + 1, len(ops)):
            A, B = ops[a], ops[b]
            scale = max(np.linalg.norm(A) * np.linalg.norm(B), 1.0)
            if np.linalg.norm(A @ B - B @ A) > tol * scale:
                raise NotCommuting(f"members {a} and {b} do not commute")


def joint_spectrum(ops: Sequence, tol: float = 1e-6, seed: int = 0, max_attempts: int = 5) -> JointSpectrum:
    ops = [_as_complex(M) for M in ops]
    if not ops:
        raise ValueError("empty family")
    n = ops[0].shape[0]
    _check_commuting(ops, tol)
    rng = np.random.default_rng(seed)
    for attempt in range(1, max_attempts + 1):
        a = rng.standard_normal(len(ops))
        a /= np.linalg.norm(a)
        C = sum(c * M for c, M in zip(a, ops))
        norm = max(np.linalg.norm(C, 2), 1e-300)
        thr = tol * norm
        vals, vecs = np.linalg.eig(C)
        weights = []
        separated = True
        for group in _clusters(vals, thr):
            m = len(group)
            mu = vals[group].mean()
            if m == 1:
                V = vecs[:, group] / np.linalg.norm(vecs[:, group])
            else:
                _, Z, sdim = scipy.linalg.schur(C, output="complex", sort=lambda x, mu=mu: abs(x - mu) <= thr)
                V = Z[:, :sdim]
            comp = [V.conj().T @ M @ V for M in ops]
            values = np.array([np.trace(K) / m for K in comp])
            nil = 0.0
            for K, M, mu_i in zip(comp, ops, values):
                if m > 1:
                    spread = np.ptp(np.linalg.eigvals(K))
                    if abs(spread) > tol * max(np.linalg.norm(M, 2), 1.0):
                        separated = False
                    nil = max(nil, np.linalg.norm(K - mu_i * np.eye(m), 2) / max(np.linalg.norm(M, 2), 1.0))
            eig_dim = m if nil <= np.sqrt(tol) else _eigenspace_dim(comp, values, tol)
            weights.append(Weight(values, m, V, eig_dim, nil))
        if separated:
            break
    return JointSpectrum(weights, n, attempt, seed, separated, a)


def _eigenspace_dim(comp, values, tol) -> int:
    m = comp[0].shape[0]
    stacked = np.vstack([K - mu * np.eye(m) for K, mu in zip(comp, values)])
    sv = np.linalg.svd(stacked, compute_uv=False)
    scale = max(max(np.linalg.norm(K, 2) for K in comp), 1.0)
    return int(m - np.sum(sv > np.sqrt(tol) * scale))


def is_semisimple(ops: Sequence, tol: float = 1e-6, seed: int = 0, max_attempts: int = 5):
    """``(verdict, witness, spectrum)``; the witness is the first weight with a nilpotent part."""
    spec = joint_spectrum(ops, tol, seed, max_attempts)
    witness = next((w.values for w in spec.weights if w.eigenspace_dim < w.multiplicity), None)
    return witness is None, witness, spec


@dataclass
class MatchReport:
    pairs: list[tuple[int, int, float]]
    unmatched_predicted: list[int]
    unmatched_spectrum: list[int]
    tol: float

    @property
    def max_residual(self) -> float:
        return max((r for _, _, r in self.pairs), default=0.0)

    @property
    def success(self) -> bool:
        return not self.unmatched_predicted and not self.unmatched_spectrum and self.max_residual <= self.tol

    def to_json(self) -> dict:
        return {
            "success": self.success,
            "tol": self.tol,
            "max_residual": self.max_residual,
            "pairs": [{"predicted": i, "spectrum": j, "residual": r} for i, j, r in self.pairs],
            "unmatched_predicted": self.unmatched_predicted,
            "unmatched_spectrum": self.unmatched_spectrum,
        }


def match_bethe(predicted: Sequence, spectrum: JointSpectrum | Sequence, tol: float = 1e-8) -> MatchReport:
    """Bottleneck-optimal pairing of predicted eigenvalue tuples with spectrum tuples (max-norm)."""
    targets = spectrum.tuples if isinstance(spectrum, JointSpectrum) else list(spectrum)
    P = [np.asarray(p, dtype=complex) for p in predicted]
    Q = [np.asarray(q, dtype=complex) for q in targets]
    if not P or not Q:
        return MatchReport([], list(range(len(P))), list(range(len(Q))), tol)
    cost = np.array([[np.max(np.abs(p - q)) for q in Q] for p in P])
    # smallest threshold admitting a maximum-cardinality matching, then min-sum within it
    k = min(len(P), len(Q))
    best = None
    for thr in np.unique(cost):
        big = np.where(cost <= thr, cost, 1e300)
        r, c = linear_sum_assignment(big)
        if np.sum(big[r, c] < 1e300) == k:
            best = (r, c)
            break
    r, c = best
    pairs = sorted((int(i), int(j), float(cost[i, j])) for i, j in zip(r, c))
    return MatchReport(
        pairs,
        [i for i in range(len(P)) if i not in set(r)],
        [j for j in range(len(Q)) if j not in set(c)],
        tol,
    )
