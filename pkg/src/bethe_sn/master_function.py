"""The master function, its n-free rescaling S', and derivatives.

Coordinates ``t`` are grouped in levels ``1..L``; level ``i`` carries
``m_i = sum_{j>i} shape[j]`` coordinates. Internally a configuration is a
flat complex vector plus an integer array of level labels.

Logarithms are only evaluated in the ``eval_*`` diagnostics (principal
branch). The solver only uses the rational derivatives.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .combinatorics import Partition, weight_data


class CollisionError(ZeroDivisionError):
    """Two points that must stay apart coincide."""


@dataclass(frozen=True)
class BetheConfiguration:
    levels: tuple[np.ndarray, ...]

    def __post_init__(self):
        object.__setattr__(
            self, "levels", tuple(np.atleast_1d(np.asarray(lv, dtype=complex)) for lv in self.levels)
        )

    @classmethod
    def from_flat(cls, flat: np.ndarray, level: np.ndarray, L: int) -> "BetheConfiguration":
        return cls(tuple(flat[level == i] for i in range(1, L + 1)))

    @property
    def m(self) -> tuple[int, ...]:
        return tuple(len(lv) for lv in self.levels)

    @property
    def L(self) -> int:
        return len(self.levels)

    def flat(self) -> tuple[np.ndarray, np.ndarray]:
        if not self.levels:
            return np.zeros(0, dtype=complex), np.zeros(0, dtype=int)
        t = np.concatenate(self.levels)
        level = np.concatenate([np.full(len(lv), i + 1) for i, lv in enumerate(self.levels)])
        return t, level

    def to_json(self) -> list[list[list[float]]]:
        return [[[float(c.real), float(c.imag)] for c in lv] for lv in self.levels]

    @classmethod
    def from_json(cls, data) -> "BetheConfiguration":
        return cls(tuple(np.array([complex(re, im) for re, im in lv], dtype=complex) for lv in data))

    def canonical(self) -> "BetheConfiguration":
        return BetheConfiguration(tuple(np.array(sorted(lv, key=lambda c: (c.real, c.imag))) for lv in self.levels))


def empty_configuration(shape: Partition | Sequence[int]) -> BetheConfiguration:
    wd = weight_data(shape)
    return BetheConfiguration(tuple(np.zeros(k, dtype=complex) for k in wd.m))


def _check_shape(shape, t: BetheConfiguration):
    if shape is None:
        return
    wd = weight_data(shape)
    if t.m != wd.m:
        raise ValueError(f"configuration has level sizes {t.m}, shape {tuple(shape)} needs {wd.m}")


def _as_z(z) -> np.ndarray:
    return np.asarray([complex(v) for v in z], dtype=complex)


def config_json(t: BetheConfiguration, z) -> dict:
    return {"levels": t.to_json(), "z": [[float(v.real), float(v.imag)] for v in _as_z(z)]}


# -- general master function ------------------------------------------------


@dataclass(frozen=True)
class WeightSystem:
    """Highest weights ``Lambda_k`` (integer vectors in the ``L_i`` basis) for sl_n.

    ``m[i-1]`` is the number of coordinates attached to the simple root
    ``alpha_i = L_i - L_{i+1}``.
    """

    n: int
    weights: tuple[tuple[int, ...], ...]
    m: tuple[int, ...] = field(default=())

    def inner(self, a: Sequence, b: Sequence) -> Fraction:
        n = self.n
        dot = sum(Fraction(x) * y for x, y in zip(a, b))
        return (dot - Fraction(sum(a)) * sum(b) / n) / (2 * n)

    def alpha(self, i: int) -> tuple[int, ...]:
        v = [0] * self.n
        v[i - 1] = 1
        v[i] = -1
        return tuple(v)


def vector_weight_system(shape: Partition | Sequence[int], n: int) -> WeightSystem:
    """``V_k = C^n`` for every site (weight ``L_1``) with ``m`` read off the shape."""
    shape = shape if isinstance(shape, Partition) else Partition(tuple(shape))
    if n <= shape.rows - 1 or n < 2:
        raise ValueError(f"n = {n} too small for shape {shape.parts}")
    m = list(weight_data(shape).m)
    m += [0] * (n - 1 - len(m))
    L1 = tuple([1] + [0] * (n - 1))
    return WeightSystem(n, tuple([L1] * shape.N), tuple(m))


def _log(x: complex, what: str) -> complex:
    if x == 0:
        raise CollisionError(f"zero difference {what}")
    return np.log(complex(x))


def eval_S_general(ws: WeightSystem, t: BetheConfiguration, z) -> complex:
    z = _as_z(z)
    if len(z) != len(ws.weights):
        raise ValueError("one weight per z coordinate is required")
    levels = list(t.levels) + [np.zeros(0)] * (len(ws.m) - t.L)
    if tuple(len(lv) for lv in levels[: len(ws.m)]) != tuple(ws.m)[: len(levels)]:
        raise ValueError(f"configuration sizes {t.m} do not match m = {ws.m}")
    total = 0j
    N = len(z)
    for k in range(N):
        for l in range(k + 1, N):
            c = ws.inner(ws.weights[k], ws.weights[l])
            if c:
                total += float(c) * _log(z[k] - z[l], f"z_{k + 1} - z_{l + 1}")
    coords = [(i + 1, j, levels[i][j]) for i in range(len(levels)) for j in range(len(levels[i]))]
    for k in range(N):
        for i, j, tv in coords:
            c = ws.inner(ws.weights[k], ws.alpha(i))
            if c:
                total -= float(c) * _log(z[k] - tv, f"z_{k + 1} - t_{i}^({j + 1})")
    for a in range(len(coords)):
        for b in range(a + 1, len(coords)):
            (i, j, ta), (k, l, tb) = coords[a], coords[b]
            c = ws.inner(ws.alpha(i), ws.alpha(k))
            if c:
                total += float(c) * _log(ta - tb, f"t_{i}^({j + 1}) - t_{k}^({l + 1})")
    return total


# -- sl_n vector specialization (n-dependent, cross-checks only) -------------


def eval_S_vector(t: BetheConfiguration, z, n: int) -> complex:
    z = _as_z(z)
    N = len(z)
    total = 0j
    for k in range(N):
        for l in range(k + 1, N):
            total += (n - 1) / (2 * n * n) * _log(z[k] - z[l], f"z_{k + 1} - z_{l + 1}")
    if t.L:
        for k in range(N):
            for j, tv in enumerate(t.levels[0]):
                total -= _log(z[k] - tv, f"z_{k + 1} - t_1^({j + 1})") / (2 * n)
    for i, lv in enumerate(t.levels):
        for j in range(len(lv)):
            for l in range(j + 1, len(lv)):
                total += _log(lv[j] - lv[l], f"t_{i + 1}^({j + 1}) - t_{i + 1}^({l + 1})") / n
        if i + 1 < t.L:
            for j, ta in enumerate(lv):
                for l, tb in enumerate(t.levels[i + 1]):
                    total -= _log(ta - tb, f"t_{i + 1}^({j + 1}) - t_{i + 2}^({l + 1})") / (2 * n)
    return total


def grad_z_S_vector(t: BetheConfiguration, z, n: int) -> np.ndarray:
    z = _as_z(z)
    N = len(z)
    out = np.zeros(N, dtype=complex)
    t1 = t.levels[0] if t.L else np.zeros(0, dtype=complex)
    for k in range(N):
        out[k] = (n - 1) / (2 * n * n) * sum(1 / (z[k] - z[l]) for l in range(N) if l != k)
        out[k] -= sum(1 / (z[k] - tv) for tv in t1) / (2 * n)
    return out


def grad_t_S_vector(t: BetheConfiguration, z, n: int) -> np.ndarray:
    z = _as_z(z)
    flat, level = t.flat()
    out = np.zeros(len(flat), dtype=complex)
    for a in range(len(flat)):
        i = level[a]
        if i == 1:
            out[a] += np.sum(1 / (z - flat[a])) / (2 * n)
        same = (level == i) & (np.arange(len(flat)) != a)
        out[a] += np.sum(1 / (flat[a] - flat[same])) / n
        for nb in (i - 1, i + 1):
            out[a] -= np.sum(1 / (flat[a] - flat[level == nb])) / (2 * n)
    return out


# -- S' ----------------------------------------------------------------------


def eval_Sprime(shape, t: BetheConfiguration, z) -> complex:
    _check_shape(shape, t)
    z = _as_z(z)
    N = len(z)
    total = 0j
    for k in range(N):
        for l in range(k + 1, N):
            total += _log(z[k] - z[l], f"z_{k + 1} - z_{l + 1}")
    if t.L:
        for k in range(N):
            for j, tv in enumerate(t.levels[0]):
                total -= _log(z[k] - tv, f"z_{k + 1} - t_1^({j + 1})")
    for i, lv in enumerate(t.levels):
        for j in range(len(lv)):
            for l in range(j + 1, len(lv)):
                total += 2 * _log(lv[j] - lv[l], f"t_{i + 1}^({j + 1}) - t_{i + 1}^({l + 1})")
        if i + 1 < t.L:
            for j, ta in enumerate(lv):
                for l, tb in enumerate(t.levels[i + 1]):
                    total -= _log(ta - tb, f"t_{i + 1}^({j + 1}) - t_{i + 2}^({l + 1})")
    return total


@dataclass(frozen=True)
class _Geometry:
    """Pairwise data for a flat configuration, shared by gradient and Hessian."""

    inv_zt: np.ndarray  # (n_t, N): 1/(z_k - t_a), zero rows for levels > 1
    inv_tt: np.ndarray  # (n_t, n_t): 1/(t_a - t_b), zero where not interacting
    weight: np.ndarray  # (n_t, n_t): +2 same level, -1 adjacent level, 0 otherwise
    scale: np.ndarray  # (n_t,): distance from t_a to its nearest interacting point


def _geometry(flat: np.ndarray, level: np.ndarray, z: np.ndarray) -> _Geometry:
    n_t = len(flat)
    on_first = level == 1
    dzt = z[None, :] - flat[:, None]
    dtt = flat[:, None] - flat[None, :]
    same = (level[:, None] == level[None, :]) & ~np.eye(n_t, dtype=bool)
    adjacent = np.abs(level[:, None] - level[None, :]) == 1
    weight = 2.0 * same - 1.0 * adjacent
    interacting = weight != 0
    bad_zt = on_first[:, None] & (dzt == 0)
    if bad_zt.any():
        a, k = np.argwhere(bad_zt)[0]
        raise CollisionError(f"t_{level[a]} coordinate {a} collides with z_{k + 1}")
    bad_tt = interacting & (dtt == 0)
    if bad_tt.any():
        a, b = np.argwhere(bad_tt)[0]
        raise CollisionError(f"coordinates {a} (level {level[a]}) and {b} (level {level[b]}) collide")
    with np.errstate(divide="ignore", invalid="ignore"):
        inv_zt = np.where(on_first[:, None], 1 / dzt, 0)
        inv_tt = np.where(interacting, 1 / np.where(interacting, dtt, 1), 0)
    dist = np.full(n_t, np.inf)
    if n_t:
        dist_tt = np.where(interacting, np.abs(dtt), np.inf)
        dist = dist_tt.min(axis=1) if n_t > 1 else dist
        if len(z):
            dist = np.where(on_first, np.minimum(dist, np.abs(dzt).min(axis=1)), dist)
    return _Geometry(inv_zt, inv_tt, weight, dist)


def _grad_flat(g: _Geometry) -> np.ndarray:
    return g.inv_zt.sum(axis=1) + (g.weight * g.inv_tt).sum(axis=1)


def _hess_flat(g: _Geometry) -> np.ndarray:
    off = g.weight * g.inv_tt ** 2
    H = off.copy()
    np.fill_diagonal(H, (g.inv_zt ** 2).sum(axis=1) - off.sum(axis=1))
    return H


def _dgrad_dz_flat(g: _Geometry) -> np.ndarray:
    return -(g.inv_zt ** 2)


def _grad_z_flat(flat: np.ndarray, level: np.ndarray, z: np.ndarray) -> np.ndarray:
    N = len(z)
    dzz = z[:, None] - z[None, :]
    if np.any((dzz == 0) & ~np.eye(N, dtype=bool)):
        a, b = np.argwhere((dzz == 0) & ~np.eye(N, dtype=bool))[0]
        raise CollisionError(f"coincident points z_{a + 1} = z_{b + 1}")
    with np.errstate(divide="ignore"):
        inv = np.where(np.eye(N, dtype=bool), 0, 1 / np.where(np.eye(N, dtype=bool), 1, dzz))
    out = inv.sum(axis=1)
    t1 = flat[level == 1]
    if len(t1):
        d = z[:, None] - t1[None, :]
        if np.any(d == 0):
            k, b = np.argwhere(d == 0)[0]
            raise CollisionError(f"z_{k + 1} collides with a level-1 coordinate")
        out = out - (1 / d).sum(axis=1)
    return out


def grad_t_Sprime(shape, t: BetheConfiguration, z) -> np.ndarray:
    """Gradient of S' in the flat coordinate order of ``t.flat()``."""
    _check_shape(shape, t)
    flat, level = t.flat()
    return _grad_flat(_geometry(flat, level, _as_z(z)))


def grad_z_Sprime(shape, t: BetheConfiguration, z) -> np.ndarray:
    """``dS'/dz_j``: the predicted eigenvalue of ``theta_j`` at a critical point."""
    _check_shape(shape, t)
    flat, level = t.flat()
    return _grad_z_flat(flat, level, _as_z(z))


def hessian_t(shape, t: BetheConfiguration, z) -> np.ndarray:
    _check_shape(shape, t)
    flat, level = t.flat()
    return _hess_flat(_geometry(flat, level, _as_z(z)))


def scaled_hessian(flat, level, z) -> np.ndarray:
    g = _geometry(flat, level, z)
    D = g.scale
    return D[:, None] * _hess_flat(g) * D[None, :]


def hessian_singular_values(shape, t: BetheConfiguration, z, scaled: bool = True) -> np.ndarray:
    """Singular values of the t-Hessian, by default after scaling each coordinate
    by its nearest-neighbour distance (so the result is dimensionless)."""
    _check_shape(shape, t)
    flat, level = t.flat()
    if not len(flat):
        return np.zeros(0)
    H = scaled_hessian(flat, level, _as_z(z)) if scaled else hessian_t(None, t, z)
    return np.linalg.svd(H, compute_uv=False)


def is_nondegenerate(shape, t: BetheConfiguration, z, tol: float = 1e-8) -> bool:
    sv = hessian_singular_values(shape, t, z)
    if not len(sv):
        return True
    return bool(sv[-1] > tol * sv[0])


def residuals(flat, level, z) -> tuple[float, float]:
    """(max |dS'/dt|, max |dS'/dt| * nearest-neighbour distance)."""
    if not len(flat):
        return 0.0, 0.0
    g = _geometry(flat, level, z)
    grad = np.abs(_grad_flat(g))
    return float(grad.max()), float((grad * g.scale).max())


@dataclass
class CriticalPointCertificate:
    configuration: BetheConfiguration
    z: np.ndarray
    residual_norm: float
    scaled_residual: float
    singular_values: np.ndarray
    eigenvalues: np.ndarray
    nondegenerate: bool
    iterations: int = 0
    provenance: dict = field(default_factory=dict)

    @property
    def hessian_min_singular_value(self) -> float:
        return float(self.singular_values[-1]) if len(self.singular_values) else float("inf")

    def to_json(self) -> dict:
        cfg = config_json(self.configuration, self.z)
        return {
            "levels": cfg["levels"],
            "z": cfg["z"],
            "residual_norm": self.residual_norm,
            "scaled_residual": self.scaled_residual,
            "hessian_singular_values": [float(s) for s in self.singular_values],
            "nondegenerate": self.nondegenerate,
            "eigenvalues": [[float(e.real), float(e.imag)] for e in self.eigenvalues],
            "iterations": self.iterations,
            "provenance": self.provenance,
        }


def certify(shape, t: BetheConfiguration, z, nondegeneracy_tol: float = 1e-8, **kw) -> CriticalPointCertificate:
    _check_shape(shape, t)
    z = _as_z(z)
    flat, level = t.flat()
    raw, scaled = residuals(flat, level, z)
    sv = hessian_singular_values(None, t, z)
    nondeg = True if not len(sv) else bool(sv[-1] > nondegeneracy_tol * sv[0])
    eig = _grad_z_flat(flat, level, z)
    return CriticalPointCertificate(t, z, raw, scaled, sv, eig, nondeg, **kw)
