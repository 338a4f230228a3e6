"""Critical points of S': Newton polishing, path tracking in z, and the
all-solutions driver that starts one path per standard tableau.

Newton steps are taken on the Hessian scaled by each coordinate's
nearest-neighbour distance, so configurations whose points live on very
different scales (the asymptotic zone) are handled in double precision.
Convergence is measured by the scaled residual ``max |dS'/dt| * distance``.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

import numpy as np
from scipy.optimize import linear_sum_assignment

from .asymptotic import asymptotic_seed, geometric_points
from .combinatorics import Partition, StandardTableau, enumerate_standard_tableaux, weight_data
from .master_function import (
    BetheConfiguration,
    CollisionError,
    CriticalPointCertificate,
    _dgrad_dz_flat,
    _geometry,
    _grad_flat,
    _hess_flat,
    certify,
    empty_configuration,
)

log = logging.getLogger(__name__)


class SolverError(RuntimeError):
    pass


class MaxIterations(SolverError):
    pass


class SingularJacobian(SolverError):
    pass


class CollisionLocked(SolverError):
    pass


class StepUnderflow(SolverError):
    def __init__(self, s: float, msg: str = ""):
        super().__init__(f"step size underflow at s = {s:.6g}{': ' + msg if msg else ''}")
        self.s = s


class DiagonalCrossing(SolverError):
    def __init__(self, s: float):
        super().__init__(f"path approaches the big diagonal at s = {s:.6g}")
        self.s = s


@dataclass
class SolverSettings:
    newton_tol: float = 1e-12
    max_iter: int = 100
    dedup_tol: float = 1e-8
    initial_step: float = 0.05
    min_step: float = 1e-9
    max_step: float = 0.25
    contraction: float = 0.5
    expansion: float = 1.6
    corrector_tol: float = 1e-10
    corrector_iters: int = 6
    max_relative_move: float = 0.2
    gamma: float = 1e4
    gamma_end: float = 3.0
    zone_angle: float = 0.4
    detour: float = 0.1
    max_retries: int = 4
    nondegeneracy_tol: float = 1e-8
    seed: int = 0

    def __post_init__(self):
        for name in ("newton_tol", "dedup_tol", "initial_step", "min_step", "max_step", "corrector_tol"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if not self.min_step < self.initial_step <= self.max_step:
            raise ValueError("need min_step < initial_step <= max_step")
        if not 0 < self.contraction < 1 < self.expansion:
            raise ValueError("need 0 < contraction < 1 < expansion")
        if self.gamma <= 1:
            raise ValueError("gamma must exceed 1")


# -- Newton ------------------------------------------------------------------


def _scaled_step(flat, level, z):
    g = _geometry(flat, level, z)
    grad = _grad_flat(g)
    D = g.scale
    A = D[:, None] * _hess_flat(g) * D[None, :]
    if not np.all(np.isfinite(A)):
        raise SingularJacobian("non-finite Hessian")
    if np.linalg.cond(A) > 1e13:
        raise SingularJacobian("Hessian is numerically singular")
    return D * np.linalg.solve(A, -D * grad), g


def _scaled_residual(g) -> float:
    return float(np.max(np.abs(_grad_flat(g)) * g.scale)) if len(g.scale) else 0.0


def _newton_flat(flat, level, z, tol, max_iter):
    flat = flat.copy()
    if not len(flat):
        return flat, 0
    for it in range(max_iter + 1):
        g = _geometry(flat, level, z)
        res = _scaled_residual(g)
        if res <= tol:
            return _refine(flat, level, z, res), it
        if it == max_iter:
            break
        step, g = _scaled_step(flat, level, z)
        lam = 1.0
        while True:
            cand = flat + lam * step
            try:
                gc = _geometry(cand, level, z)
                if np.all(np.isfinite(cand)) and np.all(gc.scale > 1e-12 * g.scale):
                    break
            except CollisionError:
                pass
            lam *= 0.5
            if lam < 1e-12:
                raise CollisionLocked("damping could not avoid a collision")
        flat = cand
    raise MaxIterations(f"no convergence in {max_iter} iterations (scaled residual {_scaled_residual(g):.3g})")


def _refine(flat, level, z, res):
    # one more Newton step once converged; kept only if it does not hurt
    try:
        step, _ = _scaled_step(flat, level, z)
        cand = flat + step
        if _scaled_residual(_geometry(cand, level, z)) <= res:
            return cand
    except (SolverError, CollisionError, np.linalg.LinAlgError):
        pass
    return flat


def newton_solve(shape, guess: BetheConfiguration, z, settings: SolverSettings | None = None) -> CriticalPointCertificate:
    settings = settings or SolverSettings()
    z = np.asarray([complex(v) for v in z])
    flat, level = guess.flat()
    _geometry(flat, level, z)
    flat, it = _newton_flat(flat, level, z, settings.newton_tol, settings.max_iter)
    t = BetheConfiguration.from_flat(flat, level, guess.L)
    return certify(shape, t, z, settings.nondegeneracy_tol, iterations=it)


# -- canonical form ------------------------------------------------------------


def canonicalize(c: BetheConfiguration) -> BetheConfiguration:
    return c.canonical()


def point_distance(a: BetheConfiguration, b: BetheConfiguration) -> float:
    """Max coordinate distance under the best within-level relabelling."""
    if a.m != b.m:
        return float("inf")
    worst = 0.0
    for la, lb in zip(a.canonical().levels, b.canonical().levels):
        if not len(la):
            continue
        direct = float(np.max(np.abs(la - lb)))
        cost = np.abs(la[:, None] - lb[None, :])
        r, c = linear_sum_assignment(cost)
        worst = max(worst, min(direct, float(cost[r, c].max())))
    return worst


def same_point(a: BetheConfiguration, b: BetheConfiguration, tol: float = 1e-8) -> bool:
    return point_distance(a, b) <= tol


# -- continuation ----------------------------------------------------------------


@dataclass(frozen=True)
class ContinuationPath:
    """``z(s) = (1 - s) start + s end``, optionally bent through ``midpoint``."""

    start: np.ndarray
    end: np.ndarray
    midpoint: np.ndarray | None = None

    def segments(self) -> list["_Segment"]:
        a = np.asarray(self.start, dtype=complex)
        b = np.asarray(self.end, dtype=complex)
        if self.midpoint is None:
            return [_Line(a, b)]
        m = np.asarray(self.midpoint, dtype=complex)
        return [_Line(a, m), _Line(m, b)]

    def to_json(self) -> dict:
        enc = lambda v: None if v is None else [[float(x.real), float(x.imag)] for x in np.asarray(v, dtype=complex)]
        return {"start": enc(self.start), "end": enc(self.end), "midpoint": enc(self.midpoint)}


class _Segment:
    def __call__(self, s: float) -> np.ndarray: ...

    def derivative(self, s: float) -> np.ndarray: ...


@dataclass(frozen=True)
class _Line(_Segment):
    a: np.ndarray
    b: np.ndarray

    def __call__(self, s):
        return (1 - s) * self.a + s * self.b

    def derivative(self, s):
        return self.b - self.a


@dataclass(frozen=True)
class ZonePath(_Segment):
    """``z_j(s) = g(s)**j`` with ``log g`` linear in ``s``: stays inside the family of
    geometric configurations while shrinking the spread from ``g0`` to ``g1``."""

    g0: complex
    g1: complex
    N: int

    @property
    def _dlog(self):
        return np.log(complex(self.g1)) - np.log(complex(self.g0))

    def __call__(self, s):
        g = np.exp((1 - s) * np.log(complex(self.g0)) + s * np.log(complex(self.g1)))
        return geometric_points(self.N, g)

    def derivative(self, s):
        j = np.arange(1, self.N + 1)
        return j * self(s) * self._dlog


def _check_diagonal(z, s):
    N = len(z)
    if N < 2:
        return
    # relative to the pair's own size: zone configurations span many decades
    mag = np.maximum(np.abs(z)[:, None], np.abs(z)[None, :])
    d = np.abs(z[:, None] - z[None, :])
    np.fill_diagonal(d, np.inf)
    if np.any(d <= 1e-10 * mag):
        raise DiagonalCrossing(s)


def _corrector(flat, level, z, settings):
    g = _geometry(flat, level, z)
    prev = _scaled_residual(g)
    for _ in range(settings.corrector_iters):
        if prev <= settings.corrector_tol:
            return flat
        step, g = _scaled_step(flat, level, z)
        if np.max(np.abs(step) / g.scale) > settings.max_relative_move:
            raise SolverError("corrector step too large")
        flat = flat + step
        g = _geometry(flat, level, z)
        res = _scaled_residual(g)
        if res > 0.5 * prev and res > settings.corrector_tol:
            raise SolverError("corrector not contracting")
        prev = res
    if prev <= settings.corrector_tol:
        return flat
    raise SolverError("corrector did not converge")


def _track_segment(flat, level, seg: _Segment, settings: SolverSettings):
    s = 0.0
    h = settings.initial_step
    steps = 0
    while s < 1.0:
        h = min(h, 1.0 - s)
        z0 = seg(s)
        try:
            g = _geometry(flat, level, z0)
            D = g.scale
            A = D[:, None] * _hess_flat(g) * D[None, :]
            rhs = -D * (_dgrad_dz_flat(g) @ seg.derivative(s))
            tdot = D * np.linalg.solve(A, rhs)
        except (np.linalg.LinAlgError, CollisionError) as err:
            raise StepUnderflow(s, f"singular predictor ({err})") from err
        while True:
            s_new = min(1.0, s + h)
            z_new = seg(s_new)
            _check_diagonal(z_new, s_new)
            pred = flat + (s_new - s) * tdot
            try:
                if np.max(np.abs(pred - flat) / D) > settings.max_relative_move:
                    raise SolverError("predictor step too large")
                new = _corrector(pred, level, z_new, settings)
                break
            except (SolverError, CollisionError, np.linalg.LinAlgError):
                h *= settings.contraction
                if h < settings.min_step:
                    raise StepUnderflow(s) from None
        flat, s = new, s_new
        steps += 1
        h = min(h * settings.expansion, settings.max_step)
    return flat, steps


def _track(flat, level, segments, settings):
    steps = 0
    for seg in segments:
        if not len(flat):
            continue
        flat, k = _track_segment(flat, level, seg, settings)
        steps += k
    return flat, steps


def continue_path(shape, start: CriticalPointCertificate, path: ContinuationPath,
                  settings: SolverSettings | None = None) -> CriticalPointCertificate:
    settings = settings or SolverSettings()
    flat, level = start.configuration.flat()
    segments = path.segments()
    if all(np.array_equal(np.asarray(sg.a), np.asarray(sg.b)) for sg in segments):
        return start
    flat, steps = _track(flat, level, segments, settings)
    z1 = np.asarray(path.end, dtype=complex)
    flat, it = _newton_flat(flat, level, z1, settings.newton_tol, settings.max_iter)
    t = BetheConfiguration.from_flat(flat, level, start.configuration.L)
    prov = dict(start.provenance)
    prov.setdefault("paths", []).append({**path.to_json(), "steps": steps})
    return certify(shape, t, z1, settings.nondegeneracy_tol, iterations=it, provenance=prov)


# -- all critical points ---------------------------------------------------------


@dataclass
class SolveReport:
    shape: Partition
    z: np.ndarray
    points: list[CriticalPointCertificate]
    expected: int
    failures: list[dict] = field(default_factory=list)

    @property
    def count(self) -> int:
        return len(self.points)

    @property
    def shortfall(self) -> bool:
        return self.count < self.expected

    def to_json(self) -> dict:
        return {
            "shape": list(self.shape.parts),
            "z": [[float(v.real), float(v.imag)] for v in self.z],
            "expected": self.expected,
            "count": self.count,
            "shortfall": self.shortfall,
            "points": [p.to_json() for p in self.points],
            "failures": self.failures,
        }


def _normalize(z):
    center = z.mean()
    scale = float(np.max(np.abs(z - center)))
    return center, scale, (z - center) / scale


def _zone_start(settings: SolverSettings) -> complex:
    return settings.gamma_end * np.exp(1j * settings.zone_angle)


@lru_cache(maxsize=4096)
def _descended_seed(T: StandardTableau, settings_key: tuple):
    """Seed polished at ``z_j = gamma^j`` and carried down the zone path.

    Independent of the target, so it is cached per tableau and settings.
    """
    settings = SolverSettings(**dict(settings_key))
    N = T.N
    zA = geometric_points(N, settings.gamma)
    seed = asymptotic_seed(T, zA, min_ratio=0)
    flat, level = seed.configuration.flat()
    flat, _ = _newton_flat(flat, level, zA, settings.newton_tol, settings.max_iter)
    flat, steps = _track(flat, level, [ZonePath(settings.gamma, _zone_start(settings), N)], settings)
    flat.setflags(write=False)
    return flat, level, steps


def _track_seed(shape, T, w, settings, midpoint):
    """Carry the tableau's descended seed from ``z_j = g^j`` to ``w``."""
    flat, level, steps = _descended_seed(T, tuple(sorted(vars(settings).items())))
    path = ContinuationPath(geometric_points(shape.N, _zone_start(settings)), w, midpoint)
    flat, more = _track(flat.copy(), level, path.segments(), settings)
    steps += more
    flat, it = _newton_flat(flat, level, w, settings.newton_tol, settings.max_iter)
    return flat, level, steps, path


def _random_detour(rng, start, end, size):
    mid = 0.5 * (start + end)
    offset = rng.standard_normal(len(mid)) + 1j * rng.standard_normal(len(mid))
    return mid + size * np.max(np.abs(end)) * offset / np.linalg.norm(offset) * np.sqrt(len(mid)) * 1j


def find_all_critical_points(shape, z: Sequence, settings: SolverSettings | None = None) -> SolveReport:
    """One tracked path per standard tableau, deduplicated at the target ``z``.

    ``z`` is first moved to centre 0 and radius 1 (critical points and
    eigenvalues transform covariantly), so path lengths do not depend on
    the user's units.
    """
    settings = settings or SolverSettings()
    shape = shape if isinstance(shape, Partition) else Partition(tuple(shape))
    z = np.asarray([complex(v) for v in z])
    if len(z) != shape.N:
        raise ValueError(f"expected {shape.N} points, got {len(z)}")
    _check_distinct_z(z)
    expected = shape.hook_length_dimension()
    L = weight_data(shape).L
    if L == 0 or shape.N == 1:
        cert = certify(shape, empty_configuration(shape), z, settings.nondegeneracy_tol,
                       provenance={"seed_tableau": enumerate_standard_tableaux(shape)[0].to_json()})
        return SolveReport(shape, z, [cert], expected)

    center, scale, w = _normalize(z)
    rng = np.random.default_rng(settings.seed)
    tableaux = enumerate_standard_tableaux(shape)
    found: list[tuple[np.ndarray, np.ndarray, dict]] = []
    failures: list[dict] = []
    pending = list(tableaux)
    attempt = 0
    while pending and attempt <= settings.max_retries:
        retry = []
        for T in pending:
            start = geometric_points(shape.N, _zone_start(settings))
            midpoint = None if attempt == 0 else _random_detour(rng, start, w, settings.detour * attempt)
            try:
                flat, level, steps, path = _track_seed(shape, T, w, settings, midpoint)
            except (SolverError, CollisionError, np.linalg.LinAlgError) as err:
                failures.append({"seed_tableau": T.to_json(), "attempt": attempt, "error": f"{type(err).__name__}: {err}"})
                retry.append(T)
                continue
            cfg = BetheConfiguration.from_flat(flat, level, L)
            dup = next((k for k, (other, _, _) in enumerate(found)
                        if same_point(cfg, BetheConfiguration.from_flat(other, level, L), settings.dedup_tol)), None)
            if dup is not None:
                failures.append({"seed_tableau": T.to_json(), "attempt": attempt,
                                 "error": f"duplicate of the point from {found[dup][2]['seed_tableau']}"})
                retry.append(T)
                continue
            found.append((flat, level, {"seed_tableau": T.to_json(), "attempt": attempt, "steps": steps,
                                        "path": path.to_json()}))
        pending = retry
        attempt += 1
        if pending:
            log.info("retrying %d seeds with a complex detour (attempt %d)", len(pending), attempt)

    points = []
    for flat, level, prov in found:
        t = BetheConfiguration.from_flat(center + scale * flat, level, L)
        points.append(certify(shape, t, z, settings.nondegeneracy_tol, provenance=prov))
    return SolveReport(shape, z, points, expected, failures)


def _check_distinct_z(z):
    N = len(z)
    for a in range(N):
        for b in range(a + 1, N):
            if z[a] == z[b]:
                raise ValueError(f"coincident points z_{a + 1} = z_{b + 1}")
