"""End-to-end runs shared by the CLI and the acceptance tests."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import __version__
from .asymptotic import asymptotic_seed, geometric_points
from .combinatorics import Partition, StandardTableau, enumerate_standard_tableaux
from .master_function import BetheConfiguration
from .solver import SolverError, SolverSettings, find_all_critical_points, newton_solve
from .spectra import joint_spectrum, match_bethe
from .specht import build_rep, theta_family
from .tensor_oracle import default_n, theta_on_tensor


def _enc(v) -> list:
    return [[float(complex(x).real), float(complex(x).imag)] for x in v]


def _z_json(z) -> list:
    return [str(x) if isinstance(x, Fraction) else [float(complex(x).real), float(complex(x).imag)] for x in z]


@dataclass
class VerifyResult:
    report: dict
    exit_code: int


def verify(shape: Partition, z: Sequence, settings: SolverSettings, match_tol: float = 1e-8,
           oracle: bool = False, n: int | None = None, spectrum_tol: float = 1e-6) -> VerifyResult:
    solve = find_all_critical_points(shape, z, settings)
    rep = build_rep(shape)
    direct = theta_family(rep, list(z))
    spec = joint_spectrum(direct, tol=spectrum_tol, seed=settings.seed)
    match = match_bethe([p.eigenvalues for p in solve.points], spec, tol=match_tol)
    report = {
        "tool": "bethe_sn",
        "version": __version__,
        "config": {"shape": list(shape.parts), "z": _z_json(z), "match_tol": match_tol,
                   "oracle": oracle, "n": n, "settings": vars(settings)},
        "dim": solve.expected,
        "solve": solve.to_json(),
        "spectrum": spec.to_json(),
        "match": match.to_json(),
    }
    failures = []
    if oracle:
        n = n or default_n(shape)
        worst = 0.0
        for i in range(1, shape.N + 1):
            a = np.sort_complex(np.linalg.eigvals(_float(direct[i - 1])))
            b = np.sort_complex(np.linalg.eigvals(_float(theta_on_tensor(n, shape, i, list(z)))))
            worst = max(worst, float(np.max(np.abs(a - b))) if len(a) else 0.0)
        report["oracle"] = {"n": n, "max_eigenvalue_difference": worst, "provenance": "tensor highest-weight space"}
        if worst > 1e-9:
            failures.append(f"tensor oracle disagrees by {worst:.3g}")
    if solve.shortfall:
        failures.append(f"found {solve.count} of {solve.expected} critical points")
        code = 3
    elif not match.success:
        failures.append(f"Bethe/direct match failed (max residual {match.max_residual:.3g})")
        code = 2
    elif failures:
        code = 2
    else:
        code = 0
    report["status"] = {"exit_code": code, "failures": failures,
                        "matched": f"{len(match.pairs)}/{solve.expected}"}
    return VerifyResult(report, code)


def _float(M) -> np.ndarray:
    M = np.asarray(M)
    return np.array(M.tolist(), dtype=complex).reshape(M.shape)


@dataclass
class SeedResult:
    tableau: StandardTableau
    gamma: float
    converged: bool
    configuration: BetheConfiguration | None = None
    scaled_residual: float = float("nan")
    eigenvalue_error: float = float("nan")
    ratio_error: float = float("nan")
    scaled_eigenvalues: np.ndarray | None = None
    ratios: list = field(default_factory=list)
    error: str = ""

    def to_json(self) -> dict:
        out = {
            "tableau": self.tableau.to_json(),
            "gamma": self.gamma,
            "converged": self.converged,
            "contents": list(self.tableau.content_vector()),
        }
        if self.converged:
            out.update({
                "polished_t": self.configuration.to_json(),
                "scaled_residual": self.scaled_residual,
                "z_times_eigenvalue": _enc(self.scaled_eigenvalues),
                "max_eigenvalue_error": self.eigenvalue_error,
                "max_ratio_error": self.ratio_error,
                "ratios": self.ratios,
            })
        else:
            out["error"] = self.error
        return out


def polish_seed(T: StandardTableau, gamma: float, settings: SolverSettings | None = None) -> SeedResult:
    """Newton-polish the tableau's asymptotic seed at ``z_j = gamma^j`` and
    compare with the leading-order predictions."""
    settings = settings or SolverSettings()
    z = geometric_points(T.N, gamma)
    seed = asymptotic_seed(T, z, min_ratio=0)
    try:
        cert = newton_solve(T.shape, seed.configuration, z, settings)
    except (SolverError, ZeroDivisionError, np.linalg.LinAlgError) as err:
        return SeedResult(T, gamma, False, error=f"{type(err).__name__}: {err}")
    scaled = z * cert.eigenvalues
    contents = np.array(T.content_vector())
    eig_err = float(np.max(np.abs(scaled - contents)))
    ratios = []
    ratio_err = 0.0
    for lv, creators, betas in zip(cert.configuration.levels, seed.creators(), seed.betas()):
        for t, e, b in zip(lv, creators, betas):
            r = t / z[e - 1]
            ratio_err = max(ratio_err, abs(r - b))
            ratios.append({"entry": int(e), "beta": float(b), "ratio": [float(r.real), float(r.imag)]})
    return SeedResult(T, gamma, True, cert.configuration, cert.scaled_residual, eig_err, ratio_err, scaled, ratios)


def sweep(shape: Partition, gammas: Sequence[float], settings: SolverSettings | None = None) -> list[SeedResult]:
    return [polish_seed(T, g, settings) for T in enumerate_standard_tableaux(shape) for g in gammas]


def decay_slope(gammas: Sequence[float], errors: Sequence[float]) -> float:
    """Least-squares slope of log(error) against log(gamma)."""
    return float(np.polyfit(np.log(gammas), np.log(errors), 1)[0])
