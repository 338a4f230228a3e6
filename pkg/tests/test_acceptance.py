"""The nine acceptance criteria, each at its stated tolerance and time budget.

Every test appends one PASS/FAIL line to the terminal summary, whether or
not its assertions hold.
"""
import random
import time
from contextlib import contextmanager
from fractions import Fraction

import numpy as np
import pytest
from scipy.optimize import linear_sum_assignment

from bethe_sn import exact
from bethe_sn.asymptotic import scalc, scalc_residuals
from bethe_sn.combinatorics import enumerate_standard_tableaux, partitions
from bethe_sn.master_function import grad_t_Sprime, grad_z_Sprime, hessian_t
from bethe_sn.pipelines import decay_slope, polish_seed
from bethe_sn.solver import find_all_critical_points, same_point
from bethe_sn.specht import build_rep, theta_family, young_basis
from bethe_sn.spectra import is_semisimple, joint_spectrum, match_bethe
from bethe_sn.tensor_oracle import casimir_matrix, default_n, highest_weight_space, swap_matrix, theta_on_tensor

from conftest import (
    ACCEPTANCE_LINES,
    finite_difference_gradients,
    random_configuration,
    random_rational_points,
    relative_error,
)

SHAPES_5 = [lam for N in range(1, 6) for lam in partitions(N)]
SHAPES_6 = [lam for N in range(1, 7) for lam in partitions(N)]
SQ13 = np.sqrt(13)


@contextmanager
def criterion(number: int, title: str, budget: float):
    """Time the body, then record one summary line and enforce the time budget."""
    notes: list[str] = []
    start = time.perf_counter()
    ok = False
    try:
        yield notes
        ok = True
    finally:
        elapsed = time.perf_counter() - start
        ok = ok and elapsed < budget
        detail = "; ".join(notes)
        ACCEPTANCE_LINES.append(
            f"[{'PASS' if ok else 'FAIL'}] {number}. {title} ({elapsed:.2f} s, budget {budget:g} s)"
            + (f": {detail}" if detail else "")
        )
    assert elapsed < budget, f"took {elapsed:.1f} s, budget {budget} s"


def multiset_distance(a, b) -> float:
    a, b = np.asarray(a, dtype=complex), np.asarray(b, dtype=complex)
    if len(a) != len(b):
        return float("inf")
    cost = np.abs(a[:, None] - b[None, :])
    r, c = linear_sum_assignment(cost)
    return float(cost[r, c].max()) if len(a) else 0.0


def test_1_exact_algebra():
    rng = random.Random(1)
    with criterion(1, "exact commutation, sum and Jucys-Murphy spectra for N <= 6", 30) as notes:
        for lam in SHAPES_6:
            rep = build_rep(lam)
            for _ in range(5):
                th = theta_family(rep, random_rational_points(rng, lam.N))
                for i in range(len(th)):
                    for j in range(i + 1, len(th)):
                        assert exact.is_zero(th[i].dot(th[j]) - th[j].dot(th[i])), (lam, i, j)
                assert exact.is_zero(sum(th)), lam
            # raises unless every joint eigenspace is one-dimensional
            _, contents = young_basis(rep)
            assert sorted(contents) == sorted(T.content_vector() for T in enumerate_standard_tableaux(lam))
        notes.append(f"{len(SHAPES_6)} shapes x 5 rational z")


def test_2_casimir_identity():
    with criterion(2, "Casimir equals (P - 1/n)/(2n) exactly for n = 2..5", 1) as notes:
        for n in range(2, 6):
            expected = (swap_matrix(n) - exact.identity(n * n) / n) / (2 * n)
            assert (casimir_matrix(n) == expected).all(), n
        notes.append("n = 2, 3, 4, 5")


def test_3_schur_weyl_oracle():
    rng = random.Random(3)
    worst = 0.0
    with criterion(3, "tensor highest-weight spectra equal Specht spectra, tol 1e-9", 120) as notes:
        for lam in SHAPES_5:
            n = default_n(lam)
            assert highest_weight_space(n, lam).dim == lam.hook_length_dimension()
            rep = build_rep(lam)
            for _ in range(10):
                z = random_rational_points(rng, lam.N)
                for i in range(1, lam.N + 1):
                    a = np.linalg.eigvals(exact.to_float(theta_family(rep, z)[i - 1]))
                    b = np.linalg.eigvals(exact.to_float(theta_on_tensor(n, lam, i, z)))
                    worst = max(worst, multiset_distance(a, b))
        notes.append(f"max eigenvalue difference {worst:.2e}")
        assert worst <= 1e-9


def test_4_closed_form_two_one():
    z = [0, 1, 4]
    with criterion(4, "(2,1) at z = (0,1,4): t = (5 +- sqrt13)/3 and theta_1 = -+sqrt13/4", 1) as notes:
        report = find_all_critical_points((2, 1), z)
        assert report.count == 2
        assert all(p.nondegenerate for p in report.points)
        direct = np.sort(np.linalg.eigvals(exact.to_float(theta_family(build_rep((2, 1)), z)[0])).real)
        t_err = eig_err = direct_err = 0.0
        for p in report.points:
            t = p.configuration.levels[0][0]
            sign = 1 if t.real > 5 / 3 else -1
            t_err = max(t_err, abs(t - (5 + sign * SQ13) / 3))
            eig_err = max(eig_err, abs(p.eigenvalues[0] + sign * SQ13 / 4))
            direct_err = max(direct_err, float(np.min(np.abs(direct - p.eigenvalues[0]))))
        notes.append(f"|t - closed form| {t_err:.1e}, |theta_1 - closed form| {eig_err:.1e}, vs direct {direct_err:.1e}")
        assert t_err <= 1e-10
        assert eig_err <= 1e-9 and direct_err <= 1e-9


def test_5_full_verification_sweep():
    rng = random.Random(5)
    worst = 0.0
    runs = 0
    with criterion(5, "dim W points and Bethe/direct match at tol 1e-8, all shapes N <= 5 x 10 z", 300) as notes:
        for lam in SHAPES_5:
            rep = build_rep(lam)
            for _ in range(10):
                z = random_rational_points(rng, lam.N)
                report = find_all_critical_points(lam, z)
                assert report.count == lam.hook_length_dimension(), (lam, z, report.failures)
                spec = joint_spectrum(theta_family(rep, z))
                match = match_bethe([p.eigenvalues for p in report.points], spec, tol=1e-8)
                assert match.success, (lam, z, match.max_residual)
                worst = max(worst, match.max_residual)
                runs += 1
        notes.append(f"{runs} runs, max match residual {worst:.2e}")


def test_6_asymptotic_zone():
    gammas = [1e2, 1e3, 1e4]
    worst_eig = worst_ratio = 0.0
    slopes = []
    with criterion(6, "seeds at z_j = gamma^j: errors <= 10/gamma, slope -1 +- 0.1, distinct points", 300) as notes:
        for lam in SHAPES_5:
            polished = []
            for T in enumerate_standard_tableaux(lam):
                results = [polish_seed(T, g) for g in gammas]
                assert all(r.converged for r in results), (T, [r.error for r in results])
                top = results[-1]
                worst_eig = max(worst_eig, top.eigenvalue_error * 1e4)
                worst_ratio = max(worst_ratio, top.ratio_error * 1e4)
                assert top.eigenvalue_error <= 10 / 1e4 and top.ratio_error <= 10 / 1e4, T
                errs = [r.eigenvalue_error for r in results]
                if lam.N > 1:
                    slopes.append(decay_slope(gammas, errs))
                polished.append(top.configuration)
            for a in range(len(polished)):
                for b in range(a + 1, len(polished)):
                    assert not same_point(polished[a], polished[b]), lam
        notes.append(f"max gamma*eigenvalue error {worst_eig:.2f}, max gamma*ratio error {worst_ratio:.2f}, "
                     f"slopes in [{min(slopes):.4f}, {max(slopes):.4f}]")
        assert all(abs(s + 1) <= 0.1 for s in slopes)


def test_7_box_attachment_closed_form():
    rng = random.Random(7)
    with criterion(7, "closed form solves the box-attachment system exactly, 1000 inputs", 5) as notes:
        for _ in range(1000):
            n = rng.randint(1, 6)
            a = [Fraction(rng.randint(0, 60), 12) for _ in range(n)]
            if a[-1] == 0:
                a[-1] = Fraction(rng.randint(1, 60), 12)
            s = scalc(a)
            assert all(r == 0 for r in scalc_residuals(a, s)), a
            assert 0 < s[-1] and s[0] < 1
            assert all(x > y for x, y in zip(s, s[1:])), a
        notes.append("1000 random inputs, a_i in [0, 5] with denominators dividing 12")


def test_8_derivatives():
    rng = random.Random(8)
    worst = [0.0, 0.0, 0.0]
    with criterion(8, "gradients and Hessian vs central differences, 100 configurations per shape", 60) as notes:
        for lam in SHAPES_5:
            if lam.N < 2:
                continue
            for _ in range(100):
                t, z = random_configuration(rng, lam)
                gt, gz, H = finite_difference_gradients(lam, t, z)
                errs = (relative_error(gt, grad_t_Sprime(lam, t, z)),
                        relative_error(gz, grad_z_Sprime(lam, t, z)),
                        relative_error(H, hessian_t(lam, t, z)))
                worst = [max(w, e) for w, e in zip(worst, errs)]
        notes.append("max relative errors grad_t {:.1e}, grad_z {:.1e}, Hessian {:.1e}".format(*worst))
        assert worst[0] <= 1e-6 and worst[1] <= 1e-6 and worst[2] <= 1e-5


def test_9_semisimplicity():
    rng = random.Random(9)
    runs = quick = 0
    with criterion(9, "theta family semisimple at 20 rational z per shape; <= 2 attempts in >= 95% of runs",
                   120) as notes:
        for lam in SHAPES_5:
            rep = build_rep(lam)
            for k in range(20):
                ok, witness, spec = is_semisimple(theta_family(rep, random_rational_points(rng, lam.N)), seed=k)
                assert ok, (lam, witness)
                runs += 1
                quick += spec.attempts <= 2
        notes.append(f"{quick}/{runs} runs needed at most 2 attempts")
        assert quick >= 0.95 * runs
