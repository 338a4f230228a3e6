from fractions import Fraction

import numpy as np
import pytest

from bethe_sn import exact
from bethe_sn.combinatorics import Partition, partitions
from bethe_sn.specht import build_rep, theta_matrix
from bethe_sn.tensor_oracle import (
    casimir_matrix,
    default_n,
    dual_basis,
    highest_weight_space,
    killing_form,
    sl_basis,
    swap_matrix,
    theta_on_tensor,
    weight_basis,
)

from conftest import random_rational_points


def e(n, k):
    v = exact.zeros(n, 1)
    v[k - 1, 0] = Fraction(1)
    return v


def tensor(u, v):
    return np.kron(u, v)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_killing_form_is_2n_trace(n):
    basis = sl_basis(n)
    K = killing_form(n)
    for a, x in enumerate(basis):
        for b, y in enumerate(basis):
            assert K[a, b] == 2 * n * int(np.trace(x @ y))


@pytest.mark.parametrize("n", [2, 3, 4])
def test_dual_cartan_basis(n):
    duals = dual_basis(n)[n * (n - 1):]
    for i, hd in enumerate(duals):
        expected = exact.zeros(n, n)
        for j in range(n):
            expected[j, j] = -Fraction(1, n * 2 * n)
        expected[i, i] += Fraction(1, 2 * n)
        assert (hd == expected).all()


def test_casimir_examples():
    Om = casimir_matrix(2)
    v12, v21 = tensor(e(2, 1), e(2, 2)), tensor(e(2, 2), e(2, 1))
    assert (Om.dot(v12) == Fraction(1, 4) * (-Fraction(1, 2) * v12 + v21)).all()
    for n in (2, 3, 4):
        v11 = tensor(e(n, 1), e(n, 1))
        assert (casimir_matrix(n).dot(v11) == (1 - Fraction(1, n)) / (2 * n) * v11).all()


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_casimir_is_shifted_swap(n):
    expected = (swap_matrix(n) - exact.identity(n * n) / n) / (2 * n)
    assert (casimir_matrix(n) == expected).all()


def test_casimir_needs_rank_one():
    with pytest.raises(ValueError):
        casimir_matrix(1)


def test_weight_basis_size():
    wb = weight_basis(3, (2, 1, 1))
    assert len(wb.sequences) == 12
    assert all(sorted(s) == [1, 1, 2, 3] for s in wb.sequences)


def test_highest_weight_examples():
    hw = highest_weight_space(2, (3,))
    assert hw.dim == 1 and list(hw.weights.sequences) == [(1, 1, 1)]
    hw = highest_weight_space(3, (1, 1))
    v = hw.basis[:, 0]
    coeff = dict(zip(hw.weights.sequences, v))
    assert coeff[(1, 2)] == -coeff[(2, 1)] != 0
    assert highest_weight_space(3, (2, 1)).dim == 2


@pytest.mark.parametrize("lam", [p for N in range(1, 6) for p in partitions(N)], ids=str)
def test_highest_weight_dimension(lam):
    assert highest_weight_space(default_n(lam), lam).dim == lam.hook_length_dimension()


def test_requires_more_dimensions_than_rows():
    with pytest.raises(ValueError):
        highest_weight_space(2, (1, 1))


def test_theta_examples():
    z = [Fraction(5), Fraction(-2)]
    assert theta_on_tensor(2, (2,), 1, z)[0, 0] == Fraction(1, 7)
    assert theta_on_tensor(3, (1, 1), 1, z)[0, 0] == -Fraction(1, 7)
    th = theta_on_tensor(3, (2, 1), 1, [0, 1, 4])
    assert th[0, 0] + th[1, 1] == 0
    assert th[0, 0] * th[1, 1] - th[0, 1] * th[1, 0] == Fraction(-13, 16)


@pytest.mark.parametrize("lam", [(2, 1), (3, 2), (2, 1, 1), (3, 1, 1)], ids=str)
def test_characteristic_polynomial_matches_specht(lam, rng):
    # similar matrices: compare exact traces of powers
    rep = build_rep(lam)
    z = random_rational_points(rng, sum(lam))
    for i in range(1, sum(lam) + 1):
        A = theta_matrix(rep, i, z)
        B = theta_on_tensor(default_n(lam), lam, i, z)
        PA, PB = exact.identity(A.shape[0]), exact.identity(B.shape[0])
        for _ in range(A.shape[0]):
            PA, PB = PA.dot(A), PB.dot(B)
            assert np.trace(PA) == np.trace(PB)


def test_larger_n_gives_same_spectrum(rng):
    lam = (2, 1)
    z = random_rational_points(rng, 3)
    a = np.sort_complex(np.linalg.eigvals(exact.to_float(theta_on_tensor(3, lam, 2, z))))
    b = np.sort_complex(np.linalg.eigvals(exact.to_float(theta_on_tensor(4, lam, 2, z))))
    assert np.allclose(a, b, atol=1e-12)


def test_float_points():
    z = [0.0, 1.0, 4.0]
    ev = np.sort(np.linalg.eigvals(theta_on_tensor(3, (2, 1), 1, z)).real)
    assert np.allclose(ev, [-np.sqrt(13) / 4, np.sqrt(13) / 4], atol=1e-14)
    with pytest.raises(ZeroDivisionError):
        theta_on_tensor(3, (2, 1), 1, [0.0, 1.0, 1.0])
