import numpy as np
import pytest

from bethe_sn import exact
from bethe_sn.combinatorics import partitions
from bethe_sn.spectra import NotCommuting, is_semisimple, joint_spectrum, match_bethe
from bethe_sn.specht import build_rep, jm_matrix, theta_family

from conftest import random_rational_points

SQ13 = np.sqrt(13)


def as_set(tuples, digits=9):
    return sorted(tuple(np.round(np.asarray(t, dtype=complex), digits)) for t in tuples)


def test_identity_family():
    spec = joint_spectrum([np.eye(4)])
    assert len(spec.weights) == 1
    assert spec.weights[0].multiplicity == 4
    assert np.allclose(spec.weights[0].values, [1])
    assert spec.semisimple


def test_jm_family_two_one():
    rep = build_rep((2, 1))
    spec = joint_spectrum([jm_matrix(rep, i) for i in (1, 2, 3)])
    assert as_set(spec.tuples) == as_set([(0, 1, -1), (0, -1, 1)])
    assert all(w.multiplicity == 1 for w in spec.weights)


@pytest.mark.parametrize("lam", [p for N in range(2, 7) for p in partitions(N)], ids=str)
def test_jm_family_weights_are_contents(lam):
    rep = build_rep(lam)
    ok, witness, spec = is_semisimple([jm_matrix(rep, i) for i in range(1, lam.N + 1)])
    assert ok and witness is None
    assert all(w.multiplicity == 1 for w in spec.weights)
    assert as_set(spec.tuples) == as_set([T.content_vector() for T in rep.basis])


def test_theta_family_closed_form():
    spec = joint_spectrum(theta_family(build_rep((2, 1)), [0, 1, 4]))
    firsts = sorted(t[0].real for t in spec.tuples)
    assert np.allclose(firsts, [-SQ13 / 4, SQ13 / 4], atol=1e-12)
    for t in spec.tuples:
        assert abs(sum(t)) < 1e-12


def test_weight_bases_block_diagonalize(rng):
    lam = (3, 2)
    ops = theta_family(build_rep(lam), random_rational_points(rng, 5))
    spec = joint_spectrum(ops)
    for w in spec.weights:
        for M in ops:
            MV = exact.to_float(M, complex) @ w.basis
            proj = w.basis @ (w.basis.conj().T @ MV)
            assert np.allclose(MV, proj, atol=1e-9)


def test_two_combinations_agree(rng):
    ops = theta_family(build_rep((2, 2, 1)), random_rational_points(rng, 5))
    a = as_set(joint_spectrum(ops, seed=1).tuples, 8)
    b = as_set(joint_spectrum(ops, seed=2).tuples, 8)
    assert np.allclose(np.array(a), np.array(b), atol=1e-9)


def test_semisimplicity_examples():
    ok, witness, _ = is_semisimple([np.diag([1.0, 2.0, 2.0]), np.diag([0.0, 1.0, 5.0])])
    assert ok and witness is None
    ok, witness, spec = is_semisimple([np.eye(2), np.array([[1.0, 1.0], [0.0, 1.0]])])
    assert not ok
    assert np.allclose(witness, [1, 1])
    assert spec.weights[0].eigenspace_dim == 1 and spec.weights[0].multiplicity == 2


def test_unlucky_combination_is_retried():
    # a = (1, 1)/sqrt(2) or any combination with a_1 = a_2 merges the weights (1,0) and (0,1)
    A, B = np.diag([1.0, 0.0]), np.diag([0.0, 1.0])
    for seed in range(20):
        spec = joint_spectrum([A, B], seed=seed)
        assert spec.separated and len(spec.weights) == 2


def test_collision_needs_second_attempt():
    # family where every combination with a_1 = 0 collides; force that by scaling
    A = np.diag([0.0, 0.0, 1.0])
    B = np.diag([1.0, 2.0, 3.0]) * 1e-9
    spec = joint_spectrum([A, B], tol=1e-6)
    # B separates the first two coordinates only below the tolerance: one weight of multiplicity 2
    assert sorted(w.multiplicity for w in spec.weights) == [1, 2]


def test_non_commuting_rejected():
    with pytest.raises(NotCommuting):
        joint_spectrum([np.array([[0.0, 1.0], [0.0, 0.0]]), np.array([[0.0, 0.0], [1.0, 0.0]])])
    with pytest.raises(ValueError):
        joint_spectrum([])


def test_match_examples():
    tuples = [np.array([1.0, 2.0]), np.array([3.0, 4j])]
    rep = match_bethe(tuples, tuples)
    assert rep.success and rep.max_residual == 0
    perturbed = [tuples[0] + 1e-3, tuples[1]]
    rep = match_bethe(perturbed, tuples, tol=1e-6)
    assert not rep.success
    assert rep.max_residual == pytest.approx(1e-3)
    rep = match_bethe(tuples[:1], tuples)
    assert not rep.success and rep.unmatched_spectrum == [1]
    assert rep.to_json()["unmatched_spectrum"] == [1]


def test_match_is_bottleneck_optimal():
    # greedy would take the 0.1 pair first and be left with a residual of 10
    P = [np.array([0.0]), np.array([0.2])]
    Q = [np.array([0.1]), np.array([10.0])]
    rep = match_bethe(P, Q, tol=100)
    assert rep.max_residual == pytest.approx(9.8)


def test_match_two_one_closed_form():
    z = [0, 1, 4]
    predicted = []
    for t in ((5 + SQ13) / 3, (5 - SQ13) / 3):
        predicted.append([1 / (z[k] - t) * -1 + sum(1 / (z[k] - z[l]) for l in range(3) if l != k) for k in range(3)])
    spec = joint_spectrum(theta_family(build_rep((2, 1)), z))
    assert match_bethe(predicted, spec, tol=1e-9).success
