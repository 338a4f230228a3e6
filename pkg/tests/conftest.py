import math
import random
from fractions import Fraction

import numpy as np
import pytest

from bethe_sn.combinatorics import weight_data
from bethe_sn.master_function import BetheConfiguration, eval_Sprime, grad_t_Sprime

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def random_rational_points(rng: random.Random, N: int, span: int = 40, max_den: int = 7) -> list[Fraction]:
    while True:
        z = [Fraction(rng.randint(-span, span), rng.randint(1, max_den)) for _ in range(N)]
        if len(set(z)) == N:
            return z


@pytest.fixture
def rng():
    return random.Random(12345)


def random_configuration(rng: random.Random, shape, min_gap: float = 0.3):
    """Random complex z and t in a box, with every pair at least ``min_gap`` apart."""
    wd = weight_data(shape)
    total = wd.N + sum(wd.m)
    while True:
        pts = [complex(rng.uniform(-3, 3), rng.uniform(-3, 3)) for _ in range(total)]
        if total < 2 or min(abs(a - b) for i, a in enumerate(pts) for b in pts[i + 1:]) >= min_gap:
            break
    z = np.array(pts[: wd.N])
    levels, k = [], wd.N
    for m in wd.m:
        levels.append(np.array(pts[k:k + m]))
        k += m
    return BetheConfiguration(tuple(levels)), z


def wrapped(d: complex) -> complex:
    """Remove a 2*pi*i jump picked up by the principal logarithm."""
    im = (d.imag + math.pi) % (2 * math.pi) - math.pi
    return complex(d.real, im)


def finite_difference_gradients(shape, t, z, h: float = 1e-5):
    """Central differences of S' in t and z, and of grad_t in t."""
    flat, level = t.flat()
    L = t.L

    def conf(f):
        return BetheConfiguration.from_flat(f, level, L)

    gt = np.zeros(len(flat), dtype=complex)
    H = np.zeros((len(flat), len(flat)), dtype=complex)
    for a in range(len(flat)):
        e = np.zeros(len(flat), dtype=complex)
        e[a] = h
        plus, minus = conf(flat + e), conf(flat - e)
        gt[a] = wrapped(eval_Sprime(shape, plus, z) - eval_Sprime(shape, minus, z)) / (2 * h)
        H[:, a] = (grad_t_Sprime(shape, plus, z) - grad_t_Sprime(shape, minus, z)) / (2 * h)
    gz = np.zeros(len(z), dtype=complex)
    for k in range(len(z)):
        e = np.zeros(len(z), dtype=complex)
        e[k] = h
        gz[k] = wrapped(eval_Sprime(shape, t, z + e) - eval_Sprime(shape, t, z - e)) / (2 * h)
    return gt, gz, H


def relative_error(approx, exact_value) -> float:
    approx, exact_value = np.asarray(approx), np.asarray(exact_value)
    if not approx.size:
        return 0.0
    return float(np.abs(approx - exact_value).max() / max(np.abs(exact_value).max(), 1e-300))
