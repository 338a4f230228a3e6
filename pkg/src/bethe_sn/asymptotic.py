"""Critical points attached to standard tableaux in the zone |z_1| << ... << |z_N|.

Entries are placed one at a time. When entry ``i + 1`` lands in row ``k``,
it creates one new coordinate on each level ``1..k-1``; at leading order
the coordinate on level ``l`` is ``s_l * z_{i+1}``, where ``s`` solves the
scale-free system handled by :func:`scalc`. Earlier coordinates do not move
at leading order.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .combinatorics import Partition, StandardTableau, weight_data
from .master_function import BetheConfiguration


class ZoneWarning(UserWarning):
    """The points are not spread far enough apart for the asymptotic seed."""


def scalc(a: Sequence) -> list[Fraction]:
    """Closed-form solution ``s_1 > ... > s_n`` of the box-attachment system.

    ``s_i = prod_{j<=i} (1 - 1 / sum_{k>=j} (1 + a_k))``. Requires ``a_k >= 0``
    and ``a_n > 0``.
    """
    a = [Fraction(x) for x in a]
    if not a:
        return []
    if any(x < 0 for x in a) or a[-1] <= 0:
        raise ValueError(f"need a_k >= 0 and a_n > 0, got {[str(x) for x in a]}")
    n = len(a)
    tails = [sum(1 + a[k] for k in range(j, n)) for j in range(n)]
    out = []
    s = Fraction(1)
    for j in range(n):
        if tails[j] == 0:
            raise ZeroDivisionError("vanishing tail sum")
        s *= 1 - 1 / tails[j]
        out.append(s)
    return out


def scalc_residuals(a: Sequence, s: Sequence, last_coupling: bool = False) -> list:
    """Residuals ``a_i/s_i - 1/(s_{i-1}-s_i) + 1/(s_i-s_{i+1})`` with ``s_0 = 1``.

    The leading-order critical-point equations have no neighbour above the
    last new coordinate, so by default the ``1/(s_n - s_{n+1})`` term is
    absent from the last equation. ``last_coupling=True`` keeps it with
    ``s_{n+1} = 0``.
    """
    n = len(a)
    ext = [1] + list(s) + [0]
    out = []
    for i in range(1, n + 1):
        r = a[i - 1] / ext[i] - 1 / (ext[i - 1] - ext[i])
        if i < n or last_coupling:
            r += 1 / (ext[i] - ext[i + 1])
        out.append(r)
    return out


def attach_box(prev: Partition | Sequence[int], row: int) -> list[Fraction]:
    """Ratios of the coordinates created by adding a box to ``prev`` in ``row``."""
    prev = prev if isinstance(prev, Partition) else Partition(tuple(prev))
    if row not in prev.addable_rows():
        raise ValueError(f"cannot add a box in row {row} of {prev.parts}")
    parts = list(prev.parts) + [0]
    a = [parts[j] - parts[j + 1] for j in range(row - 1)]
    return scalc(a)


@dataclass
class AsymptoticSeed:
    """Leading-order critical point for tableau ``T``.

    ``ratios[l]`` lists, for level ``l + 1``, pairs ``(entry, beta)``: the
    coordinate was created by ``entry`` and sits near ``beta * z_entry``.
    """

    tableau: StandardTableau
    ratios: tuple[tuple[tuple[int, Fraction], ...], ...]
    configuration: BetheConfiguration | None = None

    def creators(self) -> list[np.ndarray]:
        return [np.array([e for e, _ in lv], dtype=int) for lv in self.ratios]

    def betas(self) -> list[np.ndarray]:
        return [np.array([float(b) for _, b in lv]) for lv in self.ratios]

    def realize(self, z) -> BetheConfiguration:
        z = np.asarray([complex(v) for v in z])
        return BetheConfiguration(
            tuple(np.array([complex(float(b)) * z[e - 1] for e, b in lv], dtype=complex) for lv in self.ratios)
        )

    def to_json(self) -> dict:
        return {
            "tableau": self.tableau.to_json(),
            "ratios": [[[e, str(b)] for e, b in lv] for lv in self.ratios],
        }


def seed_ratios(T: StandardTableau) -> tuple[tuple[tuple[int, Fraction], ...], ...]:
    L = weight_data(T.shape).L
    levels: list[list[tuple[int, Fraction]]] = [[] for _ in range(L)]
    for i in range(1, T.N):
        prev = T.restrict(i).shape
        row = T.row(i + 1)
        for l, s in enumerate(attach_box(prev, row)):
            levels[l].append((i + 1, s))
    return tuple(tuple(lv) for lv in levels)


def zone_ratio(z) -> float:
    mags = np.abs(np.asarray([complex(v) for v in z]))
    if len(mags) < 2:
        return float("inf")
    with np.errstate(divide="ignore"):
        return float(np.min(mags[1:] / mags[:-1]))


def asymptotic_seed(T: StandardTableau, z=None, min_ratio: float = 1e3) -> AsymptoticSeed:
    seed = AsymptoticSeed(T, seed_ratios(T))
    if z is not None:
        if len(z) != T.N:
            raise ValueError(f"expected {T.N} points, got {len(z)}")
        if zone_ratio(z) < min_ratio:
            warnings.warn(
                f"|z_(i+1)/z_i| >= {min_ratio:g} violated (min ratio {zone_ratio(z):.3g})", ZoneWarning, stacklevel=2
            )
        seed.configuration = seed.realize(z)
    return seed


def geometric_points(N: int, gamma) -> np.ndarray:
    """``z_j = gamma**j`` for ``j = 1..N``."""
    return np.array([complex(gamma) ** j for j in range(1, N + 1)])


def predicted_eigenvalues(T: StandardTableau, z) -> np.ndarray:
    """Leading-order eigenvalue of ``theta_j``: ``c(T, j) / z_j``."""
    z = np.asarray([complex(v) for v in z])
    return np.array([T.content(j) / z[j - 1] for j in range(1, T.N + 1)])
