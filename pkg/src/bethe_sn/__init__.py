"""Bethe Ansatz for the commuting operators ``theta_i = sum_{j != i} s_ij / (z_i - z_j)``
on irreducible representations of the symmetric group."""

__version__ = "0.1.0"

from .combinatorics import Partition, StandardTableau, enumerate_standard_tableaux, weight_data
from .master_function import BetheConfiguration
from .solver import SolverSettings, find_all_critical_points
from .specht import build_rep, jm_matrix, theta_matrix, young_basis
from .spectra import is_semisimple, joint_spectrum, match_bethe

__all__ = [
    "Partition",
    "StandardTableau",
    "enumerate_standard_tableaux",
    "weight_data",
    "BetheConfiguration",
    "SolverSettings",
    "find_all_critical_points",
    "build_rep",
    "jm_matrix",
    "theta_matrix",
    "young_basis",
    "is_semisimple",
    "joint_spectrum",
    "match_bethe",
]
