"""Wigner-von Neumann eigenvalue embedding for periodic Jacobi matrices."""

from .bands import BandStructure, band_structure, split_degeneracy
from .cfunction import c_exact, c_numeric, c_zeros_in_bands
from .monodromy import (
    classify_point,
    floquet_solution,
    monodromy_exact,
    monodromy_numeric,
    quasimomentum,
    transfer_matrix,
)
from .operator import PeriodicJacobi, load_operator, make_operator, site
from .verify import VerificationReport, embedded_eigen_check, finite_section_eigs, recurrence_residual
from .wvn import WvnParams, WvnResult, omega_sequence, q_asymptotic_params, wvn_construct

__version__ = "0.1.0"
