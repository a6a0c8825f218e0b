"""
Jordan recursion - nested kernels N_i, leading-coefficient spaces R_i, the E
and M Toeplitz columns, stabilization detection and the queries answered from
them (Jordan chains, ranks of root elements, leading-coefficient orders).
"""

from .records import CertificationMethod, RecursionState, StabilizationReport, StepRecord
from .recursion import EPS, RecursionLimits, extend, generic_rank, polynomial_entries, run_until_stabilized, step
from .queries import jordan_chain_basis, lc_of, rank_of, solution_jet_space, toeplitz_system
from .identities import (
    CenterReport,
    IdentityCheck,
    recursive_e_column,
    run_identity_suite,
    scan_centers,
)

__all__ = [
    "CertificationMethod",
    "RecursionState",
    "StabilizationReport",
    "StepRecord",
    "EPS",
    "RecursionLimits",
    "polynomial_entries",
    "step",
    "extend",
    "generic_rank",
    "run_until_stabilized",
    "jordan_chain_basis",
    "rank_of",
    "lc_of",
    "toeplitz_system",
    "solution_jet_space",
    "IdentityCheck",
    "CenterReport",
    "recursive_e_column",
    "run_identity_suite",
    "scan_centers",
]
