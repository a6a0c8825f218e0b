"""
Transform builder - the pre-transformation, the right and left
transformations φ(ε) and ψ(ε), the diagonal form Δ(ε) and the identities
that tie them to L(ε).
"""

from .models import (
    DefiningEqData,
    DiagonalForm,
    DiagonalizationResult,
    DiagonalPart,
    PreTransform,
    Provenance,
    Transform,
)
from .pre_transform import pre_transform, triangular_check
from .phi import evaluate_phi, phi_from_defining_eq, phi_from_toeplitz, phi_valid_order
from .psi import evaluate_psi, psi_build
from .checks import (
    check_annihilation,
    check_defining_residual,
    check_diagonal_identity,
    check_dual_path,
    check_expansion_rate,
    check_factorization,
    check_remainder_confinement,
    check_tail_structure,
    run_transform_checks,
)
from .diagonal import default_order, diagonal_form, diagonalize, expansion_orders

__all__ = [
    "Provenance",
    "PreTransform",
    "Transform",
    "DiagonalPart",
    "DiagonalForm",
    "DefiningEqData",
    "DiagonalizationResult",
    "pre_transform",
    "triangular_check",
    "phi_valid_order",
    "phi_from_toeplitz",
    "phi_from_defining_eq",
    "evaluate_phi",
    "psi_build",
    "evaluate_psi",
    "check_dual_path",
    "check_diagonal_identity",
    "check_factorization",
    "check_annihilation",
    "check_remainder_confinement",
    "check_expansion_rate",
    "check_defining_residual",
    "check_tail_structure",
    "run_transform_checks",
    "default_order",
    "expansion_orders",
    "diagonal_form",
    "diagonalize",
]
