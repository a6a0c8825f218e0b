"""
Generalized inverse & Smith - Laurent expansions of Δ⁻¹ and L⁻¹, projection
and kernel/range families, local Smith data and an independent polynomial
Smith normal form used as an oracle.
"""

from .models import AxiomCheck, FullSmithData, GInverseReport, OracleSmith, PointValues, SmithLocalReport
from .inverse import check_pinv_leading, delta_pinv, l_pinv_laurent, point_values
from .families import (
    KernelRangeFamilies,
    check_kernel_range_families,
    check_projection_families,
    kernel_range_families,
    projection_families,
)
from .smith import check_constant_factorization, full_smith_data, smith_report
from .oracle import certify_with_oracle, compare_with_oracle, oracle_smith_polynomial, smith_diagonal
from .axioms import verify_ginverse_axioms

__all__ = [
    "AxiomCheck",
    "FullSmithData",
    "GInverseReport",
    "OracleSmith",
    "PointValues",
    "SmithLocalReport",
    "KernelRangeFamilies",
    "delta_pinv",
    "l_pinv_laurent",
    "point_values",
    "check_pinv_leading",
    "projection_families",
    "check_projection_families",
    "kernel_range_families",
    "check_kernel_range_families",
    "smith_report",
    "full_smith_data",
    "check_constant_factorization",
    "oracle_smith_polynomial",
    "smith_diagonal",
    "compare_with_oracle",
    "certify_with_oracle",
    "verify_ginverse_axioms",
]
