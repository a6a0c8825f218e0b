"""
Local Smith data read off the stabilized recursion.
"""

import logging
from typing import List, Optional, Sequence, Tuple

from app.errors import SamplePointError
from app.services.core_algebra import LaurentSeries, Mat, MatSeries, series_mul
from app.services.jordan_recursion import IdentityCheck, RecursionState
from app.services.transform_builder import DiagonalForm, DiagonalizationResult, Transform
from .inverse import point_values
from .models import FullSmithData, SmithLocalReport

logger = logging.getLogger(__name__)


def full_smith_data(diagonal: DiagonalForm, psi: Transform) -> FullSmithData:
    """S_p = Σ S_i·P_i, P(ε) = Σ ε^{i-1}·P_i, P⁻¹(ε) = Σ ε^{-(i-1)}·P_i and Q(ε) = ψ(ε)·S_p."""
    field = diagonal.P_ker.field
    S_p = Mat.zeros(diagonal.rows, diagonal.cols, field)
    for part in diagonal.parts:
        S_p = S_p + part.operator
    projectors = [part.P for part in diagonal.parts]
    P = MatSeries.polynomial(projectors, diagonal.cols, diagonal.cols, field)
    P_inv = LaurentSeries.build(list(reversed(projectors)), diagonal.k, diagonal.cols, diagonal.cols, field)
    Q = series_mul(psi.series, MatSeries.constant(S_p))
    return FullSmithData(S_p=S_p, P=P, P_inv=P_inv, Q=Q)


def smith_report(state: RecursionState, diagonal: DiagonalForm, psi: Optional[Transform] = None) -> SmithLocalReport:
    """
    Partial multiplicities at ε = 0 and, when both the kernel and the cokernel
    are used up, the factorization L·φ = Q·P.

    Args:
        state: stabilized recursion
        diagonal: its diagonal form
        psi: left transformation, needed for the factorization data

    Returns:
        SmithLocalReport whose exponent multiset matches the diagonal form
    """
    stabilization = state.stabilization
    k = stabilization.k
    limit = state.step_record(k + 1)
    full = limit.N.dim == 0 and limit.R_c.dim == 0
    report = SmithLocalReport(
        k=k,
        exponent_multiplicities=stabilization.exponent_multiplicities,
        rank_limit=stabilization.dim_range_limit,
        kernel_limit_dim=limit.N.dim,
        full_smith=full,
        degenerate=stabilization.degenerate,
        full_data=full_smith_data(diagonal, psi) if (full and psi is not None) else None,
    )
    logger.info(f"Local Smith data: exponents {report.exponents}, full={full}")
    return report


def check_constant_factorization(
    result: DiagonalizationResult,
    data: FullSmithData,
    sample_points: Sequence,
) -> Tuple[List[IdentityCheck], List[str]]:
    """ψ⁻¹(ε*)·L(ε*)·φ(ε*)·P⁻¹(ε*) = S_p at every usable sample point."""
    notes = []
    first = None
    for index, x in enumerate(sample_points):
        try:
            values = point_values(result, x)
        except SamplePointError as e:
            notes.append(f"Sample point {x} skipped: {e}")
            continue
        P_inv_at, _ = data.P_inv.evaluate(x)
        lhs = values.psi.inv() @ values.L @ values.phi @ P_inv_at
        if not lhs.equals(data.S_p):
            first = index
            logger.warning(f"Constant-operator factorization fails at sample point {x}")
            break
    return [IdentityCheck("constant-factorization", first is None, first, "ψ⁻¹·L·φ·P⁻¹ = S_p at the sample points")], notes
