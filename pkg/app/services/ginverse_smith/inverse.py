"""
Generalized inverses of Δ(ε) and L(ε) as Laurent series, and their exact
values at a nonzero sample point.
"""

import logging
from typing import Any, Optional

from app.errors import InsufficientOrderError, NotInvertibleError, SamplePointError
from app.services.core_algebra import LaurentSeries, laurent_mul, series_inverse_near_identity
from app.services.transform_builder import DiagonalForm, DiagonalizationResult, Transform, evaluate_phi, evaluate_psi
from .models import PointValues

logger = logging.getLogger(__name__)


def delta_pinv(diagonal: DiagonalForm) -> LaurentSeries:
    """
    Δ⁻¹(ε) = Σ_{i=1..k+1} ε^{-(i-1)}·S_i⁻¹𝒫_i.

    The pole order is k unless every S_i vanishes.
    """
    coeffs = [part.Sinv for part in reversed(diagonal.parts)]
    field = diagonal.P_ker.field
    return LaurentSeries.build(coeffs, diagonal.k, diagonal.cols, diagonal.rows, field)


def l_pinv_laurent(phi: Transform, diagonal: DiagonalForm, psi: Transform, order: Optional[int] = None) -> LaurentSeries:
    """
    L⁻¹(ε) = φ(ε)·Δ⁻¹(ε)·ψ⁻¹(ε) expanded through ε^order.

    Args:
        phi: right transformation
        diagonal: the diagonal form
        psi: left transformation
        order: highest exponent wanted (default: everything the transforms support)

    Returns:
        Laurent series with pole order k and leading coefficient S_(k+1)⁻¹𝒫_(k+1)

    Raises:
        InsufficientOrderError: order exceeds what φ and ψ support
    """
    k = diagonal.k
    available = min(phi.valid_order, psi.valid_order) - k
    if order is None:
        order = available
    if order > available:
        raise InsufficientOrderError(
            f"L⁻¹ through ε^{order} needs transformations through order {order + k}, "
            f"have φ through {phi.valid_order} and ψ through {psi.valid_order}."
        )
    psi_inv = series_inverse_near_identity(psi.series, psi.valid_order)
    left = laurent_mul(LaurentSeries.from_series(phi.series), delta_pinv(diagonal), order)
    result = laurent_mul(left, LaurentSeries.from_series(psi_inv), order)
    logger.debug(f"L⁻¹ expanded with pole order {result.pole_order} through ε^{order}")
    return result


def point_values(result: DiagonalizationResult, x: Any) -> PointValues:
    """
    Exact φ(x), ψ(x), Δ(x) and L⁻¹(x) = φ(x)·Δ⁻¹(x)·ψ(x)⁻¹ for polynomial input.

    Raises:
        InsufficientOrderError: the input is a truncated jet
        SamplePointError: x = 0, I - x·Q(x) is singular, or ψ(x) is singular
    """
    L = result.state.L
    if not L.is_exact or result.defining_data is None:
        raise InsufficientOrderError("Exact point values need a polynomial family.")
    field = L.field
    x = field.convert(x)
    if x == field.zero:
        raise SamplePointError("Sample points must be nonzero.")
    L_at = L.evaluate(x)
    phi_at = evaluate_phi(result.defining_data, x)
    S_at = L_at @ phi_at
    psi_at = evaluate_psi(result.state, result.S, S_at, x)
    try:
        psi_inv = psi_at.inv()
    except NotInvertibleError as e:
        raise SamplePointError(f"ψ(ε) is singular at ε = {field.format(x)}.") from e
    delta_inv, _ = delta_pinv(result.diagonal).evaluate(x)
    return PointValues(
        point=x,
        L=L_at,
        phi=phi_at,
        psi=psi_at,
        delta=result.diagonal.evaluate(x),
        delta_inv=delta_inv,
        pinv=phi_at @ delta_inv @ psi_inv,
    )


def check_pinv_leading(result: DiagonalizationResult, pinv: LaurentSeries) -> bool:
    """Pole order k with leading coefficient S_(k+1)⁻¹𝒫_(k+1) (trivially true when degenerate)."""
    k = result.diagonal.k
    if result.state.stabilization.degenerate:
        return pinv.pole_order == 0
    expected = result.diagonal.parts[-1].Sinv
    return pinv.pole_order == k and pinv.leading.equals(expected)
