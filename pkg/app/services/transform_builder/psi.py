import logging
from typing import Any

from app.errors import InsufficientOrderError
from app.services.core_algebra import Mat, MatSeries
from app.services.jordan_recursion import RecursionState
from .models import Provenance, Transform

logger = logging.getLogger(__name__)


def psi_build(state: RecursionState, S: MatSeries, order: int) -> Transform:
    """
    Left transformation ψ(ε) = I + Σ_i εⁱ·ψ_i with
    ψ_i = Σ_{j=1..k+1} S_{i+j}·S_j⁻¹𝒫_j.

    Indices of S_{i+j} refer to the coefficients of S = L·φ (S_1 constant term).

    Raises:
        InsufficientOrderError: S is not valid through index k+order
    """
    k = state.k
    if not S.covers(k + order):
        raise InsufficientOrderError(f"ψ through order {order} needs S = L·φ through {k + order}, have {S.order}.")
    coeffs = [Mat.eye(state.m_bar, state.field)]
    for i in range(1, order + 1):
        acc = Mat.zeros(state.m_bar, state.m_bar, state.field)
        for j in range(1, k + 2):
            acc = acc + S.coeff(i + j - 1) @ state.step_record(j).Sinv
        coeffs.append(acc)
    logger.debug(f"ψ built through order {order} from {k + 1} inverse blocks")
    return Transform(MatSeries.jet(coeffs, order, state.m_bar, state.m_bar, state.field), order, Provenance.LEFT_FACTOR)


def evaluate_psi(state: RecursionState, S: MatSeries, S_at: Mat, x: Any) -> Mat:
    """
    Exact ψ(x) from the value S(x) = L(x)·φ(x):
    ψ(x) = I + Σ_j x^{-(j-1)}·(S(x) - Σ_{t<j} x^t·S_{t+1})·S_j⁻¹𝒫_j.
    """
    field = state.field
    x = field.convert(x)
    inverse = field.one / x
    total = Mat.eye(state.m_bar, field)
    remainder = S_at
    scale = field.one
    for j in range(1, state.k + 2):
        remainder = remainder - S.coeff(j - 1).scale(_power(x, j - 1, field))
        total = total + remainder.scale(scale) @ state.step_record(j).Sinv
        scale = scale * inverse
    return total


def _power(x, n: int, field):
    result = field.one
    for _ in range(n):
        result = result * x
    return result
