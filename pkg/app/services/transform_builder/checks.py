"""
Coefficient-level identities tying L, φ, ψ and Δ together.

Every check compares exact coefficients through an explicit order and
reports the first index where the identity breaks.
"""

import logging
from typing import List, Optional

from app.services.core_algebra import Mat, MatSeries, series_inverse_near_identity, series_mul
from app.services.jordan_recursion import IdentityCheck, RecursionState
from .models import DefiningEqData, DiagonalForm, Transform

logger = logging.getLogger(__name__)


def _result(name: str, first: Optional[int], detail: str) -> IdentityCheck:
    if first is not None:
        logger.warning(f"Transform check {name} failed at coefficient {first}")
    return IdentityCheck(name, first is None, first, detail)


def check_dual_path(phi: Transform, phi_defining: Transform) -> IdentityCheck:
    through = min(phi.valid_order, phi_defining.valid_order)
    first = phi.series.first_difference(phi_defining.series, through)
    return _result("dual-path-phi", first, f"Toeplitz row and defining equation agree through order {through}")


def check_diagonal_identity(L: MatSeries, phi: Transform, psi: Transform, diagonal: DiagonalForm, through: int) -> IdentityCheck:
    """ψ⁻¹·L·φ - Δ vanishes through `through`."""
    psi_inv = series_inverse_near_identity(psi.series, through)
    lhs = series_mul(series_mul(psi_inv, L, order=through), phi.series, order=through)
    first = (lhs - diagonal.series()).first_nonzero(through)
    return _result("diagonal-identity", first, f"ψ⁻¹·L·φ = Δ through order {through}")


def check_factorization(L: MatSeries, phi: Transform, psi: Transform, diagonal: DiagonalForm, through: int) -> IdentityCheck:
    """ψ·Δ = L·φ through `through`."""
    left = series_mul(psi.series, diagonal.series(), order=through)
    right = series_mul(L, phi.series, order=through)
    return _result("factorization", left.first_difference(right, through), f"ψ·Δ = L·φ through order {through}")


def check_annihilation(state: RecursionState, S: MatSeries, through: int) -> IdentityCheck:
    """S(ε)·N_(k+1) = 0."""
    basis = state.N(state.k + 1).basis
    first = next((i for i in range(through + 1) if not (S.coeff(i) @ basis).is_zero()), None)
    return _result("annihilation", first, f"S·N_(k+1) = 0 through order {through}")


def check_remainder_confinement(state: RecursionState, S: MatSeries, through: int) -> IdentityCheck:
    """For l ≥ 2 the coefficients S_{k+l} map into R_(k+1)^c and kill N_(k+1)."""
    k = state.k
    record = state.step_record(k + 1)
    leading = record.range_split.projector_sum(range(k + 1))
    basis = record.N.basis
    first = None
    for index in range(k + 1, through + 1):
        coeff = S.coeff(index)
        if not ((leading @ coeff).is_zero() and (coeff @ basis).is_zero()):
            first = index
            break
    return _result("remainder-confinement", first, f"S_(k+l), l ≥ 2, confined through order {through}")


def check_expansion_rate(state: RecursionState, S: MatSeries) -> IdentityCheck:
    """For n ∈ N_(i+1)^c: (L·φ·n)_j = 0 for j < i and (L·φ·n)_i = S_(i+1)·n."""
    first = None
    for i in range(state.k + 1):
        if not S.covers(i):
            break
        n = state.step_record(i + 1).N_c.basis
        low_ok = all((S.coeff(j) @ n).is_zero() for j in range(i))
        if not (low_ok and (S.coeff(i) @ n).equals(state.step_record(i + 1).S @ n)):
            first = i
            break
    return _result("expansion-rate", first, "L·φ·n = εⁱ·(S_(i+1)·n + O(ε)) on N_(i+1)^c")


def check_defining_residual(data: DefiningEqData) -> IdentityCheck:
    residual = data.residual()
    first = residual.first_nonzero(residual.order)
    return _result("defining-equation-residual", first, f"[I - εQ]·d̄ = q̄ through order {residual.order}")


def check_tail_structure(state: RecursionState, data: DefiningEqData) -> IdentityCheck:
    """
    For l ≥ k+1, component r ≤ k+1 of column M_(k+1+l) equals
    Σ_{c=1..r} H_{r+1-c}·S̄_{k+2+l-c}.
    """
    k = state.k
    first = None
    for l in range(k + 1, state.depth - k):
        column = k + 1 + l
        for r in range(1, k + 2):
            acc = Mat.zeros(state.m, state.m, state.field)
            for c in range(1, r + 1):
                acc = acc + data.Hbar[r - c] @ state.step_record(k + 2 + l - c).Sbar
            if not acc.equals(state.M(r, column)):
                first = column
                break
        if first is not None:
            break
    return _result("tail-structure", first, "leading components of late M columns factor through H")


def run_transform_checks(
    state: RecursionState,
    L: MatSeries,
    phi: Transform,
    psi: Transform,
    diagonal: DiagonalForm,
    S: MatSeries,
    through: int,
    data: Optional[DefiningEqData] = None,
) -> List[IdentityCheck]:
    checks = [
        check_factorization(L, phi, psi, diagonal, through),
        check_annihilation(state, S, min(through, S.order if S.order is not None else through)),
        check_remainder_confinement(state, S, min(through + state.k, S.order if S.order is not None else through)),
        check_expansion_rate(state, S),
    ]
    if data is not None:
        checks += [check_defining_residual(data), check_tail_structure(state, data)]
    return checks
