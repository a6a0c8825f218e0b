"""
Local diagonalization ψ⁻¹(ε)·L(ε)·φ(ε) = Δ(ε).
"""

import logging
from typing import Optional

from app.errors import InsufficientOrderError, VerificationError
from app.services.core_algebra import MatSeries, series_mul
from app.services.jordan_recursion import RecursionLimits, RecursionState, extend, run_identity_suite, run_until_stabilized
from .checks import check_diagonal_identity, check_dual_path, run_transform_checks
from .models import DiagonalForm, DiagonalizationResult, DiagonalPart
from .phi import phi_from_defining_eq, phi_from_toeplitz
from .pre_transform import pre_transform, triangular_check
from .psi import psi_build

logger = logging.getLogger(__name__)


class ExpansionDefaults:
    EXTRA_ORDERS = 6
    # Justification: the recursion forces coefficients up to 2k; six more show the
    # free part of every transformation without inflating exact rational growth.


def default_order(k: int) -> int:
    return 2 * k + ExpansionDefaults.EXTRA_ORDERS


def diagonal_form(state: RecursionState) -> DiagonalForm:
    """Δ's operators and projectors, read from steps 1..k+1."""
    k = state.k
    limit = state.step_record(k + 1)
    parts = tuple(
        DiagonalPart(
            exponent=i - 1,
            S=state.step_record(i).S,
            P=limit.kernel_split.projectors[i - 1],
            range_projector=limit.range_split.projectors[i - 1],
            Sinv=state.step_record(i).Sinv,
        )
        for i in range(1, k + 2)
    )
    return DiagonalForm(
        k=k,
        parts=parts,
        P_ker=limit.kernel_projector,
        Pi_coker=limit.cokernel_projector,
        rows=state.m_bar,
        cols=state.m,
    )


def expansion_orders(L: MatSeries, k: int, order: Optional[int]) -> tuple:
    """
    (ψ order, φ order) for a requested expansion order.

    ψ through N needs S = L·φ, hence φ, through N + k; a jet of order T caps
    φ at T - k and ψ at T - 2k.
    """
    requested = default_order(k) if order is None else order
    if L.is_exact:
        return requested, requested + k
    psi_order = min(requested, L.order - 2 * k)
    if psi_order < 0:
        raise InsufficientOrderError(f"A jet of order {L.order} cannot carry transformations for k={k}.")
    return psi_order, psi_order + k


def diagonalize(
    L: MatSeries,
    order: Optional[int] = None,
    k_max: int = RecursionLimits.DEFAULT_K_MAX,
    check: bool = False,
    state: Optional[RecursionState] = None,
) -> DiagonalizationResult:
    """
    End-to-end local diagonalization.

    Runs the recursion, builds φ both ways and insists they agree, forms
    S = L·φ, builds ψ and assembles Δ. The diagonal identity is always
    verified; `check` adds the factorization, structure and recursion suites.

    Args:
        L: the family
        order: expansion order of ψ (default 2k+6)
        k_max: stabilization cap
        check: run the full identity suite
        state: an already stabilized recursion for L

    Raises:
        VerificationError: the two constructions of φ disagree
    """
    if state is None:
        state = run_until_stabilized(L, k_max)
    k = state.k
    psi_order, phi_order = expansion_orders(L, k, order)
    state = extend(state, k + 1 + phi_order)

    phi = phi_from_toeplitz(state, phi_order)
    notes = []
    phi_defining, data = None, None
    try:
        phi_defining, data = phi_from_defining_eq(state, phi_order)
    except InsufficientOrderError as e:
        notes.append(f"Defining-equation path skipped: {e}")
        logger.warning(f"Defining-equation path skipped: {e}")

    checks = []
    if phi_defining is not None:
        dual = check_dual_path(phi, phi_defining)
        if not dual.passed:
            raise VerificationError("dual-path-phi", "Toeplitz row and defining equation differ.", dual.first_failure)
        checks.append(dual)

    S = series_mul(L, phi.series, order=phi_order)
    psi = psi_build(state, S, psi_order)
    diagonal = diagonal_form(state)
    checks.append(check_diagonal_identity(L, phi, psi, diagonal, psi_order))

    if check:
        checks += triangular_check(L, pre_transform(state), state)
        checks += run_transform_checks(state, L, phi, psi, diagonal, S, psi_order, data)
        checks += run_identity_suite(state)

    logger.info(
        f"Diagonalized at k={k}: φ through {phi.valid_order}, ψ through {psi.valid_order}, "
        f"{sum(c.passed for c in checks)}/{len(checks)} checks passed"
    )
    return DiagonalizationResult(
        state=state,
        phi=phi,
        psi=psi,
        diagonal=diagonal,
        S=S,
        order=psi_order,
        phi_defining=phi_defining,
        defining_data=data,
        checks=checks,
        notes=notes,
    )
