"""
Pre-transformation p_k(ε) and the triangular structure of L·p_k.
"""

import logging
from typing import List

from app.errors import InsufficientOrderError, InternalConsistencyError
from app.services.core_algebra import Mat, MatSeries, Subspace, kernel, series_mul
from app.services.jordan_recursion import IdentityCheck, RecursionState, toeplitz_system
from .models import PreTransform

logger = logging.getLogger(__name__)


def pre_transform(state: RecursionState) -> PreTransform:
    """
    Assemble p_k(ε) = I + Σ_{s=1..k} ε^s·M_{k+1-s,k+1} from column M_(k+1).

    Raises:
        InsufficientOrderError: recursion holds fewer than k+1 steps
    """
    k = state.k
    if state.depth < k + 1:
        raise InsufficientOrderError(f"p_k needs column M_{k + 1}, recursion holds {state.depth} steps.")
    coeffs = [Mat.eye(state.m, state.field)]
    coeffs += [state.M(k + 1 - s, k + 1) for s in range(1, k + 1)]
    return PreTransform(k, MatSeries.polynomial(coeffs, state.m, state.m, state.field))


def triangular_check(L: MatSeries, p: PreTransform, state: RecursionState) -> List[IdentityCheck]:
    """
    Verify the triangular structure of S_k(ε) = L·p_k.

    For i = 1..k+1 the ε^{i-1} coefficient must equal the recursion's S_i, and
    S_i(N_1^c + … + N_(i-1)^c) ⊆ R_(i-1)^c, S_i·N_i^c = R_i, S_i·N_i = 0.
    The kernel of the block Toeplitz system of S_1..S_i must be N_1 x … x N_i.

    Raises:
        InternalConsistencyError: any of these fails
    """
    k = p.k
    transformed = series_mul(L, p.poly, order=k)
    failures = {"coefficients": [], "containments": [], "chains": []}
    for i in range(1, k + 2):
        record = state.step_record(i)
        S_i = transformed.coeff(i - 1)
        if not S_i.equals(record.S):
            failures["coefficients"].append(i)
            continue
        earlier = Mat.hstack([state.step_record(j).N_c.basis for j in range(1, i)], rows=state.m, field=state.field)
        ok = state.R_c(i - 1).contains(S_i @ earlier)
        ok = ok and Subspace.span(S_i @ record.N_c.basis).equals(record.R)
        ok = ok and (S_i @ record.N.basis).is_zero()
        if not ok:
            failures["containments"].append(i)
            continue
        head = MatSeries.polynomial(
            [state.step_record(j).S for j in range(1, i + 1)], state.m_bar, state.m, state.field
        )
        chain_space = kernel(toeplitz_system(head, i))
        product = Mat.block(
            [
                [state.N(r).basis if r == c else Mat.zeros(state.m, state.N(c).dim, state.field) for c in range(1, i + 1)]
                for r in range(1, i + 1)
            ]
        )
        if not chain_space.equals(Subspace.span(product)):
            failures["chains"].append(i)

    checks = [
        IdentityCheck("pre-transform-coefficients", not failures["coefficients"], min(failures["coefficients"], default=None)),
        IdentityCheck("triangular-containments", not failures["containments"], min(failures["containments"], default=None)),
        IdentityCheck("transformed-chains", not failures["chains"], min(failures["chains"], default=None)),
    ]
    broken = [c.name for c in checks if not c.passed]
    if broken:
        raise InternalConsistencyError(f"Triangular structure of L·p_{k} fails: {', '.join(broken)}.")
    logger.debug(f"Triangular structure of L·p_{k} verified for {k + 1} operators")
    return checks
