"""
Power-series solutions of L(ε)·b(ε) = 0.

Every exact solution is φ(ε)·n(ε) for a power series n(ε) over N_(k+1).
An approximation with L·b = O(ε^{k+l}) agrees in its first l coefficients
with such a solution, which is recovered by peeling φ off b one
coefficient at a time.
"""

import logging
from typing import List, Optional, Sequence

from app.errors import (
    ContainmentError,
    InsufficientOrderError,
    InternalConsistencyError,
    NotASolutionError,
)
from app.services.core_algebra import Mat, MatSeries, Subspace, series_mul
from app.services.jordan_recursion import RecursionState, solution_jet_space
from app.services.transform_builder import Transform
from .models import ArtinReesSplit, FlatBasis, SolutionCurve

logger = logging.getLogger(__name__)


def _apply_phi(phi: Transform, params: Sequence[Mat], through: int) -> List[Mat]:
    """Coefficients 0..through of φ(ε)·Σ εⁱ·params[i]."""
    m = phi.series.rows
    zero = Mat.zeros(m, 1, phi.series.field)
    out = []
    for j in range(through + 1):
        acc = zero
        for i in range(min(j, len(params) - 1) + 1):
            acc = acc + phi.coeff(j - i) @ params[i]
        out.append(acc)
    return out


def _peel(b: SolutionCurve, phi: Transform, state: RecursionState, required: int, available: int) -> List[Mat]:
    """
    n⁰ = b_0 and nⁱ = b_i - Σ_{j=1..i} φ_j·n^{i-j}.

    The first `required` parameters must lie in N_(k+1); past them, peeling
    stops at the first parameter outside N_(k+1) or at `available`.
    """
    target = state.N(state.k + 1)
    params: List[Mat] = []
    for i in range(available):
        if i > phi.valid_order:
            if i < required:
                raise InsufficientOrderError(f"Peeling coefficient {i} needs φ through order {i}, have {phi.valid_order}.")
            break
        n = b.coeffs[i]
        for j in range(1, i + 1):
            n = n - phi.coeff(j) @ params[i - j]
        if not target.contains(n):
            if i < required:
                raise InternalConsistencyError(
                    f"Parameter {i} of an order-{b.approximation_order} approximation leaves N_{state.k + 1}."
                )
            logger.debug(f"Peeling stopped at coefficient {i}: the jet does not extend past it")
            break
        params.append(n)
    return params


def parametrize_solution(b: SolutionCurve, phi: Transform, state: RecursionState) -> List[Mat]:
    """
    Parameters n⁰, n¹, … over N_(k+1) with b = φ(ε)·Σ εⁱ·nⁱ.

    Coefficients within k of the end of the jet are not forced by the residual;
    parameters are returned as long as they stay in N_(k+1).

    Raises:
        NotASolutionError: L·b has a nonzero coefficient within the stored order
        InternalConsistencyError: a forced parameter leaves N_(k+1)
    """
    if not b.is_exact_through_order:
        raise NotASolutionError(f"Curve is not a solution: residual coefficient {b.residual_order} is nonzero.")
    forced = max(b.approximation_order - state.k, 0)
    return _peel(b, phi, state, forced, b.order)


def flat_basis(state: RecursionState, phi: Transform) -> FlatBasis:
    """One analytic solution φ(ε)·n̄ per basis vector n̄ of N_(k+1)."""
    basis = state.N(state.k + 1).basis
    generators = tuple(
        SolutionCurve.build(state.L, _apply_phi(phi, [basis.column(c)], phi.valid_order))
        for c in range(basis.cols)
    )
    logger.info(f"Flat basis with {len(generators)} generators through order {phi.valid_order}")
    return FlatBasis(generators=generators, basis=basis, valid_order=phi.valid_order)


def _resolve_l(b: SolutionCurve, state: RecursionState, l: Optional[int]) -> int:
    available = b.approximation_order - state.k
    if l is None:
        l = available
    if l < 1:
        raise NotASolutionError(
            f"An approximation of order {b.approximation_order} carries no exact coefficients when k={state.k}."
        )
    if l > available:
        raise NotASolutionError(
            f"Agreement in {l} coefficients needs an approximation of order {state.k + l}, "
            f"the curve has order {b.approximation_order}."
        )
    return l


def artin_approximate(
    b: SolutionCurve,
    state: RecursionState,
    phi: Transform,
    l: Optional[int] = None,
) -> SolutionCurve:
    """
    Exact solution agreeing with an order-(k+l) approximation in its first l coefficients.

    Peeling continues past the l required parameters while they stay in
    N_(k+1), so coefficients from ε^l on can differ from the solution built
    out of the first l parameters alone.

    Args:
        b: approximation with L·b = O(ε^{k+l})
        state: stabilized recursion
        phi: right transformation
        l: agreement length (default: everything the residual order allows)

    Returns:
        φ(ε)·(n⁰ + … ) through φ's valid order

    Raises:
        NotASolutionError: residual order below k+l, or l < 1
    """
    l = _resolve_l(b, state, l)
    params = _peel(b, phi, state, l, b.order)
    solution = SolutionCurve.build(state.L, _apply_phi(phi, params, phi.valid_order))
    logger.debug(f"Artin approximation: l={l}, {len(params)} parameters, agrees through {l - 1}")
    return solution


def greenberg(state: RecursionState, l: int) -> int:
    """Approximation order k + l that guarantees agreement in l coefficients."""
    if l < 1:
        raise ValueError(f"l must be at least 1, got {l}.")
    return state.k + l


def extendable_jets(state: RecursionState, phi: Transform, order: int) -> Subspace:
    """
    Jets (b_0; …; b_{order-1}) of exact solutions φ(ε)·n(ε), in ε-order layout.

    Raises:
        InsufficientOrderError: φ is not valid through order - 1
    """
    m = state.m
    if order == 0:
        return Subspace.zero(0, state.field)
    if phi.valid_order < order - 1:
        raise InsufficientOrderError(f"Jets of length {order} need φ through {order - 1}, have {phi.valid_order}.")
    basis = state.N(state.k + 1).basis
    zero = Mat.zeros(m, 1, state.field)
    columns = []
    for i in range(order):
        for c in range(basis.cols):
            params = [zero] * i + [basis.column(c)]
            columns.append(Mat.vstack(_apply_phi(phi, params, order - 1)))
    return Subspace.span(Mat.hstack(columns, rows=m * order, field=state.field))


def greenberg_minimal(state: RecursionState, phi: Transform, l: int, max_order: Optional[int] = None) -> Optional[int]:
    """
    Smallest G such that every order-G approximation agrees with an exact
    solution in l coefficients, found by block Toeplitz elimination.

    Returns:
        G, or None when no G ≤ max_order (default k + l) works
    """
    if l < 1:
        raise ValueError(f"l must be at least 1, got {l}.")
    top = greenberg(state, l) if max_order is None else max_order
    target = extendable_jets(state, phi, l)
    m = state.m
    for G in range(l, top + 1):
        if not state.L.covers(G - 1):
            break
        jets = solution_jet_space(state.L, G).basis
        leading = jets.row_range(0, m * l) if jets.cols else Mat.zeros(m * l, 0, state.field)
        if target.contains(leading):
            logger.debug(f"Minimal Greenberg order for l={l}: {G} (bound {state.k + l})")
            return G
    return None


def artin_rees_decompose(
    b: SolutionCurve,
    state: RecursionState,
    phi: Transform,
    l: Optional[int] = None,
) -> ArtinReesSplit:
    """
    b = b̂ + ε^l·b₀ with b̂ exact, so that L·b = ε^l·L·b₀.

    b̂ is the greedy solution of artin_approximate, not the l-parameter one.

    Raises:
        NotASolutionError: as artin_approximate
        InternalConsistencyError: the difference does not start at ε^l, or the
            residual identity fails
    """
    l = _resolve_l(b, state, l)
    params = _peel(b, phi, state, l, b.order)
    through = phi.valid_order
    exact_coeffs = _apply_phi(phi, params, through)
    approximation = SolutionCurve.build(state.L, exact_coeffs)
    diff = [b.coeffs[i] - exact_coeffs[i] for i in range(min(b.order, through + 1))]
    if any(not d.is_zero() for d in diff[:l]):
        raise InternalConsistencyError(f"The exact solution does not agree with b in its first {l} coefficients.")
    remainder_coeffs = diff[l:] or [Mat.zeros(state.m, 1, state.field)]
    remainder = SolutionCurve.build(state.L, remainder_coeffs)

    check_through = len(diff) - 1
    lhs = series_mul(state.L, MatSeries.jet(diff, check_through, state.m, 1, state.field), order=check_through)
    rhs = series_mul(state.L, remainder.as_series(), order=check_through).shift(l)
    if lhs.first_difference(rhs, check_through) is not None:
        raise InternalConsistencyError("L·(b - b̂) ≠ ε^l·L·b₀.")
    return ArtinReesSplit(approximation=approximation, remainder=remainder, l=l, parameters=params)


def truncation_solution(params: Sequence[Mat], c: int, phi: Transform, state: RecursionState) -> SolutionCurve:
    """
    b*(ε) = φ(ε)·(n⁰ + … + ε^c·n^c), an exact solution agreeing with φ·n(ε) through ε^c.

    Raises:
        ContainmentError: some nⁱ with i ≤ c lies outside N_(k+1)
    """
    target = state.N(state.k + 1)
    head = list(params[: c + 1])
    for i, n in enumerate(head):
        if not target.contains(n):
            raise ContainmentError(f"Parameter {i} does not lie in N_{state.k + 1}.")
    if not head:
        head = [Mat.zeros(state.m, 1, state.field)]
    return SolutionCurve.build(state.L, _apply_phi(phi, head, phi.valid_order))
