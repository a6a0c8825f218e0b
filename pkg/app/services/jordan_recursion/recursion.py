"""
Kernel/range recursion with stabilization detection.

Step i refines the nested kernels N_i ⊆ N_{i-1} and splits the remaining
target R_{i-1}^c = R_i ⊕ R_i^c, then records the E and M columns that carry
approximate kernel curves from one order to the next.
"""

import logging
from typing import Optional

import sympy
from sympy.polys.matrices import DomainMatrix

from app.errors import (
    ContainmentError,
    InsufficientOrderError,
    InternalConsistencyError,
    NonStabilizationError,
)
from app.services.core_algebra import (
    Mat,
    MatSeries,
    Subspace,
    build_decomposition,
    complement_in,
    kernel,
    range_of,
)
from .records import CertificationMethod, RecursionState, StabilizationReport, StepRecord

logger = logging.getLogger(__name__)

EPS = sympy.Symbol("eps")


class RecursionLimits:
    """Defaults for the stabilization driver."""

    DEFAULT_K_MAX = 64
    # Justification: desk-scale families (ambient <= 50, degree <= 10) stay far below
    # the r*d bound on k; 64 steps catches runaway inputs without truncating real ones.

    FLOAT_RANK_SAMPLES = (0.3183098861837907, -0.5772156649015329, 1.4142135623730951, 2.718281828459045)
    # Justification: irrational-looking points avoid the roots of small-integer minors,
    # and the maximum rank over four points recovers the generic rank with high probability.


# --- GENERIC RANK ---

def generic_rank(L: MatSeries) -> Optional[int]:
    """
    Rank of L(ε) over the rational-function field.

    Exact polynomials are eliminated over K(ε); the float backend takes the
    largest numerical rank over a few sample points. Jets have no generic rank.
    """
    if not L.is_exact:
        return None
    if L.rows == 0 or L.cols == 0 or not L.coeffs:
        return 0
    if not L.field.is_exact:
        return max(L.evaluate(x).rank() for x in RecursionLimits.FLOAT_RANK_SAMPLES)
    ring, rows = polynomial_entries(L)
    return DomainMatrix(rows, (L.rows, L.cols), ring).to_field().rank()


def polynomial_entries(L: MatSeries):
    """
    Entries of an exact polynomial family as elements of K[ε].

    Returns:
        (ring, rows): the sympy polynomial ring and a list of rows of its elements
    """
    domain = L.field.domain
    ring = L.field.poly_ring(EPS)
    entries = [c.entries() for c in L.coeffs]
    rows = []
    for a in range(L.rows):
        row = []
        for b in range(L.cols):
            expr = sum(
                (domain.to_sympy(c[a][b]) * EPS**i for i, c in enumerate(entries)),
                sympy.Integer(0),
            )
            row.append(ring.from_sympy(expr))
        rows.append(row)
    return ring, rows


# --- SINGLE STEP ---

def _containment(fn, *args, what: str):
    try:
        return fn(*args)
    except ContainmentError as e:
        raise InternalConsistencyError(f"{what}: {e}") from e


def step(state: RecursionState) -> RecursionState:
    """
    Append the next StepRecord.

    Args:
        state: recursion holding steps 1..i-1

    Returns:
        new state holding steps 1..i

    Raises:
        InsufficientOrderError: the input jet does not carry L_{i-1}
    """
    i = state.depth + 1
    L, field = state.L, state.field
    m, m_bar = state.m, state.m_bar
    if not L.covers(i - 1):
        raise InsufficientOrderError(f"Step {i} needs L_{i - 1}, but the input is valid through order {L.order}.")

    if i == 1:
        Sbar = L.coeff(0)
    else:
        Sbar = Mat.zeros(m_bar, m, field)
        for r in range(1, i):
            Sbar = Sbar + L.coeff(r) @ state.M(r, i - 1)
    S = Sbar if i == 1 else state.step_record(i - 1).cokernel_projector @ Sbar

    N_prev, Rc_prev = state.N(i - 1), state.R_c(i - 1)
    restricted = S @ N_prev.basis
    N = Subspace(N_prev.basis @ kernel(restricted).basis)
    R = range_of(restricted)
    N_c = _containment(complement_in, N, N_prev, what=f"Step {i}: N_i outside N_(i-1)")
    R_c = _containment(complement_in, R, Rc_prev, what=f"Step {i}: R_i outside R_(i-1)^c")
    if N_c.dim != R.dim:
        raise InternalConsistencyError(f"Step {i}: dim N_i^c = {N_c.dim} differs from dim R_i = {R.dim}.")

    previous = state.steps
    kernel_split = build_decomposition([s.N_c for s in previous] + [N_c, N], m, field)
    range_split = build_decomposition([s.R for s in previous] + [R, R_c], m_bar, field)

    # S_i restricted to N_i^c is a bijection onto R_i
    images = S @ N_c.basis
    G = images.solve(R.basis)
    if G is None:
        raise InternalConsistencyError(f"Step {i}: S_i does not map N_i^c onto R_i.")
    Sinv_coords = N_c.basis @ G
    Sinv = Sinv_coords @ range_split.selectors[i - 1]

    identity_m = Mat.eye(m, field)
    if i == 1:
        E_col = (identity_m,)
        e_next = (-Sinv,)
    else:
        e_current = previous[-1].e_next
        E_col = tuple(e @ Sbar for e in e_current) + (identity_m,)
        B = Sbar @ Sinv
        complement = Mat.eye(m_bar, field) - B
        e_next = tuple(e @ complement for e in e_current) + (-Sinv,)

    M_col = [E_col[0]]
    for r in range(1, i):
        acc = Mat.zeros(m, m, field)
        for v in range(r, i):
            acc = acc + state.M(r, v) @ E_col[v]
        M_col.append(acc)

    record = StepRecord(
        index=i,
        Sbar=Sbar,
        S=S,
        N=N,
        N_c=N_c,
        R=R,
        R_c=R_c,
        E_col=E_col,
        M_col=tuple(M_col),
        Sinv=Sinv,
        Sinv_coords=Sinv_coords,
        e_next=e_next,
        kernel_split=kernel_split,
        range_split=range_split,
    )
    logger.debug(f"Recursion step {i}: dim N={N.dim}, dim N^c={N_c.dim}, dim R={R.dim}, dim R^c={R_c.dim}")
    return state.with_steps(previous + (record,))


def extend(state: RecursionState, through: int) -> RecursionState:
    """Run further steps until the state holds steps 1..through."""
    while state.depth < through:
        state = step(state)
    return state


# --- STABILIZATION ---

def _report(
    state: RecursionState,
    certified: bool,
    method: CertificationMethod,
    horizon: Optional[int],
    rank: Optional[int],
) -> StabilizationReport:
    nonzero = [s.index for s in state.steps if s.R.dim > 0]
    degenerate = not nonzero
    k = nonzero[-1] - 1 if nonzero else 0
    if state.depth < k + 1:
        raise InternalConsistencyError(f"Stabilization at k={k} needs {k + 1} steps, have {state.depth}.")
    limit = state.step_record(k + 1)
    multiplicities = tuple(state.step_record(j + 1).N_c.dim for j in range(k + 1))
    dim_range = sum(state.step_record(j + 1).R.dim for j in range(k + 1))
    if sum(multiplicities) + limit.N.dim != state.m or dim_range + limit.R_c.dim != state.m_bar:
        raise InternalConsistencyError(f"Direct-sum accounting fails at k={k}.")
    return StabilizationReport(
        k=k,
        exponent_multiplicities=multiplicities,
        dim_kernel_limit=limit.N.dim,
        dim_range_limit=dim_range,
        certified=certified,
        certification_method=method,
        degenerate=degenerate,
        steps_examined=state.depth,
        horizon=horizon,
        generic_rank=rank,
    )


def _exhausted(record: StepRecord) -> bool:
    return record.N.dim == 0 or record.R_c.dim == 0


def run_until_stabilized(L: MatSeries, k_max: int = RecursionLimits.DEFAULT_K_MAX) -> RecursionState:
    """
    Run the recursion until stabilization can be declared.

    Exact polynomials stop as soon as dim N_i reaches m - r (r the generic
    rank): no later step can shrink N_i, so every later R_i vanishes and the
    degree bound r·d is exhausted. Jets run through their order and always
    report through-order-only; `certified` is set for a jet only when the
    kernel or the cokernel is used up first (N_i and R_i only read
    L_0, …, L_(i-1)).

    Args:
        L: the family, m̄ x m
        k_max: largest admissible stabilization index

    Returns:
        state whose stabilization report is set

    Raises:
        NonStabilizationError: k_max reached first; carries the partial state
    """
    if k_max < 1:
        raise ValueError(f"k_max must be at least 1, got {k_max}.")
    state = RecursionState(L)
    logger.info(f"Starting recursion on a {L.rows}x{L.cols} {L.kind.value} family (k_max={k_max})")

    if L.is_exact:
        rank = generic_rank(L)
        degree = max(L.degree, 0)
        horizon = rank * degree
        target = L.cols - rank
        while True:
            if state.depth >= k_max + 1:
                raise NonStabilizationError(
                    f"No stabilization within k_max={k_max}: dim N_{state.depth} = {state.N(state.depth).dim}, "
                    f"expected {target}.",
                    partial_state=state,
                )
            state = step(state)
            record = state.steps[-1]
            if record.N.dim == target or _exhausted(record):
                break
            if state.depth > horizon + 1:
                if L.field.is_exact:
                    raise InternalConsistencyError(
                        f"Degree bound r*d={horizon} passed with dim N={record.N.dim} above m-r={target}."
                    )
                raise NonStabilizationError(
                    f"Float recursion passed the degree bound {horizon} without reaching dim N = {target}; "
                    f"try a different tolerance.",
                    partial_state=state,
                )
        report = _report(state, True, CertificationMethod.EXHAUSTED_DEGREE_BOUND, horizon, rank)
    else:
        horizon = L.order
        certified = False
        while state.depth < horizon + 1:
            if state.depth >= k_max + 1:
                raise NonStabilizationError(
                    f"No stabilization within k_max={k_max} for a jet of order {L.order}.",
                    partial_state=state,
                )
            state = step(state)
            if _exhausted(state.steps[-1]):
                certified = True
                break
        report = _report(state, certified, CertificationMethod.THROUGH_ORDER_ONLY, horizon, None)
        if not certified:
            logger.warning(f"Stabilization at k={report.k} holds through jet order {L.order} only")

    logger.info(
        f"Stabilized at k={report.k} after {state.depth} steps: exponents={report.exponents}, "
        f"dim N_(k+1)={report.dim_kernel_limit}, certified={report.certified}"
    )
    return state.with_stabilization(report)

