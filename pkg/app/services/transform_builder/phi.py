"""
Right transformation φ(ε), built two independent ways.

The Toeplitz path reads φ_j = M_{k+1,k+1+j} off the recursion. The
defining-equation path folds everything past order k into one linear
equation [I - ε·Q(ε)]·d̄(ε) = q̄(ε) whose solution supplies the tail
φ_{k+1+l} = (d̄_{k+1})_l; for polynomial input Q and q̄ are polynomials, so
φ can also be evaluated exactly at a point.
"""

import logging
from typing import Any, List, Tuple

from app.errors import InsufficientOrderError, NotInvertibleError, SamplePointError
from app.services.core_algebra import (
    Mat,
    MatSeries,
    section,
    series_block,
    series_inverse_near_identity,
    series_mul,
)
from app.services.jordan_recursion import RecursionState, extend
from .models import DefiningEqData, Provenance, Transform

logger = logging.getLogger(__name__)


def phi_valid_order(L: MatSeries, k: int, requested: int) -> int:
    """φ_j needs L through k+j, so a jet of order T supports φ through T-k."""
    if L.is_exact:
        return requested
    return min(requested, L.order - k)


# --- TOEPLITZ ROW ---

def phi_from_toeplitz(state: RecursionState, order: int) -> Transform:
    """
    φ(ε) = I + Σ_{j=1..order} ε^j·M_{k+1,k+1+j}.

    Raises:
        InsufficientOrderError: L does not reach index k+order
    """
    k = state.k
    if not state.L.covers(k + order):
        raise InsufficientOrderError(
            f"φ through order {order} needs L through {k + order}, input is valid through {state.L.order}."
        )
    state = extend(state, k + 1 + order)
    coeffs = [Mat.eye(state.m, state.field)] + [state.M(k + 1, k + 1 + j) for j in range(1, order + 1)]
    logger.debug(f"φ from Toeplitz row {k + 1}: {order} coefficients")
    return Transform(MatSeries.jet(coeffs, order, state.m, state.m, state.field), order, Provenance.TOEPLITZ_ROW)


# --- DEFINING EQUATION ---

def _h_coefficients(state: RecursionState) -> List[Mat]:
    """H_1 = e_{1,k+2}, H_{r+1} = Σ_{c=r..k} M_{r,c}·e_{c+1,k+2}."""
    k = state.k
    e = state.step_record(k + 1).e_next
    H = [e[0]]
    for r in range(1, k + 1):
        acc = Mat.zeros(state.m, state.m_bar, state.field)
        for c in range(r, k + 1):
            acc = acc + state.M(r, c) @ e[c]
        H.append(acc)
    return H


def _lower_triangular(H: List[Mat], m: int, m_bar: int, field) -> Mat:
    n = len(H)
    zero = Mat.zeros(m, m_bar, field)
    return Mat.block([[H[r - c] if c <= r else zero for c in range(n)] for r in range(n)])


def _tail_forcing(state: RecursionState, head: List[Mat]) -> MatSeries:
    """
    Σ_i εⁱ·Σ_{j=0..min(k,k+i-1)} L_{2k+1+i-j}·φ_j, the part of S̄_{2k+2+i}
    carried by already known Toeplitz coefficients.
    """
    L, k = state.L, state.k
    if L.is_exact:
        top = max(len(L.coeffs) - 1 - (k + 1), -1)
    else:
        top = L.order - 2 * k - 1
    coeffs = []
    for i in range(top + 1):
        acc = Mat.zeros(state.m_bar, state.m, state.field)
        for j in range(min(k, k + i - 1) + 1):
            idx = 2 * k + 1 + i - j
            if L.covers(idx):
                acc = acc + L.coeff(idx) @ head[j]
        coeffs.append(acc)
    if L.is_exact:
        return MatSeries.polynomial(coeffs, state.m_bar, state.m, state.field)
    return MatSeries.jet(coeffs, top, state.m_bar, state.m, state.field)


def phi_from_defining_eq(state: RecursionState, order: int) -> Tuple[Transform, DefiningEqData]:
    """
    Build φ through `order` from the defining equation.

    φ = I + εφ_1 + … + ε^kφ_k + ε^{k+1}·d_{k+1}(ε), with φ_1..φ_k taken from
    the Toeplitz row and d̄ = [I - εQ]⁻¹·q̄ solved by the Neumann recursion.

    Raises:
        InsufficientOrderError: L does not reach index 2k+1
    """
    k, L, field = state.k, state.L, state.field
    m, m_bar = state.m, state.m_bar
    if not L.covers(2 * k + 1):
        raise InsufficientOrderError(
            f"The defining equation needs L through {2 * k + 1}, input is valid through {L.order}."
        )
    state = extend(state, 2 * k + 1)
    valid = phi_valid_order(L, k, order)

    H = _h_coefficients(state)
    Hmat = _lower_triangular(H, m, m_bar, field)
    head = [Mat.eye(m, field)] + [state.M(k + 1, k + 1 + j) for j in range(1, k + 1)]

    def h(r: int) -> MatSeries:
        return MatSeries.polynomial([H[r - c] for c in range(1, r + 1)], m, m_bar, field)

    def V(c: int) -> MatSeries:
        sbars = [state.step_record(2 * k + 3 - c + j).Sbar for j in range(c - 1)]
        return MatSeries.polynomial(sbars, m_bar, m, field)

    pbar = []
    for r in range(1, k + 2):
        acc = MatSeries.zero(m, m, field)
        for c in range(1, r + 1):
            acc = acc + series_mul(MatSeries.constant(H[r - c]), V(c))
        pbar.append(acc)

    operators = [MatSeries.constant(L.coeff(c)) for c in range(1, k + 1)] + [section(L, k + 1)]
    constant_part = Mat.zeros(m_bar, m, field)
    for c in range(1, k + 2):
        constant_part = constant_part + L.coeff(c) @ state.M(c, 2 * k + 1)
    forcing = MatSeries.constant(constant_part) + _tail_forcing(state, head)

    qbar = series_block([[pbar[r - 1] + series_mul(h(r), forcing)] for r in range(1, k + 2)])
    Q = series_block([[series_mul(h(r), operators[c - 1]) for c in range(1, k + 2)] for r in range(1, k + 2)])

    d_order = max(valid - k - 1, 0)
    size = (k + 1) * m
    near_identity = MatSeries.identity(size, field) - Q.shift(1)
    inverse = series_inverse_near_identity(near_identity, d_order)
    dbar = series_mul(inverse, qbar, order=d_order)

    coeffs = head[: valid + 1]
    for j in range(k + 1, valid + 1):
        coeffs.append(dbar.coeff(j - k - 1).row_range(k * m, size))
    phi = Transform(MatSeries.jet(coeffs, valid, m, m, field), valid, Provenance.DEFINING_EQUATION)
    data = DefiningEqData(
        k=k,
        Hbar=tuple(H),
        Hmat=Hmat,
        pbar=tuple(pbar),
        qbar=qbar,
        Q=Q,
        dbar=dbar,
        toeplitz_head=tuple(head),
        valid_order=dbar.order,
    )
    logger.debug(f"φ from the defining equation: k={k}, valid through {valid}, d̄ through {d_order}")
    return phi, data


def evaluate_phi(data: DefiningEqData, x: Any) -> Mat:
    """
    Exact φ(x) for polynomial input: solves [I - x·Q(x)]·d̄ = q̄(x).

    Raises:
        SamplePointError: I - x·Q(x) is singular at x
        InsufficientOrderError: Q or q̄ is a truncated jet
    """
    if not (data.Q.is_exact and data.qbar.is_exact):
        raise InsufficientOrderError("Closed-form φ needs polynomial defining-equation data.")
    field = data.Q.field
    x = field.convert(x)
    k, m = data.k, data.toeplitz_head[0].rows
    size = data.Q.rows
    system = Mat.eye(size, field) - data.Q.evaluate(x).scale(x)
    try:
        d = system.inv() @ data.qbar.evaluate(x)
    except NotInvertibleError as e:
        raise SamplePointError(f"I - εQ(ε) is singular at ε = {field.format(x)}.") from e
    total = Mat.zeros(m, m, field)
    power = field.one
    for coeff in data.toeplitz_head:
        total = total + coeff.scale(power)
        power = power * x
    return total + d.row_range(k * m, size).scale(power)
