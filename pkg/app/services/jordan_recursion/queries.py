"""
Read-only questions answered from a recursion: Jordan chains, ranks of root
elements, leading-coefficient orders and the block Toeplitz systems they
are checked against.
"""

import logging
import math
from typing import List, Optional, Tuple, Union

from app.errors import InsufficientOrderError, ShapeMismatchError
from app.services.core_algebra import Mat, MatSeries, Subspace, kernel
from .records import RecursionState

logger = logging.getLogger(__name__)

Chain = Tuple[Mat, ...]


def toeplitz_system(L: MatSeries, length: int) -> Mat:
    """
    Block upper-triangular Toeplitz matrix of the first `length` orders of L·b = 0.

    Unknowns are stacked as (b_{length-1}; …; b_0); block (r, c) is L_{c-r}
    for c ≥ r, so the last block row reads L_0·b_0.
    """
    if length < 0:
        raise ValueError(f"Chain length must be non-negative, got {length}.")
    if length == 0:
        return Mat.zeros(0, 0, L.field)
    zero = Mat.zeros(L.rows, L.cols, L.field)
    grid = [[L.coeff(c - r) if c >= r else zero for c in range(length)] for r in range(length)]
    return Mat.block(grid)


def _reverse_blocks(m: Mat, size: int) -> Mat:
    blocks = m.split_rows(size) if m.rows else []
    return Mat.vstack(list(reversed(blocks)), cols=m.cols, field=m.field)


def solution_jet_space(L: MatSeries, order: int) -> Subspace:
    """
    All jets (b_0; …; b_{order-1}) with L·b = O(ε^order), in ε-order layout.
    """
    if L.cols == 0 or order == 0:
        return Subspace.zero(L.cols * order, L.field)
    space = kernel(toeplitz_system(L, order))
    return Subspace(_reverse_blocks(space.basis, L.cols))


def jordan_chain_basis(state: RecursionState, length: int) -> List[Chain]:
    """
    Basis of the kernel of the block Toeplitz system of the given length.

    Block column j contributes, for each basis vector n of N_j, the tuple with
    b_{length-r} = M_{r,j}·n for r = 1..j and zero lower entries.

    Returns:
        list of tuples (b_0, …, b_{length-1}) of column vectors

    Raises:
        InsufficientOrderError: recursion holds fewer than `length` steps
    """
    if state.depth < length:
        raise InsufficientOrderError(f"Chains of length {length} need {length} recursion steps, have {state.depth}.")
    zero = Mat.zeros(state.m, 1, state.field)
    chains: List[Chain] = []
    for j in range(1, length + 1):
        basis = state.N(j).basis
        for col in range(basis.cols):
            n = basis.column(col)
            chain = [zero] * length
            for r in range(1, j + 1):
                chain[length - r] = state.M(r, j) @ n
            chains.append(tuple(chain))
    return chains


def chains_as_matrix(chains: List[Chain], m: int, length: int, field) -> Mat:
    """Stack chains as columns in the (b_{length-1}; …; b_0) layout."""
    columns = [Mat.vstack(list(reversed(chain)), cols=1, field=field) for chain in chains]
    return Mat.hstack(columns, rows=m * length, field=field)


def _require_stabilized(state: RecursionState) -> int:
    if state.stabilization is None:
        raise InsufficientOrderError("This query needs a stabilized recursion.")
    return state.stabilization.k


def rank_of(state: RecursionState, b: Mat) -> Union[int, float]:
    """
    rk(b): largest i with b ∈ N_i; math.inf for b ∈ N_(k+1) (including b = 0).
    """
    k = _require_stabilized(state)
    if b.rows != state.m:
        raise ShapeMismatchError(f"Vector of length {b.rows} does not live in the domain of dimension {state.m}.")
    if b.is_zero() or state.N(k + 1).contains(b):
        return math.inf
    rank = 0
    for i in range(1, k + 1):
        if not state.N(i).contains(b):
            break
        rank = i
    return rank


def lc_of(state: RecursionState, bbar: Mat) -> Optional[int]:
    """
    Smallest j with bbar ∈ R_1 ⊕ … ⊕ R_(j+1); None when bbar lies outside R̄_k.
    """
    k = _require_stabilized(state)
    if bbar.rows != state.m_bar:
        raise ShapeMismatchError(f"Vector of length {bbar.rows} does not live in the target of dimension {state.m_bar}.")
    if bbar.is_zero():
        return 0
    for j in range(k + 1):
        if state.leading_space(j).contains(bbar):
            return j
    return None
