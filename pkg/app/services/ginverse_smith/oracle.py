"""
Independent Smith normal form of a polynomial matrix over K[ε].

Elementary row and column operations with Euclidean division. The pivot is
always the lowest-degree nonzero entry of the remaining block, ties broken
row-major, so the sequence of operations is reproducible.
"""

import logging
from dataclasses import replace
from typing import List, Optional, Tuple

from app.errors import InsufficientOrderError
from app.services.core_algebra import MatSeries
from app.services.jordan_recursion import (
    CertificationMethod,
    IdentityCheck,
    RecursionState,
    polynomial_entries,
)
from .models import OracleSmith, SmithLocalReport

logger = logging.getLogger(__name__)


def _lowest_pivot(a, t: int) -> Optional[Tuple[int, int]]:
    best = None
    for i in range(t, len(a)):
        for j in range(t, len(a[0])):
            if a[i][j]:
                key = (a[i][j].degree(), i, j)
                if best is None or key < best:
                    best = key
    return None if best is None else (best[1], best[2])


def _move_to(a, t: int, position: Tuple[int, int]) -> None:
    i, j = position
    a[t], a[i] = a[i], a[t]
    for row in a:
        row[t], row[j] = row[j], row[t]


def _add_row(a, target: int, source: int, factor) -> None:
    a[target] = [x + factor * y for x, y in zip(a[target], a[source])]


def _add_column(a, target: int, source: int, factor) -> None:
    for row in a:
        row[target] = row[target] + factor * row[source]


def _clear_cross(a, t: int, ring) -> bool:
    """Divide row t and column t by the pivot; True when some remainder survives."""
    pivot = a[t][t]
    dirty = False
    for i in range(t + 1, len(a)):
        if a[i][t]:
            q, _ = ring.div(a[i][t], pivot)
            _add_row(a, i, t, -q)
            dirty = dirty or bool(a[i][t])
    for j in range(t + 1, len(a[0])):
        if a[t][j]:
            q, _ = ring.div(a[t][j], pivot)
            _add_column(a, j, t, -q)
            dirty = dirty or bool(a[t][j])
    return dirty


def _first_non_multiple(a, t: int, ring) -> Optional[int]:
    pivot = a[t][t]
    for i in range(t + 1, len(a)):
        for j in range(t + 1, len(a[0])):
            if a[i][j] and ring.div(a[i][j], pivot)[1]:
                return i
    return None


def smith_diagonal(rows: List[list], ring) -> Tuple[List, int]:
    """
    Nonzero diagonal of the Smith form of a matrix of ring elements.

    Returns:
        (monic invariant factors d_1 | d_2 | …, number of pivot rounds)
    """
    a = [list(r) for r in rows]
    if not a or not a[0]:
        return [], 0
    factors = []
    rounds = 0
    for t in range(min(len(a), len(a[0]))):
        position = _lowest_pivot(a, t)
        if position is None:
            break
        _move_to(a, t, position)
        while True:
            rounds += 1
            if _clear_cross(a, t, ring):
                _move_to(a, t, _lowest_pivot(a, t))
                continue
            offender = _first_non_multiple(a, t, ring)
            if offender is None:
                break
            _add_row(a, t, offender, ring.one)
        factors.append(a[t][t].monic())
    return factors, rounds


def _order_at_zero(p) -> int:
    return min(monom[0] for monom in p.monoms())


def oracle_smith_polynomial(L: MatSeries) -> OracleSmith:
    """
    Smith normal form of an exact polynomial family.

    Raises:
        InsufficientOrderError: L is a truncated jet or uses the float backend
    """
    if not (L.is_exact and L.field.is_exact):
        raise InsufficientOrderError("The Smith oracle needs an exact polynomial family.")
    if L.rows == 0 or L.cols == 0:
        return OracleSmith((), (), 0)
    ring, rows = polynomial_entries(L)
    factors, rounds = smith_diagonal(rows, ring)
    oracle = OracleSmith(
        invariant_factors=tuple(ring.to_sympy(f) for f in factors),
        local_exponents=tuple(_order_at_zero(f) for f in factors),
        rank=len(factors),
        pivot_steps=rounds,
    )
    logger.info(f"Smith oracle: rank {oracle.rank}, local exponents {list(oracle.local_exponents)} after {rounds} rounds")
    return oracle


def compare_with_oracle(report: SmithLocalReport, oracle: OracleSmith, m: int) -> IdentityCheck:
    """The recursion's exponent multiset and kernel dimension against the oracle."""
    exponents_agree = sorted(report.exponents) == oracle.exponents
    kernel_agrees = report.kernel_limit_dim == m - oracle.rank
    passed = exponents_agree and kernel_agrees
    if not passed:
        logger.warning(f"Oracle disagreement: recursion {report.exponents} vs oracle {oracle.exponents}")
    detail = f"recursion exponents {report.exponents}, oracle {oracle.exponents}, dim N_(k+1) = m - r"
    return IdentityCheck("oracle-smith", passed, None, detail)


def certify_with_oracle(state: RecursionState, oracle: OracleSmith) -> RecursionState:
    """Stamp the stabilization as oracle-certified when the exponent multisets agree."""
    report = state.stabilization
    if sorted(report.exponents) != oracle.exponents or report.dim_kernel_limit != state.m - oracle.rank:
        return state
    return state.with_stabilization(
        replace(report, certified=True, certification_method=CertificationMethod.ORACLE_SMITH)
    )
