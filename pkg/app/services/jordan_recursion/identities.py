"""
Structural identities of the recursion, each returned as a named check.

These run on every `--check` invocation and back the recursion tests. A
failing check reports the first step (or column) where equality breaks.
"""

import logging
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, Tuple

from app.services.core_algebra import Mat, MatSeries, Subspace, kernel, recenter
from .queries import chains_as_matrix, jordan_chain_basis, toeplitz_system
from .records import RecursionState, StabilizationReport
from .recursion import RecursionLimits, run_until_stabilized

logger = logging.getLogger(__name__)


@dataclass
class IdentityCheck:
    name: str
    passed: bool
    first_failure: Optional[int] = None
    detail: str = ""

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "passed": self.passed,
            "first_failure": self.first_failure,
            "detail": self.detail,
        }


def _check(name: str, failures: Sequence[int], detail: str = "") -> IdentityCheck:
    first = min(failures) if failures else None
    if first is not None:
        logger.warning(f"Identity check {name} failed first at index {first}")
    return IdentityCheck(name, first is None, first, detail)


# --- E COLUMNS ---

def recursive_e_column(state: RecursionState, j: int) -> Tuple[Mat, ...]:
    """
    E_{1,j}..E_{j,j} by back substitution: E_{j,j} = I and
    E_{i,j} = -S_i⁻¹𝒫_i·Σ_{v=i+1..j} S̄_v·E_{v,j}.
    """
    column: List[Optional[Mat]] = [None] * j
    column[j - 1] = Mat.eye(state.m, state.field)
    for i in range(j - 1, 0, -1):
        acc = Mat.zeros(state.m_bar, state.m, state.field)
        for v in range(i + 1, j + 1):
            acc = acc + state.step_record(v).Sbar @ column[v - 1]
        column[i - 1] = -(state.step_record(i).Sinv @ acc)
    return tuple(column)


def check_recursive_e(state: RecursionState) -> IdentityCheck:
    failures = []
    for j in range(1, state.depth + 1):
        recursive = recursive_e_column(state, j)
        if any(not a.equals(b) for a, b in zip(recursive, state.step_record(j).E_col)):
            failures.append(j)
    return _check("recursive-e-column", failures, "explicit product form equals back substitution")


# --- LEMMA IDENTITIES ---

def check_transformed_operators(state: RecursionState) -> IdentityCheck:
    """Σ_r L_{r-1}·M_{r,j} = Σ_r S̄_r·E_{r,j} = S_j for every computed column j."""
    failures = []
    zero = Mat.zeros(state.m_bar, state.m, state.field)
    for j in range(1, state.depth + 1):
        via_m, via_e = zero, zero
        for r in range(1, j + 1):
            via_m = via_m + state.L.coeff(r - 1) @ state.M(r, j)
            via_e = via_e + state.step_record(r).Sbar @ state.E(r, j)
        S = state.step_record(j).S
        if not (via_m.equals(S) and via_e.equals(S)):
            failures.append(j)
    return _check("transformed-operators", failures, "(L_0..L_{j-1})·M^j = (S̄_1..S̄_j)·E^j = S_j")


def check_projector_sums(state: RecursionState) -> IdentityCheck:
    """Σ_{r≤i} S̄_r·e_{r,i+1} = -(𝒫_1 + … + 𝒫_i) at every step."""
    failures = []
    for i in range(1, state.depth + 1):
        record = state.step_record(i)
        total = Mat.zeros(state.m_bar, state.m_bar, state.field)
        for r in range(1, i + 1):
            total = total + state.step_record(r).Sbar @ record.e_next[r - 1]
        expected = -record.range_split.projector_sum(range(i))
        if not total.equals(expected):
            failures.append(i)
    return _check("projector-sums", failures, "(S̄_1..S̄_i)·(e_{1,i+1};..;e_{i,i+1}) = -Σ𝒫")


def _block_matrix(entry, lo: int, hi: int, m: int, field) -> Mat:
    """Upper-triangular block matrix with blocks entry(a, b) for lo ≤ a ≤ b ≤ hi."""
    zero = Mat.zeros(m, m, field)
    return Mat.block([[entry(a, b) if a <= b else zero for b in range(lo, hi + 1)] for a in range(lo, hi + 1)])


def check_subblock_factorization(state: RecursionState) -> IdentityCheck:
    """
    Trailing l x l block of M^K equals M^l·E_l^(l+1)·…·E_l^K, where E_l^c is the
    trailing l x l block of the triangular E^c and K is the recursion depth.
    """
    K = state.depth
    failures = []
    if K == 0 or state.m == 0:
        return _check("subblock-factorization", failures)
    for l in range(1, K + 1):
        trailing = _block_matrix(state.M, K - l + 1, K, state.m, state.field)
        product = _block_matrix(state.M, 1, l, state.m, state.field)
        for c in range(l + 1, K + 1):
            product = product @ _block_matrix(state.E, c - l + 1, c, state.m, state.field)
        if not trailing.equals(product):
            failures.append(l)
    return _check("subblock-factorization", failures, f"trailing blocks of M^{K}")


# --- POST-STABILIZATION PATTERNS ---

def check_toeplitz_onset(state: RecursionState) -> IdentityCheck:
    """M_{i,i+j} = M_{k+1,k+1+j} for every row i ≥ k+1 and every computed column."""
    k = state.k
    failures = []
    for c in range(k + 2, state.depth + 1):
        for i in range(k + 2, c + 1):
            j = c - i
            if not state.M(i, c).equals(state.M(k + 1, k + 1 + j)):
                failures.append(c)
                break
    return _check("toeplitz-onset", failures, f"rows below k+1={k + 1}")


def check_green_zero(state: RecursionState) -> IdentityCheck:
    """E_{i,c} = 0 for k+2 ≤ i < c."""
    k = state.k
    failures = [
        c
        for c in range(k + 3, state.depth + 1)
        if any(not state.E(i, c).is_zero() for i in range(k + 2, c))
    ]
    return _check("green-zero", failures, f"E entries strictly above the diagonal from row {k + 2}")


def check_jordan_chains(state: RecursionState, lengths: Optional[Sequence[int]] = None) -> IdentityCheck:
    """
    Chains from the recursion span exactly the kernel of the directly
    assembled block Toeplitz system, for each length.
    """
    lengths = lengths or range(1, state.depth + 1)
    failures = []
    for length in lengths:
        chains = jordan_chain_basis(state, length)
        spanned = chains_as_matrix(chains, state.m, length, state.field)
        direct = kernel(toeplitz_system(state.L, length))
        built = Subspace.span(spanned)
        if not (built.dim == len(chains) == direct.dim and built.equals(direct)):
            failures.append(length)
    return _check("jordan-chains", failures, "chain basis equals ker of the block Toeplitz system")


def run_identity_suite(state: RecursionState) -> List[IdentityCheck]:
    """Every recursion identity that applies to the state."""
    checks = [
        check_recursive_e(state),
        check_transformed_operators(state),
        check_projector_sums(state),
        check_subblock_factorization(state),
    ]
    if state.stabilization is not None:
        checks += [check_toeplitz_onset(state), check_green_zero(state)]
    if state.L.covers(state.depth - 1):
        checks.append(check_jordan_chains(state))
    return checks


# --- CENTERS ---

@dataclass
class CenterReport:
    center: str
    stabilization: Optional[StabilizationReport] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "center": self.center,
            "stabilization": self.stabilization.to_dict() if self.stabilization else None,
        }


def scan_centers(L: MatSeries, centers: Sequence[Any], k_max: int = RecursionLimits.DEFAULT_K_MAX) -> List[CenterReport]:
    """
    Stabilization index of L recentered at each center.

    Only ε = 0 and the common roots of the maximal minors can report k ≥ 1.
    """
    reports = []
    for center in centers:
        shifted = recenter(L, center)
        label = L.field.format(L.field.convert(center))
        state = run_until_stabilized(shifted, k_max)
        logger.info(f"Center {label}: k={state.k}")
        reports.append(CenterReport(center=label, stabilization=state.stabilization))
    return reports
