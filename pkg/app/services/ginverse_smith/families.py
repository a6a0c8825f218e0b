"""
Projection, kernel and range families on a punctured neighbourhood of ε = 0.
"""

import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from app.errors import SamplePointError
from app.services.core_algebra import Mat, MatSeries, kernel, range_of, series_inverse_near_identity, series_mul
from app.services.jordan_recursion import IdentityCheck, RecursionState
from app.services.transform_builder import DiagonalForm, DiagonalizationResult, Transform
from .inverse import point_values

logger = logging.getLogger(__name__)


def _projector_sums(diagonal: DiagonalForm) -> Tuple[Mat, Mat]:
    kernel_side = Mat.zeros(diagonal.cols, diagonal.cols, diagonal.P_ker.field)
    range_side = Mat.zeros(diagonal.rows, diagonal.rows, diagonal.P_ker.field)
    for part in diagonal.parts:
        kernel_side = kernel_side + part.P
        range_side = range_side + part.range_projector
    return kernel_side, range_side


def projection_families(phi: Transform, psi: Transform, diagonal: DiagonalForm, order: Optional[int] = None) -> Tuple[MatSeries, MatSeries]:
    """
    L⁻¹L = φ·(P_1+…+P_(k+1))·φ⁻¹ on the domain and LL⁻¹ = ψ·(𝒫_1+…+𝒫_(k+1))·ψ⁻¹ on the target.

    Args:
        phi: right transformation
        psi: left transformation
        diagonal: the diagonal form supplying the projectors
        order: optional cap below the transformations' valid orders

    Returns:
        (domain family, target family), each valid through its transformation's order
    """
    kernel_side, range_side = _projector_sums(diagonal)

    def conjugate(t: Transform, middle: Mat) -> MatSeries:
        through = t.valid_order if order is None else min(order, t.valid_order)
        inverse = series_inverse_near_identity(t.series, through)
        return series_mul(series_mul(t.series, MatSeries.constant(middle), order=through), inverse, order=through)

    return conjugate(phi, kernel_side), conjugate(psi, range_side)


def check_projection_families(families: Tuple[MatSeries, MatSeries], diagonal: DiagonalForm) -> List[IdentityCheck]:
    """Coefficientwise idempotence of both families, and their values at ε = 0."""
    checks = []
    sums = _projector_sums(diagonal)
    for name, family, expected in zip(("domain-projection", "target-projection"), families, sums):
        through = family.order
        first = series_mul(family, family, order=through).first_difference(family, through)
        at_zero = family.coeff(0).equals(expected)
        if first is None and not at_zero:
            first = 0
        if first is not None:
            logger.warning(f"Projection family {name} fails at coefficient {first}")
        checks.append(IdentityCheck(name, first is None, first, f"Π² = Π through order {through}, Π(0) = Σ projectors"))
    return checks


# --- KERNEL AND RANGE ---

@dataclass(frozen=True, eq=False)
class KernelRangeFamilies:
    """Basis families N(ε) = φ(ε)·N_(k+1) and R(ε) = ψ(ε)·R̄_k."""

    kernel: MatSeries
    range: MatSeries

    def to_dict(self):
        return {"kernel": self.kernel.to_strings(), "range": self.range.to_strings()}


def kernel_range_families(phi: Transform, psi: Transform, state: RecursionState) -> KernelRangeFamilies:
    k = state.k
    kernel_basis = state.N(k + 1).basis
    range_basis = state.leading_space(k).basis
    return KernelRangeFamilies(
        kernel=series_mul(phi.series, MatSeries.constant(kernel_basis)),
        range=series_mul(psi.series, MatSeries.constant(range_basis)),
    )


def check_kernel_range_families(
    result: DiagonalizationResult,
    families: KernelRangeFamilies,
    sample_points: Sequence,
) -> Tuple[List[IdentityCheck], List[str]]:
    """
    Kernel and range families against L.

    Polynomial input: at every sample point ε*, φ(ε*)·N_(k+1) equals ker L(ε*)
    and ψ(ε*)·R̄_k equals the column space of L(ε*). Jets: L(ε)·N(ε) vanishes
    order by order.

    Returns:
        (checks, notes about skipped sample points)
    """
    state = result.state
    L = state.L
    notes = []
    if not L.is_exact:
        through = families.kernel.order
        first = series_mul(L, families.kernel, order=through).first_nonzero(through)
        return [IdentityCheck("kernel-family", first is None, first, f"L·N(ε) = 0 through order {through}")], notes

    k = state.k
    kernel_basis = state.N(k + 1).basis
    range_basis = state.leading_space(k).basis
    kernel_fail, range_fail = None, None
    for index, x in enumerate(sample_points):
        try:
            values = point_values(result, x)
        except SamplePointError as e:
            notes.append(f"Sample point {x} skipped: {e}")
            logger.warning(f"Sample point {x} skipped: {e}")
            continue
        N_at = values.phi @ kernel_basis
        R_at = values.psi @ range_basis
        if kernel_fail is None and not (range_of(N_at).equals(kernel(values.L)) and N_at.rank() == kernel_basis.cols):
            kernel_fail = index
        if range_fail is None and not range_of(R_at).equals(range_of(values.L)):
            range_fail = index
    return [
        IdentityCheck("kernel-family", kernel_fail is None, kernel_fail, "φ(ε*)·N_(k+1) = ker L(ε*) at every sample point"),
        IdentityCheck("range-family", range_fail is None, range_fail, "ψ(ε*)·R̄_k = range L(ε*) at every sample point"),
    ], notes
