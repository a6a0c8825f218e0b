"""
Records produced by the kernel/range recursion.

A RecursionState is an immutable snapshot: advancing it returns a new state
that shares every earlier StepRecord.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, List, Optional, Tuple

from app.errors import InsufficientOrderError
from app.services.core_algebra import Decomposition, Mat, MatSeries, ScalarField, Subspace


class CertificationMethod(str, Enum):
    EXHAUSTED_DEGREE_BOUND = "exhausted-degree-bound"
    ORACLE_SMITH = "oracle-smith"
    THROUGH_ORDER_ONLY = "through-order-only"


@dataclass(frozen=True, eq=False)
class StepRecord:
    """
    Everything computed at recursion step `index` (i ≥ 1).

    Sinv is the ambient form S_i⁻¹𝒫_i (m x m̄): inverse of S_i: N_i^c → R_i on
    R_i and zero on the other parts of the range decomposition. Sinv_coords is
    the same map on R_i-coordinates (m x dim R_i).
    e_next holds e_{1,i+1}..e_{i,i+1}, the factors of the next E column.
    """

    index: int
    Sbar: Mat
    S: Mat
    N: Subspace
    N_c: Subspace
    R: Subspace
    R_c: Subspace
    E_col: Tuple[Mat, ...]
    M_col: Tuple[Mat, ...]
    Sinv: Mat
    Sinv_coords: Mat
    e_next: Tuple[Mat, ...]
    kernel_split: Decomposition
    range_split: Decomposition

    @property
    def P(self) -> Mat:
        """Projector onto N_i^c along the other kernel-side parts."""
        return self.kernel_split.projectors[self.index - 1]

    @property
    def range_projector(self) -> Mat:
        """𝒫_i: projector onto R_i."""
        return self.range_split.projectors[self.index - 1]

    @property
    def cokernel_projector(self) -> Mat:
        """Projector onto R_i^c; the next step's S is this times S̄."""
        return self.range_split.projectors[-1]

    @property
    def kernel_projector(self) -> Mat:
        """Projector onto N_i."""
        return self.kernel_split.projectors[-1]


@dataclass(frozen=True)
class StabilizationReport:
    k: int
    exponent_multiplicities: Tuple[int, ...]
    dim_kernel_limit: int
    dim_range_limit: int
    certified: bool
    certification_method: CertificationMethod
    degenerate: bool = False
    steps_examined: int = 0
    horizon: Optional[int] = None
    generic_rank: Optional[int] = None

    @property
    def exponents(self) -> List[int]:
        """Partial multiplicities at ε = 0 as a sorted multiset."""
        return [j for j, mult in enumerate(self.exponent_multiplicities) for _ in range(mult)]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "k": self.k,
            "exponents": self.exponents,
            "exponent_multiplicities": list(self.exponent_multiplicities),
            "dim_kernel_limit": self.dim_kernel_limit,
            "dim_range_limit": self.dim_range_limit,
            "certified": self.certified,
            "certification_method": self.certification_method.value,
            "degenerate": self.degenerate,
            "steps_examined": self.steps_examined,
            "horizon": self.horizon,
            "generic_rank": self.generic_rank,
        }


@dataclass(frozen=True, eq=False)
class RecursionState:
    L: MatSeries
    steps: Tuple[StepRecord, ...] = ()
    stabilization: Optional[StabilizationReport] = None

    @property
    def m(self) -> int:
        """Column dimension (domain B)."""
        return self.L.cols

    @property
    def m_bar(self) -> int:
        """Row dimension (target B̄)."""
        return self.L.rows

    @property
    def field(self) -> ScalarField:
        return self.L.field

    @property
    def depth(self) -> int:
        return len(self.steps)

    @property
    def k(self) -> int:
        if self.stabilization is None:
            raise InsufficientOrderError("Stabilization has not been declared for this recursion.")
        return self.stabilization.k

    def step_record(self, i: int) -> StepRecord:
        """Record of step i (1-based)."""
        if not 1 <= i <= len(self.steps):
            raise InsufficientOrderError(f"Step {i} requested, recursion holds {len(self.steps)} steps.")
        return self.steps[i - 1]

    def M(self, r: int, c: int) -> Mat:
        """M_{r,c}; zero below the diagonal."""
        if r > c:
            return Mat.zeros(self.m, self.m, self.field)
        return self.step_record(c).M_col[r - 1]

    def E(self, r: int, c: int) -> Mat:
        """E_{r,c}; zero below the diagonal."""
        if r > c:
            return Mat.zeros(self.m, self.m, self.field)
        return self.step_record(c).E_col[r - 1]

    def N(self, i: int) -> Subspace:
        """N_i, with N_0 the whole domain."""
        if i == 0:
            return Subspace.full(self.m, self.field)
        return self.step_record(i).N

    def R_c(self, i: int) -> Subspace:
        """R_i^c, with R_0^c the whole target."""
        if i == 0:
            return Subspace.full(self.m_bar, self.field)
        return self.step_record(i).R_c

    def leading_space(self, j: int) -> Subspace:
        """R̄_j = R_1 ⊕ … ⊕ R_{j+1}."""
        total = Subspace.zero(self.m_bar, self.field)
        for i in range(1, j + 2):
            total = total + self.step_record(i).R
        return total

    def with_steps(self, steps: Tuple[StepRecord, ...]) -> "RecursionState":
        return RecursionState(self.L, steps, self.stabilization)

    def with_stabilization(self, report: StabilizationReport) -> "RecursionState":
        return RecursionState(self.L, self.steps, report)
