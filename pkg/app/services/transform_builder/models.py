from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Tuple

from app.services.core_algebra import Mat, MatSeries


class Provenance(str, Enum):
    TOEPLITZ_ROW = "toeplitz-row"
    DEFINING_EQUATION = "defining-equation"
    LEFT_FACTOR = "left-factor"


@dataclass(frozen=True, eq=False)
class PreTransform:
    """p_k(ε) = I + ε·M_{k,k+1} + … + ε^k·M_{1,k+1}."""

    k: int
    poly: MatSeries


@dataclass(frozen=True, eq=False)
class Transform:
    """Near-identity transformation (φ or ψ) with its trustworthy order."""

    series: MatSeries
    valid_order: int
    provenance: Provenance

    def coeff(self, i: int) -> Mat:
        return self.series.coeff(i)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "provenance": self.provenance.value,
            "valid_order": self.valid_order,
            "coefficients": self.series.to_strings(),
        }


@dataclass(frozen=True, eq=False)
class DiagonalPart:
    """One summand ε^exponent·S·P of Δ(ε)."""

    exponent: int
    S: Mat
    P: Mat
    range_projector: Mat
    Sinv: Mat

    @property
    def operator(self) -> Mat:
        return self.S @ self.P


@dataclass(frozen=True, eq=False)
class DiagonalForm:
    """
    Δ(ε) = Σ_{i=1..k+1} ε^{i-1}·S_i·P_i.

    P_ker projects onto N_(k+1) and Pi_coker onto R_(k+1)^c; together with the
    parts they complete both direct sums.
    """

    k: int
    parts: Tuple[DiagonalPart, ...]
    P_ker: Mat
    Pi_coker: Mat
    rows: int
    cols: int

    @property
    def exponents(self) -> List[int]:
        return [p.exponent for p in self.parts]

    def series(self) -> MatSeries:
        coeffs = [p.operator for p in self.parts]
        if not coeffs:
            return MatSeries.zero(self.rows, self.cols, self.P_ker.field)
        return MatSeries.polynomial(coeffs, self.rows, self.cols)

    def evaluate(self, x: Any) -> Mat:
        return self.series().evaluate(x)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "k": self.k,
            "parts": [
                {
                    "exponent": p.exponent,
                    "S": p.S.to_strings(),
                    "P": p.P.to_strings(),
                    "range_projector": p.range_projector.to_strings(),
                }
                for p in self.parts
            ],
            "kernel_projector": self.P_ker.to_strings(),
            "cokernel_projector": self.Pi_coker.to_strings(),
        }


@dataclass(frozen=True, eq=False)
class DefiningEqData:
    """
    Ingredients of [I - ε·Q(ε)]·d̄(ε) = q̄(ε).

    Vectors of k+1 matrix series are stored stacked: qbar and dbar are
    (k+1)m x m, Q is (k+1)m x (k+1)m, Hmat is (k+1)m x (k+1)m̄.
    """

    k: int
    Hbar: Tuple[Mat, ...]
    Hmat: Mat
    pbar: Tuple[MatSeries, ...]
    qbar: MatSeries
    Q: MatSeries
    dbar: MatSeries
    toeplitz_head: Tuple[Mat, ...]
    valid_order: Optional[int] = None

    def residual(self) -> MatSeries:
        """[I - εQ]·d̄ - q̄."""
        lhs = self.dbar - (self.Q @ self.dbar).shift(1)
        return lhs - self.qbar


@dataclass
class DiagonalizationResult:
    """Everything diagonalize() computed, plus the checks it ran."""

    state: Any
    phi: Transform
    psi: Transform
    diagonal: DiagonalForm
    S: MatSeries
    order: int
    phi_defining: Optional[Transform] = None
    defining_data: Optional[DefiningEqData] = None
    checks: List[Any] = field(default_factory=list)
    notes: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "order": self.order,
            "phi": self.phi.to_dict(),
            "psi": self.psi.to_dict(),
            "diagonal": self.diagonal.to_dict(),
            "checks": [c.to_dict() for c in self.checks],
            "notes": list(self.notes),
        }
