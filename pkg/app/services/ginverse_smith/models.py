from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

from app.services.core_algebra import LaurentSeries, Mat, MatSeries


@dataclass(frozen=True, eq=False)
class FullSmithData:
    """
    Factorization data available when L(0)'s kernel and cokernel are used up.

    Δ(ε) = S_p·P(ε) with S_p = Σ S_i·P_i invertible and P(ε) = Σ ε^{i-1}·P_i;
    Q(ε) = ψ(ε)·S_p, so that L·φ = Q·P.
    """

    S_p: Mat
    P: MatSeries
    P_inv: LaurentSeries
    Q: MatSeries

    def to_dict(self) -> Dict[str, Any]:
        return {
            "S_p": self.S_p.to_strings(),
            "P": self.P.to_strings(),
            "P_inverse": {"pole_order": self.P_inv.pole_order, "coefficients": self.P_inv.to_strings()},
            "Q": self.Q.to_strings(),
        }


@dataclass(frozen=True, eq=False)
class SmithLocalReport:
    k: int
    exponent_multiplicities: Tuple[int, ...]
    rank_limit: int
    kernel_limit_dim: int
    full_smith: bool
    degenerate: bool = False
    full_data: Optional[FullSmithData] = None

    @property
    def exponents(self) -> List[int]:
        return [j for j, mult in enumerate(self.exponent_multiplicities) for _ in range(mult)]

    def to_dict(self) -> Dict[str, Any]:
        result = {
            "k": self.k,
            "exponents": self.exponents,
            "rank_limit": self.rank_limit,
            "kernel_limit_dim": self.kernel_limit_dim,
            "full_smith": self.full_smith,
            "degenerate": self.degenerate,
        }
        if self.full_data is not None:
            result["factorization"] = self.full_data.to_dict()
        return result


@dataclass(frozen=True)
class OracleSmith:
    """
    Smith normal form of a polynomial matrix over K[ε].

    invariant_factors holds the nonzero monic diagonal entries d_1 | d_2 | …
    rendered as sympy expressions in ε; local_exponents[i] is the order of
    vanishing of d_i at ε = 0.
    """

    invariant_factors: Tuple[Any, ...]
    local_exponents: Tuple[int, ...]
    rank: int
    pivot_steps: int = 0

    @property
    def exponents(self) -> List[int]:
        return sorted(self.local_exponents)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "invariant_factors": [str(f) for f in self.invariant_factors],
            "local_exponents": list(self.local_exponents),
            "rank": self.rank,
        }


@dataclass(frozen=True, eq=False)
class PointValues:
    """Exact values of the factorization at one nonzero sample point."""

    point: Any
    L: Mat
    phi: Mat
    psi: Mat
    delta: Mat
    delta_inv: Mat
    pinv: Mat


@dataclass
class AxiomCheck:
    """L·X·L = L and X·L·X = X at one sample point (or skipped with a note)."""

    point: str
    lxl: Optional[bool] = None
    xlx: Optional[bool] = None
    note: Optional[str] = None

    @property
    def skipped(self) -> bool:
        return self.lxl is None

    @property
    def passed(self) -> bool:
        return self.skipped or (bool(self.lxl) and bool(self.xlx))

    def to_dict(self) -> Dict[str, Any]:
        return {"point": self.point, "lxl": self.lxl, "xlx": self.xlx, "note": self.note}


@dataclass
class GInverseReport:
    pole_order: int
    axioms: List[AxiomCheck] = field(default_factory=list)
    first_failure: Optional[int] = None
    mode: str = "sample-points"

    @property
    def passed(self) -> bool:
        return self.first_failure is None and all(a.passed for a in self.axioms)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "pole_order": self.pole_order,
            "mode": self.mode,
            "passed": self.passed,
            "first_failure": self.first_failure,
            "axioms": [a.to_dict() for a in self.axioms],
        }
