from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, Tuple

from app.errors import ShapeMismatchError
from app.services.core_algebra import Mat, MatSeries, series_mul


@dataclass(frozen=True, eq=False)
class SolutionCurve:
    """
    Finite jet b_0 + ε·b_1 + … of a curve in the domain, with its residual.

    residual_order is the smallest l with (L·b)_l ≠ 0 among the orders the
    stored coefficients determine (0..checked_through), or None when the
    residual vanishes through checked_through.
    """

    coeffs: Tuple[Mat, ...]
    residual_order: Optional[int]
    checked_through: int

    @classmethod
    def build(cls, L: MatSeries, coeffs: Sequence[Mat]) -> "SolutionCurve":
        coeffs = tuple(coeffs)
        if not coeffs:
            raise ShapeMismatchError("A solution curve needs at least its constant coefficient.")
        if any(c.shape != (L.cols, 1) for c in coeffs):
            raise ShapeMismatchError(f"Curve coefficients must be {L.cols}x1 column vectors.")
        through = len(coeffs) - 1 if L.order is None else min(len(coeffs) - 1, L.order)
        series = MatSeries.jet(coeffs, len(coeffs) - 1, L.cols, 1, L.field)
        residual = series_mul(L, series, order=through)
        return cls(coeffs, residual.first_nonzero(through), through)

    @property
    def order(self) -> int:
        """Number of stored coefficients."""
        return len(self.coeffs)

    @property
    def approximation_order(self) -> int:
        """Largest a with L·b = O(ε^a) as far as the stored coefficients tell."""
        return self.checked_through + 1 if self.residual_order is None else self.residual_order

    @property
    def is_exact_through_order(self) -> bool:
        return self.residual_order is None

    def as_series(self) -> MatSeries:
        first = self.coeffs[0]
        return MatSeries.jet(self.coeffs, len(self.coeffs) - 1, first.rows, 1, first.field)

    def as_matrix(self) -> Mat:
        """Coefficients side by side (m x order)."""
        return Mat.hstack(list(self.coeffs))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "coefficients": [[row[0] for row in c.to_strings()] for c in self.coeffs],
            "residual_order": "exact-through-order" if self.residual_order is None else self.residual_order,
            "checked_through": self.checked_through,
        }


@dataclass(frozen=True, eq=False)
class FlatBasis:
    """Analytic solutions φ(ε)·n̄_i over a basis n̄_i of N_(k+1)."""

    generators: Tuple[SolutionCurve, ...]
    basis: Mat
    valid_order: int

    def __len__(self) -> int:
        return len(self.generators)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "valid_order": self.valid_order,
            "generators": [g.to_dict() for g in self.generators],
        }


@dataclass(frozen=True, eq=False)
class ArtinReesSplit:
    """b = b̂ + ε^l·b₀ with L·b̂ = 0, hence L·b = ε^l·L·b₀."""

    approximation: SolutionCurve
    remainder: SolutionCurve
    l: int
    parameters: List[Mat]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "l": self.l,
            "exact_solution": self.approximation.to_dict(),
            "remainder": self.remainder.to_dict(),
        }
