import logging
from dataclasses import dataclass
from typing import Any, List, Optional, Sequence, Tuple

from app.errors import InsufficientOrderError, ShapeMismatchError
from .matrix import Mat
from .scalars import EXACT, ScalarField
from .series import MatSeries, _min_order

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class LaurentSeries:
    """
    Σ_{e ≥ -pole_order} εᵉ·coeffs[e + pole_order].

    order is the highest exponent whose coefficient is trustworthy (None when
    the expansion is exact and coefficients past the stored ones are zero).
    A positive pole_order always comes with a nonzero leading coefficient.
    """

    pole_order: int
    coeffs: Tuple[Mat, ...]
    rows: int
    cols: int
    field: ScalarField = EXACT
    order: Optional[int] = None

    @classmethod
    def build(
        cls,
        coeffs: Sequence[Mat],
        pole_order: int,
        rows: int,
        cols: int,
        field: ScalarField = EXACT,
        order: Optional[int] = None,
    ) -> "LaurentSeries":
        """Normalize: drop vanishing leading coefficients of the principal part."""
        coeffs = list(coeffs)
        while pole_order > 0 and (not coeffs or coeffs[0].is_zero()):
            coeffs = coeffs[1:]
            pole_order -= 1
        if order is None:
            while coeffs and len(coeffs) > pole_order + 1 and coeffs[-1].is_zero():
                coeffs.pop()
        else:
            coeffs = coeffs[: max(order + pole_order + 1, 0)]
        return cls(pole_order, tuple(coeffs), rows, cols, field, order)

    @classmethod
    def from_series(cls, s: MatSeries) -> "LaurentSeries":
        return cls.build(list(s.coeffs), 0, s.rows, s.cols, s.field, s.order)

    def coeff(self, exponent: int) -> Mat:
        if self.order is not None and exponent > self.order:
            raise InsufficientOrderError(f"Laurent coefficient ε^{exponent} requested, valid through ε^{self.order}.")
        idx = exponent + self.pole_order
        if 0 <= idx < len(self.coeffs):
            return self.coeffs[idx]
        return Mat.zeros(self.rows, self.cols, self.field)

    @property
    def leading(self) -> Mat:
        return self.coeff(-self.pole_order)

    @property
    def top_exponent(self) -> int:
        """Highest exponent stored (or valid, for truncated expansions)."""
        if self.order is not None:
            return self.order
        return len(self.coeffs) - 1 - self.pole_order

    def principal_part(self) -> List[Mat]:
        """Coefficients of ε^{-pole_order} .. ε^{-1}."""
        return [self.coeff(e) for e in range(-self.pole_order, 0)]

    def regular_part(self) -> MatSeries:
        coeffs = [self.coeff(e) for e in range(0, self.top_exponent + 1)]
        if self.order is None:
            return MatSeries.polynomial(coeffs, self.rows, self.cols, self.field)
        return MatSeries.jet(coeffs, self.order, self.rows, self.cols, self.field)

    def evaluate(self, x: Any) -> Tuple[Mat, Optional[int]]:
        """
        Sum of the stored window at ε = x.

        Returns:
            (value, truncation order): the order is None when the expansion is exact,
            otherwise the first exponent whose term was dropped
        """
        x = self.field.convert(x)
        if x == self.field.zero and self.pole_order > 0:
            raise ShapeMismatchError("Cannot evaluate a Laurent series with a pole at ε = 0.")
        total = Mat.zeros(self.rows, self.cols, self.field)
        inverse = self.field.one / x if self.pole_order > 0 else None
        for e in range(-self.pole_order, self.top_exponent + 1):
            power = self.field.one
            base = inverse if e < 0 else x
            for _ in range(abs(e)):
                power = power * base
            total = total + self.coeff(e).scale(power)
        return total, (None if self.order is None else self.order + 1)

    def first_difference(self, other: "LaurentSeries", through: Optional[int] = None) -> Optional[int]:
        low = -max(self.pole_order, other.pole_order)
        if through is None:
            through = _min_order(self.order, other.order)
            if through is None:
                through = max(self.top_exponent, other.top_exponent)
        for e in range(low, through + 1):
            if not self.coeff(e).equals(other.coeff(e)):
                return e
        return None

    def to_strings(self) -> List[List[List[str]]]:
        return [c.to_strings() for c in self.coeffs]


def laurent_mul(a: LaurentSeries, b: LaurentSeries, order: Optional[int] = None) -> LaurentSeries:
    """
    Product of two Laurent series.

    Valid through min(a.order - b.pole_order, b.order - a.pole_order, order).
    """
    if a.cols != b.rows:
        raise ShapeMismatchError(f"Laurent shape mismatch in product: {(a.rows, a.cols)} @ {(b.rows, b.cols)}.")
    pole = a.pole_order + b.pole_order
    valid = _min_order(
        None if a.order is None else a.order - b.pole_order,
        None if b.order is None else b.order - a.pole_order,
        order,
    )
    top = valid if valid is not None else a.top_exponent + b.top_exponent
    coeffs = []
    for e in range(-pole, top + 1):
        term = Mat.zeros(a.rows, b.cols, a.field)
        for s in range(-a.pole_order, e + b.pole_order + 1):
            if s > a.top_exponent or e - s > b.top_exponent:
                continue
            term = term + a.coeff(s) @ b.coeff(e - s)
        coeffs.append(term)
    return LaurentSeries.build(coeffs, pole, a.rows, b.cols, a.field, valid)
