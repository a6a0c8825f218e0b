"""
Matrix-valued power series.

A MatSeries is either an exact matrix polynomial (every coefficient past the
stored degree is zero) or a truncated jet whose coefficients are known through
`order` only. Every operation propagates the valid order honestly: reading a
jet past its order raises InsufficientOrderError.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from math import comb
from typing import Any, List, Optional, Sequence, Tuple

from app.errors import BackendMismatchError, InsufficientOrderError, ShapeMismatchError
from .matrix import Mat
from .scalars import EXACT, ScalarField

logger = logging.getLogger(__name__)


class SeriesKind(str, Enum):
    POLYNOMIAL = "polynomial-exact"
    JET = "truncated-jet"


def _min_order(*orders: Optional[int]) -> Optional[int]:
    """Smallest valid order; None stands for an exact (unbounded) series."""
    bounded = [o for o in orders if o is not None]
    return min(bounded) if bounded else None


@dataclass(frozen=True, eq=False)
class MatSeries:
    """
    Σ εⁱ·coeffs[i] with rows x cols coefficients.

    For POLYNOMIAL, order is None and trailing zero coefficients are stripped,
    so len(coeffs) - 1 is the degree (-1 for the zero polynomial). For JET,
    coeffs holds exactly order + 1 entries.
    """

    coeffs: Tuple[Mat, ...]
    kind: SeriesKind
    rows: int
    cols: int
    field: ScalarField = EXACT
    order: Optional[int] = None

    # --- CONSTRUCTORS ---

    @classmethod
    def polynomial(
        cls,
        coeffs: Sequence[Mat],
        rows: Optional[int] = None,
        cols: Optional[int] = None,
        field: Optional[ScalarField] = None,
    ) -> "MatSeries":
        coeffs = list(coeffs)
        rows, cols, field = cls._shape_of(coeffs, rows, cols, field)
        while coeffs and coeffs[-1].is_zero():
            coeffs.pop()
        return cls(tuple(coeffs), SeriesKind.POLYNOMIAL, rows, cols, field, None)

    @classmethod
    def jet(
        cls,
        coeffs: Sequence[Mat],
        order: Optional[int] = None,
        rows: Optional[int] = None,
        cols: Optional[int] = None,
        field: Optional[ScalarField] = None,
    ) -> "MatSeries":
        """Truncated jet valid through `order` (default: last stored index)."""
        coeffs = list(coeffs)
        rows, cols, field = cls._shape_of(coeffs, rows, cols, field)
        if order is None:
            order = len(coeffs) - 1
        if order < 0:
            raise InsufficientOrderError("A jet must carry at least its constant coefficient.")
        coeffs = coeffs[: order + 1]
        coeffs += [Mat.zeros(rows, cols, field)] * (order + 1 - len(coeffs))
        return cls(tuple(coeffs), SeriesKind.JET, rows, cols, field, order)

    @classmethod
    def constant(cls, m: Mat) -> "MatSeries":
        return cls.polynomial([m], m.rows, m.cols, m.field)

    @classmethod
    def identity(cls, n: int, field: ScalarField = EXACT) -> "MatSeries":
        return cls.constant(Mat.eye(n, field))

    @classmethod
    def zero(cls, rows: int, cols: int, field: ScalarField = EXACT) -> "MatSeries":
        return cls.polynomial([], rows, cols, field)

    @staticmethod
    def _shape_of(coeffs, rows, cols, field) -> Tuple[int, int, ScalarField]:
        if coeffs:
            rows = coeffs[0].rows if rows is None else rows
            cols = coeffs[0].cols if cols is None else cols
            field = coeffs[0].field if field is None else field
        if rows is None or cols is None:
            raise ShapeMismatchError("Shape of an empty series must be given explicitly.")
        field = field or EXACT
        for i, c in enumerate(coeffs):
            if c.shape != (rows, cols):
                raise ShapeMismatchError(f"Coefficient {i} has shape {c.shape}, expected {(rows, cols)}.")
            if c.field.domain != field.domain:
                raise BackendMismatchError(f"Coefficient {i} is over {c.field.backend.value}, expected {field.backend.value}.")
        return rows, cols, field

    # --- ACCESS ---

    @property
    def is_exact(self) -> bool:
        return self.kind == SeriesKind.POLYNOMIAL

    @property
    def shape(self) -> Tuple[int, int]:
        return self.rows, self.cols

    @property
    def degree(self) -> int:
        """Polynomial degree; for jets the highest index with a nonzero coefficient."""
        for i in range(len(self.coeffs) - 1, -1, -1):
            if not self.coeffs[i].is_zero():
                return i
        return -1

    def coeff(self, i: int) -> Mat:
        if i < 0:
            return Mat.zeros(self.rows, self.cols, self.field)
        if self.order is not None and i > self.order:
            raise InsufficientOrderError(f"Coefficient {i} requested from a jet valid through order {self.order}.")
        if i < len(self.coeffs):
            return self.coeffs[i]
        return Mat.zeros(self.rows, self.cols, self.field)

    def covers(self, i: int) -> bool:
        return self.order is None or i <= self.order

    def coefficients(self, through: int) -> List[Mat]:
        return [self.coeff(i) for i in range(through + 1)]

    def truncate(self, order: int) -> "MatSeries":
        """Jet made of the coefficients 0..order."""
        return MatSeries.jet(self.coefficients(order), order, self.rows, self.cols, self.field)

    def limit_order(self, order: Optional[int]) -> "MatSeries":
        """Truncate to `order` when that lowers the valid order; exact series stay exact for None."""
        if order is None or (self.order is not None and self.order <= order):
            return self
        return self.truncate(order)

    def evaluate(self, x: Any) -> Mat:
        """Σ xⁱ·L_i over the stored coefficients (exact for polynomials, truncated for jets)."""
        x = self.field.convert(x)
        total = Mat.zeros(self.rows, self.cols, self.field)
        for c in reversed(self.coeffs):
            total = total.scale(x) + c
        return total

    def columns(self, indices: Sequence[int]) -> "MatSeries":
        return self._map(lambda c: c.columns(indices), self.rows, len(indices))

    def row_range(self, start: int, stop: int) -> "MatSeries":
        return self._map(lambda c: c.row_range(start, stop), stop - start, self.cols)

    def _map(self, fn, rows: int, cols: int) -> "MatSeries":
        coeffs = [fn(c) for c in self.coeffs]
        if self.is_exact:
            return MatSeries.polynomial(coeffs, rows, cols, self.field)
        return MatSeries.jet(coeffs, self.order, rows, cols, self.field)

    # --- ARITHMETIC ---

    def _check(self, other: "MatSeries", op: str) -> None:
        if self.field.domain != other.field.domain:
            raise BackendMismatchError(
                f"Backend mismatch in series {op}: {self.field.backend.value} vs {other.field.backend.value}."
            )

    def __add__(self, other: "MatSeries") -> "MatSeries":
        self._check(other, "+")
        if self.shape != other.shape:
            raise ShapeMismatchError(f"Series shape mismatch in +: {self.shape} vs {other.shape}.")
        order = _min_order(self.order, other.order)
        length = max(len(self.coeffs), len(other.coeffs)) if order is None else order + 1
        coeffs = [self.coeff(i) + other.coeff(i) for i in range(length)]
        if order is None:
            return MatSeries.polynomial(coeffs, self.rows, self.cols, self.field)
        return MatSeries.jet(coeffs, order, self.rows, self.cols, self.field)

    def __neg__(self) -> "MatSeries":
        return self._map(lambda c: -c, self.rows, self.cols)

    def __sub__(self, other: "MatSeries") -> "MatSeries":
        return self + (-other)

    def __matmul__(self, other: "MatSeries") -> "MatSeries":
        if isinstance(other, Mat):
            other = MatSeries.constant(other)
        return series_mul(self, other)

    def scale(self, value: Any) -> "MatSeries":
        return self._map(lambda c: c.scale(value), self.rows, self.cols)

    def shift(self, n: int) -> "MatSeries":
        """
        Multiply by εⁿ; negative n divides and requires the first |n| coefficients to vanish.

        Raises:
            ShapeMismatchError: negative shift of a series with nonzero low coefficients
        """
        zero = Mat.zeros(self.rows, self.cols, self.field)
        if n >= 0:
            coeffs = [zero] * n + list(self.coeffs)
            order = None if self.order is None else self.order + n
        else:
            if any(not self.coeff(i).is_zero() for i in range(-n)):
                raise ShapeMismatchError(f"Cannot divide by ε^{-n}: low coefficients do not vanish.")
            coeffs = list(self.coeffs[-n:])
            order = None if self.order is None else self.order + n
        if order is None:
            return MatSeries.polynomial(coeffs, self.rows, self.cols, self.field)
        return MatSeries.jet(coeffs, order, self.rows, self.cols, self.field)

    # --- COMPARISON ---

    def first_difference(self, other: "MatSeries", through: Optional[int] = None) -> Optional[int]:
        """Lowest index where the two series differ, looking through `through` (default: common valid order)."""
        if through is None:
            through = _min_order(self.order, other.order)
            if through is None:
                through = max(len(self.coeffs), len(other.coeffs)) - 1
        for i in range(through + 1):
            if not self.coeff(i).equals(other.coeff(i)):
                return i
        return None

    def first_nonzero(self, through: Optional[int] = None) -> Optional[int]:
        """Lowest index with a nonzero coefficient, or None when zero through `through`."""
        if through is None:
            through = self.order if self.order is not None else len(self.coeffs) - 1
        for i in range(through + 1):
            if not self.coeff(i).is_zero():
                return i
        return None

    def to_strings(self) -> List[List[List[str]]]:
        return [c.to_strings() for c in self.coeffs]


def series_mul(a: MatSeries, b: MatSeries, order: Optional[int] = None) -> MatSeries:
    """
    Cauchy product.

    Args:
        a: left factor
        b: right factor, b.rows == a.cols
        order: optional cap on the result's order

    Returns:
        Exact polynomial for two polynomial factors (and no cap); otherwise a
        jet valid through min(a.order, b.order, order)
    """
    a._check(b, "product")
    if a.cols != b.rows:
        raise ShapeMismatchError(f"Series shape mismatch in product: {a.shape} @ {b.shape}.")
    valid = _min_order(a.order, b.order, order)
    if valid is None:
        length = len(a.coeffs) + len(b.coeffs) - 1
    else:
        length = valid + 1
    coeffs = []
    for l in range(max(length, 0)):
        term = Mat.zeros(a.rows, b.cols, a.field)
        for i in range(min(l, len(a.coeffs) - 1) + 1):
            j = l - i
            if j < len(b.coeffs):
                term = term + a.coeffs[i] @ b.coeffs[j]
        coeffs.append(term)
    if valid is None:
        return MatSeries.polynomial(coeffs, a.rows, b.cols, a.field)
    return MatSeries.jet(coeffs, valid, a.rows, b.cols, a.field)


def series_inverse_near_identity(u: MatSeries, order: Optional[int] = None) -> MatSeries:
    """
    Two-sided series inverse of u, whose constant term must be invertible.

    r_0 = u_0⁻¹ and r_l = -u_0⁻¹·Σ_{j=1..l} u_j·r_{l-j}.

    Args:
        u: square series
        order: highest coefficient wanted; required when u is a non-constant polynomial

    Raises:
        NotInvertibleError: u_0 singular
        InsufficientOrderError: order missing for a non-constant polynomial
    """
    if u.rows != u.cols:
        raise ShapeMismatchError(f"Cannot invert a non-square series of shape {u.shape}.")
    inv0 = u.coeff(0).inv()
    if u.is_exact and u.degree <= 0 and order is None:
        return MatSeries.constant(inv0)
    valid = _min_order(u.order, order)
    if valid is None:
        raise InsufficientOrderError("An order is required to invert a non-constant polynomial series.")
    result = [inv0]
    for l in range(1, valid + 1):
        acc = Mat.zeros(u.rows, u.cols, u.field)
        for j in range(1, min(l, len(u.coeffs) - 1) + 1):
            acc = acc + u.coeffs[j] @ result[l - j]
        result.append(-(inv0 @ acc))
    return MatSeries.jet(result, valid, u.rows, u.cols, u.field)


def recenter(l: MatSeries, shift: Any, new_order: Optional[int] = None) -> MatSeries:
    """
    Taylor shift: returns L(shift + ε).

    Args:
        l: family to recenter
        shift: new expansion center, in l's field
        new_order: optional truncation of the result

    Raises:
        InsufficientOrderError: jet input with a nonzero shift
    """
    a = l.field.convert(shift)
    if a == l.field.zero:
        return l.limit_order(new_order)
    if not l.is_exact:
        raise InsufficientOrderError("A truncated jet cannot be recentered at a nonzero point.")
    n = len(l.coeffs)
    powers = [l.field.one]
    for _ in range(n):
        powers.append(powers[-1] * a)
    coeffs = []
    for i in range(n):
        term = Mat.zeros(l.rows, l.cols, l.field)
        for j in range(i, n):
            term = term + l.coeffs[j].scale(l.field.convert(comb(j, i)) * powers[j - i])
        coeffs.append(term)
    logger.debug(f"Recentered family of degree {n - 1} at shift {l.field.format(a)}")
    return MatSeries.polynomial(coeffs, l.rows, l.cols, l.field).limit_order(new_order)


def series_block(grid: Sequence[Sequence[MatSeries]]) -> MatSeries:
    """Block series from a rectangular grid of compatible series, coefficient by coefficient."""
    cells = [s for row in grid for s in row]
    field = cells[0].field
    order = _min_order(*(s.order for s in cells))
    length = max(len(s.coeffs) for s in cells) if order is None else order + 1
    rows = sum(row[0].rows for row in grid)
    cols = sum(s.cols for s in grid[0])
    coeffs = [Mat.block([[s.coeff(i) for s in row] for row in grid]) for i in range(length)]
    if order is None:
        return MatSeries.polynomial(coeffs, rows, cols, field)
    return MatSeries.jet(coeffs, order, rows, cols, field)


def section(l: MatSeries, start: int) -> MatSeries:
    """Σ_{i≥0} εⁱ·L_{start+i}: the tail of l shifted down to the constant term."""
    if l.is_exact:
        return MatSeries.polynomial(list(l.coeffs[start:]), l.rows, l.cols, l.field)
    if start > l.order:
        raise InsufficientOrderError(f"Section from index {start} of a jet valid through order {l.order}.")
    return MatSeries.jet(list(l.coeffs[start:]), l.order - start, l.rows, l.cols, l.field)
