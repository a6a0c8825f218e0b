"""
Dense matrices over a ScalarField.

Mat wraps a dense sympy DomainMatrix. Exact backends delegate elimination to
DomainMatrix.rref (reduced echelon forms are unique, so every basis derived
from them is deterministic); the float backend eliminates in numpy with a
tolerance-thresholded, lowest-index pivot rule.
"""

import logging
from dataclasses import dataclass
from typing import Any, List, Optional, Sequence, Tuple

import numpy as np
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.exceptions import DMNonInvertibleMatrixError

from app.errors import BackendMismatchError, NotInvertibleError, ShapeMismatchError
from .scalars import EXACT, Backend, ScalarField

logger = logging.getLogger(__name__)


def _float_rref(a: np.ndarray, tol: float) -> Tuple[np.ndarray, Tuple[int, ...]]:
    """Gauss-Jordan elimination; a column pivots at its first row above tol * max|entry|."""
    a = a.astype(float).copy()
    rows, cols = a.shape
    threshold = tol * max(1.0, float(np.abs(a).max(initial=0.0)))
    pivots: List[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        eligible = np.nonzero(np.abs(a[r:, c]) > threshold)[0]
        if eligible.size == 0:
            a[r:, c] = 0.0
            continue
        p = r + int(eligible[0])
        if p != r:
            a[[r, p]] = a[[p, r]]
        a[r] = a[r] / a[r, c]
        others = [i for i in range(rows) if i != r]
        if others:
            a[others] -= np.outer(a[others, c], a[r])
        pivots.append(c)
        r += 1
    return a, tuple(pivots)


@dataclass(frozen=True, eq=False)
class Mat:
    """
    Immutable dense matrix; rows x cols entries of field.domain.

    Zero-sized shapes (0 x n, n x 0) are first-class and flow through every
    operation.
    """

    rep: DomainMatrix
    field: ScalarField = EXACT

    def __post_init__(self):
        if self.rep.domain != self.field.domain:
            raise BackendMismatchError(
                f"Matrix over {self.rep.domain} does not belong to backend {self.field.backend.value}."
            )
        object.__setattr__(self, "rep", self.rep.to_dense())

    # --- CONSTRUCTORS ---

    @classmethod
    def zeros(cls, rows: int, cols: int, field: ScalarField = EXACT) -> "Mat":
        return cls(DomainMatrix.zeros((rows, cols), field.domain), field)

    @classmethod
    def eye(cls, n: int, field: ScalarField = EXACT) -> "Mat":
        if n == 0:
            return cls.zeros(0, 0, field)
        return cls(DomainMatrix.eye(n, field.domain), field)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[Any]], field: ScalarField = EXACT, cols: Optional[int] = None) -> "Mat":
        """
        Build a matrix from nested sequences of ints, Fractions, strings or domain elements.

        Args:
            rows: row-major entries
            field: scalar backend
            cols: column count, required only when rows is empty
        """
        rows = [list(r) for r in rows]
        n_cols = len(rows[0]) if rows else (cols or 0)
        if any(len(r) != n_cols for r in rows):
            raise ShapeMismatchError(f"Ragged rows: expected {n_cols} entries in every row.")
        if not rows or n_cols == 0:
            return cls.zeros(len(rows), n_cols, field)
        data = [[field.convert(x) for x in r] for r in rows]
        return cls(DomainMatrix(data, (len(rows), n_cols), field.domain), field)

    @classmethod
    def column_vector(cls, values: Sequence[Any], field: ScalarField = EXACT) -> "Mat":
        return cls.from_rows([[v] for v in values], field, cols=1)

    @classmethod
    def diag(cls, values: Sequence[Any], field: ScalarField = EXACT) -> "Mat":
        n = len(values)
        return cls.from_rows(
            [[values[i] if i == j else 0 for j in range(n)] for i in range(n)], field, cols=n
        )

    @classmethod
    def hstack(cls, mats: Sequence["Mat"], rows: Optional[int] = None, field: Optional[ScalarField] = None) -> "Mat":
        if not mats:
            return cls.zeros(rows or 0, 0, field or EXACT)
        field = field or mats[0].field
        n_rows = mats[0].rows
        if any(m.rows != n_rows for m in mats):
            raise ShapeMismatchError(f"hstack row mismatch: {[m.shape for m in mats]}")
        parts = [m.rep for m in mats if m.cols > 0]
        if not parts:
            return cls.zeros(n_rows, 0, field)
        if n_rows == 0:
            return cls.zeros(0, sum(m.cols for m in mats), field)
        return cls(parts[0].hstack(*parts[1:]), field)

    @classmethod
    def vstack(cls, mats: Sequence["Mat"], cols: Optional[int] = None, field: Optional[ScalarField] = None) -> "Mat":
        if not mats:
            return cls.zeros(0, cols or 0, field or EXACT)
        field = field or mats[0].field
        n_cols = mats[0].cols
        if any(m.cols != n_cols for m in mats):
            raise ShapeMismatchError(f"vstack column mismatch: {[m.shape for m in mats]}")
        parts = [m.rep for m in mats if m.rows > 0]
        if not parts:
            return cls.zeros(0, n_cols, field)
        if n_cols == 0:
            return cls.zeros(sum(m.rows for m in mats), 0, field)
        return cls(parts[0].vstack(*parts[1:]), field)

    @classmethod
    def block(cls, grid: Sequence[Sequence["Mat"]]) -> "Mat":
        """Assemble a block matrix from a rectangular grid of compatible blocks."""
        return cls.vstack([cls.hstack(list(row)) for row in grid])

    # --- SHAPE AND ACCESS ---

    @property
    def rows(self) -> int:
        return self.rep.shape[0]

    @property
    def cols(self) -> int:
        return self.rep.shape[1]

    @property
    def shape(self) -> Tuple[int, int]:
        return self.rep.shape

    def entries(self) -> List[List[Any]]:
        if self.rows == 0:
            return []
        if self.cols == 0:
            return [[] for _ in range(self.rows)]
        return self.rep.to_list()

    def __getitem__(self, key: Tuple[int, int]):
        i, j = key
        return self.entries()[i][j]

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "Mat":
        rows, cols = list(rows), list(cols)
        if not rows or not cols:
            return Mat.zeros(len(rows), len(cols), self.field)
        return Mat(self.rep.extract(rows, cols), self.field)

    def column(self, j: int) -> "Mat":
        return self.submatrix(range(self.rows), [j])

    def columns(self, indices: Sequence[int]) -> "Mat":
        return self.submatrix(range(self.rows), indices)

    def row_range(self, start: int, stop: int) -> "Mat":
        return self.submatrix(range(start, stop), range(self.cols))

    def split_rows(self, size: int) -> List["Mat"]:
        """Split into consecutive row blocks of equal height."""
        if size <= 0 or self.rows % size:
            raise ShapeMismatchError(f"Cannot split {self.rows} rows into blocks of {size}.")
        return [self.row_range(s, s + size) for s in range(0, self.rows, size)]

    # --- ARITHMETIC ---

    def _compatible(self, other: "Mat", op: str) -> None:
        if not isinstance(other, Mat):
            raise TypeError(f"Cannot combine Mat with {type(other).__name__}.")
        if self.field.domain != other.field.domain:
            raise BackendMismatchError(
                f"Backend mismatch in {op}: {self.field.backend.value} vs {other.field.backend.value}."
            )

    def __add__(self, other: "Mat") -> "Mat":
        self._compatible(other, "+")
        if self.shape != other.shape:
            raise ShapeMismatchError(f"Shape mismatch in +: {self.shape} vs {other.shape}.")
        if 0 in self.shape:
            return self
        return Mat(self.rep + other.rep, self.field)

    def __sub__(self, other: "Mat") -> "Mat":
        self._compatible(other, "-")
        if self.shape != other.shape:
            raise ShapeMismatchError(f"Shape mismatch in -: {self.shape} vs {other.shape}.")
        if 0 in self.shape:
            return self
        return Mat(self.rep - other.rep, self.field)

    def __neg__(self) -> "Mat":
        if 0 in self.shape:
            return self
        return Mat(-self.rep, self.field)

    def __matmul__(self, other: "Mat") -> "Mat":
        self._compatible(other, "@")
        if self.cols != other.rows:
            raise ShapeMismatchError(f"Shape mismatch in product: {self.shape} @ {other.shape}.")
        if 0 in (self.rows, self.cols, other.cols):
            return Mat.zeros(self.rows, other.cols, self.field)
        return Mat(self.rep * other.rep, self.field)

    def scale(self, value: Any) -> "Mat":
        if 0 in self.shape:
            return self
        return Mat(self.rep.scalarmul(self.field.convert(value)), self.field)

    @property
    def T(self) -> "Mat":
        if 0 in self.shape:
            return Mat.zeros(self.cols, self.rows, self.field)
        return Mat(self.rep.transpose(), self.field)

    def trace(self):
        total = self.field.zero
        for i in range(min(self.shape)):
            total += self[i, i]
        return total

    # --- COMPARISON ---

    def max_abs(self) -> float:
        return max((self.field.magnitude(x) for row in self.entries() for x in row), default=0.0)

    def is_zero(self, scale: float = 1.0) -> bool:
        if 0 in self.shape:
            return True
        if self.field.is_exact:
            return self.rep.is_zero_matrix
        return all(self.field.is_zero(x, scale) for row in self.entries() for x in row)

    def equals(self, other: "Mat") -> bool:
        if self.shape != other.shape:
            return False
        return (self - other).is_zero(max(self.max_abs(), other.max_abs()) if not self.field.is_exact else 1.0)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Mat):
            return NotImplemented
        return self.field.domain == other.field.domain and self.equals(other)

    __hash__ = None

    # --- ELIMINATION ---

    def to_numpy(self) -> np.ndarray:
        dtype = complex if self.field.backend == Backend.EXACT_GAUSSIAN else float
        data = np.zeros(self.shape, dtype=dtype)
        for i, row in enumerate(self.entries()):
            for j, x in enumerate(row):
                data[i, j] = complex(self.field.domain.to_sympy(x)) if dtype is complex else float(x)
        return data

    @classmethod
    def from_numpy(cls, data: np.ndarray, field: ScalarField) -> "Mat":
        return cls.from_rows([[float(x) for x in row] for row in data], field, cols=data.shape[1])

    def rref(self) -> Tuple["Mat", Tuple[int, ...]]:
        """Reduced row echelon form and pivot columns (ascending)."""
        if 0 in self.shape:
            return self, ()
        if self.field.is_exact:
            reduced, pivots = self.rep.rref()
            return Mat(reduced, self.field), tuple(pivots)
        reduced, pivots = _float_rref(self.to_numpy(), self.field.tolerance)
        return Mat.from_numpy(reduced, self.field), pivots

    def rank(self) -> int:
        return len(self.rref()[1])

    def inv(self) -> "Mat":
        """
        Two-sided inverse of a square matrix.

        Raises:
            NotInvertibleError: matrix is singular (or numerically rank deficient)
        """
        if self.rows != self.cols:
            raise ShapeMismatchError(f"Cannot invert non-square matrix of shape {self.shape}.")
        if self.rows == 0:
            return self
        if self.field.is_exact:
            try:
                return Mat(self.rep.inv(), self.field)
            except (DMNonInvertibleMatrixError, ZeroDivisionError) as e:
                raise NotInvertibleError(f"Matrix of shape {self.shape} is singular.") from e
        if self.rank() < self.rows:
            raise NotInvertibleError(f"Matrix of shape {self.shape} is rank deficient within tolerance.")
        return Mat.from_numpy(np.linalg.inv(self.to_numpy()), self.field)

    def solve(self, rhs: "Mat") -> Optional["Mat"]:
        """
        A particular solution X of self @ X = rhs (free variables set to zero).

        Returns:
            X, or None when the system is inconsistent
        """
        self._compatible(rhs, "solve")
        if rhs.rows != self.rows:
            raise ShapeMismatchError(f"Right-hand side has {rhs.rows} rows, expected {self.rows}.")
        if rhs.cols == 0:
            return Mat.zeros(self.cols, 0, self.field)
        if self.rows == 0:
            return Mat.zeros(self.cols, rhs.cols, self.field)
        reduced, pivots = Mat.hstack([self, rhs]).rref()
        if any(p >= self.cols for p in pivots):
            return None
        entries = reduced.entries()
        solution = [[self.field.zero] * rhs.cols for _ in range(self.cols)]
        for i, p in enumerate(pivots):
            solution[p] = list(entries[i][self.cols:])
        return Mat.from_rows(solution, self.field, cols=rhs.cols)

    # --- RENDERING ---

    def to_strings(self) -> List[List[str]]:
        return [[self.field.format(x) for x in row] for row in self.entries()]

    def __repr__(self) -> str:
        return f"Mat({self.to_strings()})"
