"""
Subspaces as column spans and direct-sum decompositions.

All bases are chosen by reduced row echelon form, so identical inputs always
give identical bases.
"""

import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from app.errors import ContainmentError, NotInvertibleError, ShapeMismatchError
from .matrix import Mat
from .scalars import EXACT, ScalarField

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class Subspace:
    """Column space of a full-column-rank basis (ambient x dim); dim 0 has zero columns."""

    basis: Mat

    @classmethod
    def zero(cls, ambient: int, field: ScalarField = EXACT) -> "Subspace":
        return cls(Mat.zeros(ambient, 0, field))

    @classmethod
    def full(cls, ambient: int, field: ScalarField = EXACT) -> "Subspace":
        return cls(Mat.eye(ambient, field))

    @classmethod
    def span(cls, vectors: Mat) -> "Subspace":
        """Span of arbitrary (possibly dependent) columns."""
        return range_of(vectors)

    @property
    def ambient(self) -> int:
        return self.basis.rows

    @property
    def dim(self) -> int:
        return self.basis.cols

    @property
    def field(self) -> ScalarField:
        return self.basis.field

    def is_zero(self) -> bool:
        return self.dim == 0

    def coordinates(self, vectors: Mat) -> Optional[Mat]:
        """Coordinates of the columns of `vectors` in this basis, or None if some column lies outside."""
        if vectors.rows != self.ambient:
            raise ShapeMismatchError(f"Vectors of length {vectors.rows} tested against a subspace of {self.ambient}.")
        if vectors.cols == 0:
            return Mat.zeros(self.dim, 0, self.field)
        if self.dim == 0:
            return Mat.zeros(0, vectors.cols, self.field) if vectors.is_zero() else None
        return self.basis.solve(vectors)

    def contains(self, vectors: Mat) -> bool:
        return self.coordinates(vectors) is not None

    def contains_space(self, other: "Subspace") -> bool:
        return self.contains(other.basis)

    def equals(self, other: "Subspace") -> bool:
        return self.dim == other.dim and self.contains_space(other) and other.contains_space(self)

    def image(self, m: Mat) -> "Subspace":
        return range_of(m @ self.basis)

    def __add__(self, other: "Subspace") -> "Subspace":
        return range_of(Mat.hstack([self.basis, other.basis]))

    def __repr__(self) -> str:
        return f"Subspace(dim={self.dim}, ambient={self.ambient})"


def kernel(m: Mat) -> Subspace:
    """
    Null space of m.

    One basis vector per free column f of rref(m): 1 at f, -rref[i, f] at pivot_i.
    """
    if m.cols == 0:
        return Subspace.zero(0, m.field)
    reduced, pivots = m.rref()
    free = [c for c in range(m.cols) if c not in pivots]
    if not free:
        return Subspace.zero(m.cols, m.field)
    entries = reduced.entries()
    columns = []
    for f in free:
        v = [m.field.zero] * m.cols
        v[f] = m.field.one
        for i, p in enumerate(pivots):
            v[p] = -entries[i][f]
        columns.append(v)
    basis = Mat.from_rows([list(row) for row in zip(*columns)], m.field, cols=len(free))
    return Subspace(basis)


def range_of(m: Mat) -> Subspace:
    """Column space spanned by the pivot columns of m, in index order."""
    if m.rows == 0 or m.cols == 0:
        return Subspace.zero(m.rows, m.field)
    _, pivots = m.rref()
    return Subspace(m.columns(pivots))


def complement_in(inner: Subspace, outer: Subspace) -> Subspace:
    """
    Greedy complement C with inner ⊕ C = outer.

    inner's basis is extended by outer-basis columns in index order; a column
    is taken whenever it is independent of everything chosen so far.

    Raises:
        ContainmentError: inner is not contained in outer
    """
    if inner.ambient != outer.ambient:
        raise ShapeMismatchError(f"Subspaces of {inner.ambient} and {outer.ambient} do not share an ambient space.")
    if not outer.contains_space(inner):
        raise ContainmentError(f"Subspace of dim {inner.dim} is not contained in the outer subspace of dim {outer.dim}.")
    if outer.dim == 0:
        return Subspace.zero(outer.ambient, outer.field)
    _, pivots = Mat.hstack([inner.basis, outer.basis]).rref()
    chosen = [p - inner.dim for p in pivots if p >= inner.dim]
    return Subspace(outer.basis.columns(chosen))


@dataclass(frozen=True, eq=False)
class Decomposition:
    """
    Direct sum of parts filling the ambient space, with its projectors.

    selectors[i] is the block of rows of (stacked bases)⁻¹ belonging to part i:
    it maps a vector to its coordinates in parts[i].basis.
    """

    ambient: int
    parts: Tuple[Subspace, ...]
    projectors: Tuple[Mat, ...]
    selectors: Tuple[Mat, ...]

    def projector_sum(self, indices: Sequence[int]) -> Mat:
        total = Mat.zeros(self.ambient, self.ambient, self.field)
        for i in indices:
            total = total + self.projectors[i]
        return total

    @property
    def field(self) -> ScalarField:
        return self.parts[0].field if self.parts else EXACT

    def verify(self) -> List[str]:
        """Names of the projector identities that fail (empty when all hold)."""
        failures = []
        identity = Mat.eye(self.ambient, self.field)
        if not self.projector_sum(range(len(self.parts))).equals(identity):
            failures.append("sum-to-identity")
        for i, p in enumerate(self.projectors):
            if not (p @ p).equals(p):
                failures.append(f"idempotent[{i}]")
            for j, part in enumerate(self.parts):
                image = p @ part.basis
                expected = part.basis if i == j else Mat.zeros(self.ambient, part.dim, self.field)
                if not image.equals(expected):
                    failures.append(f"action[{i},{j}]")
        return failures


def build_decomposition(parts: Sequence[Subspace], ambient: Optional[int] = None, field: Optional[ScalarField] = None) -> Decomposition:
    """
    Projectors of a direct sum.

    Args:
        parts: subspaces whose dims add up to the ambient dimension
        ambient: ambient dimension (inferred from the parts when omitted)
        field: scalar backend, only needed when parts is empty

    Returns:
        Decomposition with Π_i = basis_i · (rows of T⁻¹ for part i), T the stacked bases

    Raises:
        NotInvertibleError: parts are not a direct sum of the ambient space
    """
    parts = tuple(parts)
    if ambient is None:
        ambient = parts[0].ambient if parts else 0
    field = field or (parts[0].field if parts else EXACT)
    if any(p.ambient != ambient for p in parts):
        raise ShapeMismatchError(f"Parts live in ambient spaces {[p.ambient for p in parts]}, expected {ambient}.")
    total = sum(p.dim for p in parts)
    if total != ambient:
        raise NotInvertibleError(f"Part dimensions add up to {total}, not the ambient dimension {ambient}.")
    stacked = Mat.hstack([p.basis for p in parts], rows=ambient, field=field)
    try:
        inverse = stacked.inv()
    except NotInvertibleError as e:
        raise NotInvertibleError(f"Parts with dims {[p.dim for p in parts]} do not form a direct sum.") from e
    projectors, selectors = [], []
    offset = 0
    for p in parts:
        selector = inverse.row_range(offset, offset + p.dim)
        selectors.append(selector)
        projectors.append(p.basis @ selector)
        offset += p.dim
    return Decomposition(ambient, parts, tuple(projectors), tuple(selectors))
