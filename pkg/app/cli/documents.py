"""
Input documents: a matrix family L(ε) as JSON.

See docs/input_format.md for the grammar.
"""

import json
import logging
from pathlib import Path
from typing import List, Literal, Optional, Union

from pydantic import BaseModel, Field, ValidationError, model_validator

from app.errors import InputParseError
from app.services.core_algebra import Backend, Mat, MatSeries, ScalarField

logger = logging.getLogger(__name__)

Entry = Union[str, int, float]

FIELD_BACKENDS = {
    "rational": Backend.EXACT_RATIONAL,
    "gaussian-rational": Backend.EXACT_GAUSSIAN,
    "float": Backend.FLOAT,
}


class InputDocument(BaseModel):
    """A matrix family L(ε) = Σ εⁱ·L_i together with optional run settings."""

    field: Literal["rational", "gaussian-rational", "float"] = Field(
        "rational", description="Scalar field of the entries"
    )
    kind: Literal["polynomial", "jet"] = Field(
        "polynomial", description="Exact matrix polynomial or truncated jet"
    )
    rows: int = Field(..., ge=0, description="Row dimension m̄")
    cols: int = Field(..., ge=0, description="Column dimension m")
    coefficients: List[List[List[Entry]]] = Field(
        default_factory=list, description="L_0, L_1, … as rows x cols matrices"
    )
    jet_order: Optional[int] = Field(
        None, ge=0, description="Valid order of a jet (default: number of coefficients - 1)"
    )
    tolerance: Optional[float] = Field(None, gt=0, description="Float backend tolerance")
    sample_points: Optional[List[str]] = Field(None, description="Nonzero sample points ε*")
    order: Optional[int] = Field(None, ge=0, description="Requested expansion order")
    k_max: Optional[int] = Field(None, ge=1, description="Stabilization cap")
    shift: Optional[str] = Field(None, description="Expansion center; L is recentered before analysis")
    curve: Optional[List[List[Entry]]] = Field(
        None, description="Coefficients b_0, b_1, … of an approximate solution, each of length cols"
    )

    @model_validator(mode="after")
    def _check_shapes(self) -> "InputDocument":
        for i, matrix in enumerate(self.coefficients):
            if len(matrix) != self.rows:
                raise ValueError(f"Coefficient {i} has {len(matrix)} rows, expected {self.rows}")
            for r, row in enumerate(matrix):
                if len(row) != self.cols:
                    raise ValueError(f"Coefficient {i}, row {r} has {len(row)} entries, expected {self.cols}")
        for i, vector in enumerate(self.curve or []):
            if len(vector) != self.cols:
                raise ValueError(f"Curve coefficient {i} has {len(vector)} entries, expected {self.cols}")
        if self.kind == "jet" and not self.coefficients and self.jet_order is None:
            raise ValueError("A jet needs at least one coefficient or an explicit jet_order")
        return self

    def scalar_field(self, force_float: bool = False, tolerance: Optional[float] = None) -> ScalarField:
        backend = Backend.FLOAT if force_float else FIELD_BACKENDS[self.field]
        tol = tolerance or self.tolerance or ScalarField.DEFAULT_TOLERANCE
        return ScalarField(backend, tol)

    def to_series(self, field: ScalarField) -> MatSeries:
        """
        Parse every entry into `field`.

        Raises:
            InputParseError: an entry is not representable in the field
        """
        coeffs = [Mat.from_rows(matrix, field, cols=self.cols) for matrix in self.coefficients]
        if self.kind == "jet":
            order = self.jet_order if self.jet_order is not None else len(coeffs) - 1
            return MatSeries.jet(coeffs, order, self.rows, self.cols, field)
        return MatSeries.polynomial(coeffs, self.rows, self.cols, field)

    def curve_coefficients(self, field: ScalarField) -> List[Mat]:
        """The curve b(ε) as column vectors, empty when the document carries none."""
        return [Mat.column_vector(vector, field) for vector in self.curve or []]


def load_document(path: Path) -> InputDocument:
    """
    Read and validate an input document.

    Raises:
        InputParseError: unreadable file, invalid JSON or schema violation
    """
    try:
        raw = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise InputParseError(f"Cannot read input file {path}: {e}") from e
    try:
        data = json.loads(raw)
    except json.JSONDecodeError as e:
        raise InputParseError(f"Input file {path} is not valid JSON: {e}") from e
    try:
        document = InputDocument.model_validate(data)
    except ValidationError as e:
        raise InputParseError(f"Input file {path} does not describe a matrix family: {e}") from e
    logger.info(f"Loaded {document.rows}x{document.cols} {document.kind} over {document.field} with {len(document.coefficients)} coefficients")
    return document
