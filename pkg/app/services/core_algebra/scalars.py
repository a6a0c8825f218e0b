"""
Scalar backends.

A ScalarField fixes the sympy domain every matrix entry lives in and, for the
float backend, the tolerance used by all rank decisions.
"""

import re
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Any

import sympy
from sympy.polys.polyerrors import CoercionFailed
from sympy import QQ, QQ_I, RR

from app.errors import InputParseError


class Backend(str, Enum):
    EXACT_RATIONAL = "exact-rational"
    EXACT_GAUSSIAN = "exact-gaussian-rational"
    FLOAT = "float64"


_IMAGINARY_UNIT = re.compile(r"(?<![A-Za-z])i(?![A-Za-z])")
# "i" with no coefficient in front ("i", "1+i", "-i") must not become "*I"
_BARE_UNIT = re.compile(r"(^|[+\-*/(])\*I")


@dataclass(frozen=True)
class ScalarField:
    """
    Scalar backend plus tolerance.

    Exact backends never round: entries are sympy QQ or QQ_I elements stored in
    lowest terms. The float backend stores RR elements (53-bit) and treats
    anything below tolerance * scale as zero.
    """

    backend: Backend = Backend.EXACT_RATIONAL
    tolerance: float = 1e-10

    DEFAULT_TOLERANCE = 1e-10
    # Justification: float64 carries ~16 digits; desk-scale inputs (ambient <= 50)
    # lose at most a few digits per elimination, leaving a wide margin above 1e-10.

    @property
    def domain(self):
        if self.backend == Backend.EXACT_GAUSSIAN:
            return QQ_I
        if self.backend == Backend.FLOAT:
            return RR
        return QQ

    @property
    def is_exact(self) -> bool:
        return self.backend != Backend.FLOAT

    @property
    def zero(self):
        return self.domain.zero

    @property
    def one(self):
        return self.domain.one

    def convert(self, value: Any):
        """Convert ints, Fractions, strings, sympy numbers or domain elements into the domain."""
        domain = self.domain
        if isinstance(value, str):
            return self.parse(value)
        if isinstance(value, bool):
            raise InputParseError(f"Boolean {value!r} is not a scalar.")
        if isinstance(value, int):
            return domain.from_sympy(sympy.Integer(value))
        if isinstance(value, Fraction):
            return domain.from_sympy(sympy.Rational(value.numerator, value.denominator))
        if isinstance(value, float):
            if self.is_exact:
                return domain.from_sympy(sympy.Rational(repr(value)))
            return domain.from_sympy(sympy.Float(value))
        if isinstance(value, sympy.Basic):
            return domain.from_sympy(value)
        if domain.of_type(value):
            return value
        return domain.convert(value)

    def parse(self, text: str):
        """
        Parse one entry in the declared field.

        Accepted forms: "p/q", integers and decimals for every backend;
        "a/b+c/di" (i the imaginary unit) for the gaussian backend.

        Raises:
            InputParseError: entry cannot be represented in this field
        """
        raw = text.strip().replace(" ", "")
        if not raw:
            raise InputParseError("Empty scalar entry.")
        try:
            if self.backend == Backend.FLOAT:
                return RR.from_sympy(sympy.Float(float(sympy.Rational(raw))))
            if self.backend == Backend.EXACT_GAUSSIAN:
                text_i = _BARE_UNIT.sub(r"\1I", _IMAGINARY_UNIT.sub("*I", raw))
                expr = sympy.sympify(text_i, rational=True)
                return QQ_I.from_sympy(sympy.expand(expr))
            return QQ.from_sympy(sympy.Rational(raw))
        except (TypeError, ValueError, SyntaxError, sympy.SympifyError, CoercionFailed) as e:
            raise InputParseError(f"Cannot parse {text!r} as {self.backend.value}: {e}") from e

    def is_zero(self, value, scale: float = 1.0) -> bool:
        if self.is_exact:
            return value == self.domain.zero
        return abs(float(value)) <= self.tolerance * max(scale, 1.0)

    def magnitude(self, value) -> float:
        return abs(complex(self.domain.to_sympy(value))) if self.backend == Backend.EXACT_GAUSSIAN else abs(float(value))

    def format(self, value) -> str:
        """Render an entry losslessly ("p/q", "a+bi") or as a float repr."""
        if self.backend == Backend.FLOAT:
            return repr(float(value))
        if self.backend == Backend.EXACT_GAUSSIAN:
            re_part = str(QQ.to_sympy(value.x))
            im_part = QQ.to_sympy(value.y)
            if im_part == 0:
                return re_part
            im_text = f"{im_part}i"
            if value.x == QQ.zero:
                return im_text
            return f"{re_part}+{im_text}" if im_part > 0 else f"{re_part}{im_text}"
        return str(QQ.to_sympy(value))

    def poly_ring(self, symbol: sympy.Symbol):
        """Univariate polynomial ring over this field, used by the Smith oracle."""
        return self.domain[symbol]


EXACT = ScalarField()
