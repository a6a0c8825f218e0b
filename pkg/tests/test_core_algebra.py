from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from app.errors import (
    BackendMismatchError,
    ContainmentError,
    InputParseError,
    InsufficientOrderError,
    NotInvertibleError,
    ShapeMismatchError,
)
from app.services.core_algebra import (
    EXACT,
    Backend,
    LaurentSeries,
    Mat,
    MatSeries,
    ScalarField,
    Subspace,
    build_decomposition,
    complement_in,
    kernel,
    laurent_mul,
    range_of,
    recenter,
    series_inverse_near_identity,
    series_mul,
)

GAUSSIAN = ScalarField(Backend.EXACT_GAUSSIAN)
FLOAT = ScalarField(Backend.FLOAT)

small = st.integers(min_value=-3, max_value=3)


def matrices(rows: int, cols: int):
    return st.lists(st.lists(small, min_size=cols, max_size=cols), min_size=rows, max_size=rows).map(
        lambda r: Mat.from_rows(r, EXACT, cols=cols)
    )


def families(rows: int, cols: int, max_degree: int = 2):
    return st.lists(matrices(rows, cols), min_size=1, max_size=max_degree + 1).map(
        lambda cs: MatSeries.polynomial(cs, rows, cols, EXACT)
    )


# --- SCALARS ---

def test_parse_rational_and_gaussian_entries():
    assert EXACT.format(EXACT.parse("6/4")) == "3/2"
    assert EXACT.format(EXACT.convert(Fraction(-1, 3))) == "-1/3"
    assert GAUSSIAN.format(GAUSSIAN.parse("1/2+3/4i")) == "1/2+3/4i"
    assert GAUSSIAN.format(GAUSSIAN.parse("2i")) == "2i"


@pytest.mark.parametrize("text", ["", "abc", "1/0x"])
def test_unparseable_entries_raise(text):
    with pytest.raises(InputParseError):
        EXACT.parse(text)


def test_rational_field_rejects_imaginary_unit():
    with pytest.raises(InputParseError):
        EXACT.parse("1+i")


def test_float_zero_test_uses_tolerance():
    field = ScalarField(Backend.FLOAT, 1e-8)
    assert field.is_zero(field.convert(1e-12))
    assert not field.is_zero(field.convert(1e-3))


# --- MATRICES ---

def test_inverse_of_singular_matrix_raises():
    with pytest.raises(NotInvertibleError):
        Mat.from_rows([[1, 2], [2, 4]]).inv()


def test_mixed_backends_raise():
    with pytest.raises(BackendMismatchError):
        Mat.eye(2) + Mat.eye(2, FLOAT)


def test_zero_sized_matrices_flow_through_products():
    a = Mat.zeros(3, 0)
    b = Mat.zeros(0, 2)
    assert (a @ b).equals(Mat.zeros(3, 2))
    assert kernel(Mat.zeros(0, 2)).dim == 2


@given(matrices(3, 4))
@settings(max_examples=40, deadline=None)
def test_kernel_and_range_dimensions(m):
    null = kernel(m)
    assert (m @ null.basis).is_zero()
    assert null.dim + range_of(m).dim == m.cols
    assert range_of(m).dim == m.rank()


# --- SUBSPACES ---

@given(matrices(4, 2), matrices(4, 3))
@settings(max_examples=40, deadline=None)
def test_complement_fills_outer_space(inner_vectors, extra):
    inner = Subspace.span(inner_vectors)
    outer = inner + Subspace.span(extra)
    complement = complement_in(inner, outer)
    assert inner.dim + complement.dim == outer.dim
    assert (inner + complement).equals(outer)


def test_complement_of_non_contained_space_raises():
    inner = Subspace.span(Mat.from_rows([[1], [0]]))
    outer = Subspace.span(Mat.from_rows([[0], [1]]))
    with pytest.raises(ContainmentError):
        complement_in(inner, outer)


def test_decomposition_projectors():
    parts = [
        Subspace.span(Mat.from_rows([[1], [1], [0]])),
        Subspace.span(Mat.from_rows([[0, 0], [1, 0], [0, 1]])),
    ]
    decomposition = build_decomposition(parts)
    assert decomposition.verify() == []
    assert decomposition.projector_sum([0, 1]).equals(Mat.eye(3))


def test_decomposition_of_overlapping_parts_raises():
    line = Subspace.span(Mat.from_rows([[1], [0]]))
    with pytest.raises(NotInvertibleError):
        build_decomposition([line, line])


# --- SERIES ---

@given(families(2, 2), families(2, 2), families(2, 2))
@settings(max_examples=30, deadline=None)
def test_series_product_is_associative(a, b, c):
    left = series_mul(series_mul(a, b), c)
    right = series_mul(a, series_mul(b, c))
    assert left.first_difference(right) is None


@given(families(2, 3), families(3, 2), families(3, 2))
@settings(max_examples=30, deadline=None)
def test_series_product_distributes(a, b, c):
    assert series_mul(a, b + c).first_difference(series_mul(a, b) + series_mul(a, c)) is None


@given(families(2, 2), st.integers(min_value=0, max_value=6))
@settings(max_examples=30, deadline=None)
def test_near_identity_inverse(tail, order):
    u = MatSeries.identity(2) + tail.shift(1)
    inverse = series_inverse_near_identity(u, order)
    product = series_mul(u, inverse, order=order)
    assert product.first_difference(MatSeries.identity(2).truncate(order)) is None


@given(families(2, 2, max_degree=3), st.fractions(min_value=-3, max_value=3, max_denominator=5))
@settings(max_examples=30, deadline=None)
def test_recentering_roundtrip(family, shift):
    back = recenter(recenter(family, shift), -shift)
    assert back.first_difference(family) is None


def test_recentered_value_at_zero_is_value_at_shift(f2):
    assert recenter(f2, 1).coeff(0).equals(f2.evaluate(1))


def test_jet_reads_past_order_raise():
    jet = MatSeries.jet([Mat.eye(2), Mat.eye(2)], 1)
    with pytest.raises(InsufficientOrderError):
        jet.coeff(2)
    assert series_mul(jet, jet).order == 1


def test_polynomial_strips_trailing_zeros():
    family = MatSeries.polynomial([Mat.eye(2), Mat.zeros(2, 2)])
    assert family.degree == 0
    assert MatSeries.zero(2, 2).degree == -1


def test_jet_cannot_be_recentered_away_from_zero():
    with pytest.raises(InsufficientOrderError):
        recenter(MatSeries.jet([Mat.eye(1)], 0), 1)


def test_shape_mismatch_in_product():
    with pytest.raises(ShapeMismatchError):
        series_mul(MatSeries.identity(2), MatSeries.identity(3))


# --- LAURENT ---

def test_laurent_build_strips_vanishing_pole():
    series = LaurentSeries.build([Mat.zeros(1, 1), Mat.eye(1)], 1, 1, 1)
    assert series.pole_order == 0
    assert series.leading().equals(Mat.eye(1))


def test_laurent_product_and_evaluation():
    pole = LaurentSeries.build([Mat.eye(1)], 1, 1, 1)
    regular = LaurentSeries.from_series(MatSeries.polynomial([Mat.zeros(1, 1), Mat.eye(1)]))
    product = laurent_mul(pole, regular)
    assert product.pole_order == 0
    value, _ = pole.evaluate(EXACT.convert(Fraction(1, 2)))
    assert value.equals(Mat.from_rows([[2]]))
