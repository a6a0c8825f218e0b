import pytest

from app.errors import InsufficientOrderError
from app.services.core_algebra import Mat, series_inverse_near_identity, series_mul
from app.services.ginverse_smith import point_values
from app.services.jordan_recursion import extend, run_until_stabilized
from app.services.transform_builder import (
    Provenance,
    default_order,
    diagonal_form,
    diagonalize,
    expansion_orders,
    phi_from_defining_eq,
    phi_from_toeplitz,
    pre_transform,
    psi_build,
    triangular_check,
)
from tests.families import FIXTURES, shifted_jordan, structured_family


def test_invertible_scalar_family(f1):
    result = diagonalize(f1)
    assert result.diagonal.exponents == [0]
    assert result.diagonal.parts[0].S.equals(Mat.from_rows([[1]]))
    assert [c.to_strings() for c in result.phi.series.coefficients(3)] == [[["1"]], [["-1"]], [["1"]], [["-1"]]]
    assert result.passed


def test_default_orders(f2):
    assert default_order(0) == 6
    assert expansion_orders(f2, 2, None) == (10, 12)
    assert expansion_orders(f2.truncate(12), 2, None) == (8, 10)
    result = diagonalize(f2)
    assert result.order == 10
    assert result.phi.valid_order == 12
    assert result.psi.valid_order == 10
    assert result.psi.provenance == Provenance.LEFT_FACTOR


def test_requested_order(f2):
    result = diagonalize(f2, order=4)
    assert result.psi.valid_order == 4
    assert result.phi.valid_order == 6


@pytest.mark.parametrize("name", sorted(FIXTURES))
def test_full_check_suite_on_fixtures(name):
    result = diagonalize(FIXTURES[name], check=True)
    assert [c.name for c in result.checks if not c.passed] == []
    assert result.phi_defining is not None


@pytest.mark.parametrize("n", [2, 3, 4])
def test_full_check_suite_on_jordan_blocks(n):
    assert diagonalize(shifted_jordan(n), check=True).passed


@pytest.mark.parametrize("seed", range(30))
def test_structured_battery(seed):
    family, exponents = structured_family(seed)
    result = diagonalize(family, check=True)
    assert [c.name for c in result.checks if not c.passed] == []
    assert result.state.stabilization.exponents == exponents


def test_dual_path_phi_agrees(jordan3):
    state = run_until_stabilized(jordan3)
    state = extend(state, state.k + 1 + 8)
    toeplitz = phi_from_toeplitz(state, 8)
    defining, data = phi_from_defining_eq(state, 8)
    assert toeplitz.series.first_difference(defining.series) is None
    assert data.residual().first_nonzero() is None


def test_diagonal_identity_by_hand(f2):
    result = diagonalize(f2)
    through = result.order
    psi_inv = series_inverse_near_identity(result.psi.series, through)
    lhs = series_mul(series_mul(psi_inv, f2, order=through), result.phi.series, order=through)
    assert lhs.first_difference(result.diagonal.series(), through) is None


def test_psi_needs_enough_of_s(f2):
    state = run_until_stabilized(f2)
    state = extend(state, state.k + 1 + 3)
    phi = phi_from_toeplitz(state, 3)
    S = series_mul(f2, phi.series, order=3)
    with pytest.raises(InsufficientOrderError):
        psi_build(state, S, 4)


def test_short_jet_cannot_carry_transformations(f2):
    with pytest.raises(InsufficientOrderError):
        diagonalize(f2.truncate(3))


def test_jet_input_diagonalizes_through_its_order(f2):
    result = diagonalize(f2.truncate(12), check=True)
    assert result.order == 8
    assert result.passed


def test_pre_transform_triangular_structure(f2):
    state = run_until_stabilized(f2)
    p = pre_transform(state)
    assert p.k == 2
    assert all(c.passed for c in triangular_check(f2, p, state))


def test_diagonal_form_projectors_partition_domain(f4):
    state = run_until_stabilized(f4)
    diagonal = diagonal_form(state)
    total = diagonal.P_ker
    for part in diagonal.parts:
        total = total + part.P
    assert total.equals(Mat.eye(2))


def test_closed_form_values_satisfy_the_diagonal_identity(f2):
    result = diagonalize(f2)
    for x in ("1/7", "-1/5", "2"):
        values = point_values(result, x)
        assert (values.psi.inv() @ values.L @ values.phi).equals(values.delta)
