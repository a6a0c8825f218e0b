import pytest
import sympy
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.normalforms import invariant_factors

from app.errors import InsufficientOrderError, SamplePointError
from app.services.core_algebra import Mat
from app.services.ginverse_smith import (
    check_constant_factorization,
    check_kernel_range_families,
    check_pinv_leading,
    check_projection_families,
    certify_with_oracle,
    compare_with_oracle,
    delta_pinv,
    kernel_range_families,
    l_pinv_laurent,
    oracle_smith_polynomial,
    point_values,
    projection_families,
    smith_diagonal,
    smith_report,
    verify_ginverse_axioms,
)
from app.services.jordan_recursion import EPS, CertificationMethod, polynomial_entries, run_until_stabilized
from app.services.transform_builder import diagonal_form, diagonalize
from tests.families import F1, F2, F3, FIXTURES, diag_powers, shifted_jordan, structured_family

SAMPLES = ["1/7", "-1/5", "2"]


# --- LAURENT EXPANSION ---

def test_inverse_of_invertible_scalar_family(f1):
    result = diagonalize(f1)
    pinv = l_pinv_laurent(result.phi, result.diagonal, result.psi)
    assert pinv.pole_order == 0
    assert [pinv.coeff(e).to_strings() for e in range(3)] == [[["1"]], [["-1"]], [["1"]]]


def test_inverse_of_shifted_jordan_block(f2):
    # L⁻¹ = [[1/ε, 1/ε²], [0, 1/ε]]
    result = diagonalize(f2)
    pinv = l_pinv_laurent(result.phi, result.diagonal, result.psi)
    assert pinv.pole_order == 2
    assert pinv.coeff(-2).equals(Mat.from_rows([[0, 1], [0, 0]]))
    assert pinv.coeff(-1).equals(Mat.eye(2))
    for e in range(0, pinv.order + 1):
        assert pinv.coeff(e).is_zero()
    assert check_pinv_leading(result, pinv)


def test_delta_inverse_of_diagonal_powers(f3):
    result = diagonalize(f3)
    inverse = delta_pinv(result.diagonal)
    assert inverse.pole_order == 2
    assert inverse.coeff(-2).equals(Mat.from_rows([[0, 0], [0, 1]]))
    assert inverse.coeff(0).equals(Mat.from_rows([[1, 0], [0, 0]]))


def test_requested_order_beyond_transforms_raises(f2):
    result = diagonalize(f2, order=4)
    with pytest.raises(InsufficientOrderError):
        l_pinv_laurent(result.phi, result.diagonal, result.psi, order=10)


# --- AXIOMS ---

@pytest.mark.parametrize("name", sorted(FIXTURES))
def test_axioms_at_sample_points(name):
    report = verify_ginverse_axioms(diagonalize(FIXTURES[name]), SAMPLES)
    assert report.mode == "sample-points"
    assert report.passed


def test_axioms_on_jets_compare_coefficients(f4):
    report = verify_ginverse_axioms(diagonalize(f4.truncate(8)), SAMPLES)
    assert report.mode == "coefficients"
    assert report.passed


def test_zero_sample_point_is_skipped(f2):
    report = verify_ginverse_axioms(diagonalize(f2), ["0", "1/3"])
    assert report.axioms[0].skipped
    assert report.axioms[1].lxl and report.axioms[1].xlx
    assert report.passed


def test_point_values_reject_zero(f2):
    with pytest.raises(SamplePointError):
        point_values(diagonalize(f2), 0)


def test_point_values_reject_jets(f2):
    with pytest.raises(InsufficientOrderError):
        point_values(diagonalize(f2.truncate(12)), "1/2")


@pytest.mark.parametrize("seed", range(30))
def test_axioms_on_structured_battery(seed):
    family, _ = structured_family(seed)
    assert verify_ginverse_axioms(diagonalize(family), SAMPLES).passed


# --- FAMILIES ---

@pytest.mark.parametrize("name", ["F2", "F4", "F5"])
def test_projection_families(name):
    result = diagonalize(FIXTURES[name])
    families = projection_families(result.phi, result.psi, result.diagonal)
    assert all(c.passed for c in check_projection_families(families, result.diagonal))


@pytest.mark.parametrize("name", ["F2", "F4", "F5"])
def test_kernel_and_range_families(name):
    result = diagonalize(FIXTURES[name])
    families = kernel_range_families(result.phi, result.psi, result.state)
    checks, _ = check_kernel_range_families(result, families, SAMPLES)
    assert all(c.passed for c in checks)


def test_kernel_family_of_wide_family_is_annihilated(f4):
    result = diagonalize(f4)
    families = kernel_range_families(result.phi, result.psi, result.state)
    assert families.kernel.cols == 1
    assert families.kernel.coeff(0).equals(Mat.from_rows([[0], [1]]))
    assert families.kernel.coeff(1).equals(Mat.from_rows([[-1], [0]]))


# --- SMITH DATA ---

def test_full_smith_factorization(f2):
    result = diagonalize(f2)
    report = smith_report(result.state, result.diagonal, result.psi)
    assert report.full_smith
    assert report.exponents == [0, 2]
    checks, _ = check_constant_factorization(result, report.full_data, SAMPLES)
    assert all(c.passed for c in checks)


@pytest.mark.parametrize("name", ["F4", "F5"])
def test_rectangular_families_are_not_full(name):
    result = diagonalize(FIXTURES[name])
    report = smith_report(result.state, result.diagonal, result.psi)
    assert not report.full_smith
    assert report.full_data is None


# --- ORACLE ---

def test_oracle_on_shifted_jordan_block():
    oracle = oracle_smith_polynomial(shifted_jordan(3))
    assert [sympy.simplify(f - g) for f, g in zip(oracle.invariant_factors, [1, 1, EPS**3])] == [0, 0, 0]
    assert oracle.exponents == [0, 0, 3]
    assert oracle.rank == 3


def test_oracle_on_wide_family(f4):
    oracle = oracle_smith_polynomial(f4)
    assert oracle.rank == 1
    assert oracle.exponents == [0]


def test_oracle_rejects_jets(f2):
    with pytest.raises(InsufficientOrderError):
        oracle_smith_polynomial(f2.truncate(4))


def _agrees_with_oracle(family) -> bool:
    state = run_until_stabilized(family)
    oracle = oracle_smith_polynomial(family)
    return compare_with_oracle(smith_report(state, diagonal_form(state)), oracle, state.m).passed


@pytest.mark.parametrize("exponents", [[0, 1], [1, 1, 2], [0, 3, 3], [2, 0, 1, 4]])
def test_oracle_agreement_on_diagonal_powers(exponents):
    assert _agrees_with_oracle(diag_powers(exponents))


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
def test_oracle_agreement_on_jordan_blocks(n):
    assert _agrees_with_oracle(shifted_jordan(n))


def test_oracle_certification(f2):
    state = run_until_stabilized(f2)
    certified = certify_with_oracle(state, oracle_smith_polynomial(f2))
    assert certified.stabilization.certification_method == CertificationMethod.ORACLE_SMITH


SQUARE_FAMILIES = [F1, F2, F3, shifted_jordan(3), shifted_jordan(4), diag_powers([1, 1, 3])] + [
    structured_family(seed)[0] for seed in range(5)
]


@pytest.mark.parametrize("family", SQUARE_FAMILIES)
def test_smith_diagonal_matches_sympy_invariant_factors(family):
    ring, rows = polynomial_entries(family)
    factors, _ = smith_diagonal(rows, ring)
    expected = invariant_factors(DomainMatrix(rows, (family.rows, family.cols), ring))
    assert factors == [f.monic() for f in expected if f]
