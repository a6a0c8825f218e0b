import math

import pytest

from app.errors import NonStabilizationError
from app.services.core_algebra import Mat, MatSeries, Subspace, kernel
from app.services.jordan_recursion import (
    CertificationMethod,
    extend,
    generic_rank,
    jordan_chain_basis,
    lc_of,
    rank_of,
    run_identity_suite,
    run_until_stabilized,
    scan_centers,
    solution_jet_space,
    toeplitz_system,
)
from app.services.jordan_recursion.queries import chains_as_matrix
from tests.families import FIXTURE_EXPONENTS, FIXTURES, diag_powers, shifted_jordan, structured_family


@pytest.mark.parametrize("name", sorted(FIXTURES))
def test_fixture_exponents(name):
    state = run_until_stabilized(FIXTURES[name])
    assert state.stabilization.exponents == FIXTURE_EXPONENTS[name]
    assert state.stabilization.certified


def test_f2_stabilizes_at_two(f2):
    report = run_until_stabilized(f2).stabilization
    assert report.k == 2
    assert report.exponent_multiplicities == (1, 0, 1)
    assert report.dim_kernel_limit == 0
    assert report.certification_method == CertificationMethod.EXHAUSTED_DEGREE_BOUND


def test_wide_family_keeps_a_kernel(f4):
    report = run_until_stabilized(f4).stabilization
    assert report.k == 0
    assert report.dim_kernel_limit == 1
    assert report.generic_rank == 1


def test_tall_family_keeps_a_cokernel(f5):
    state = run_until_stabilized(f5)
    assert state.stabilization.dim_range_limit == 1
    assert state.R_c(state.k + 1).dim == 1


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
def test_shifted_jordan_block(n):
    report = run_until_stabilized(shifted_jordan(n)).stabilization
    assert report.k == n
    assert report.exponents == [0] * (n - 1) + [n]


@pytest.mark.parametrize("exponents", [[0], [1], [0, 1, 3], [2, 2], [0, 0, 4]])
def test_diagonal_powers(exponents):
    report = run_until_stabilized(diag_powers(exponents)).stabilization
    assert report.exponents == sorted(exponents)
    assert report.k == max(exponents)


@pytest.mark.parametrize("seed", range(8))
def test_structured_families_recover_their_exponents(seed):
    family, exponents = structured_family(seed)
    assert run_until_stabilized(family).stabilization.exponents == exponents


def test_empty_family_is_degenerate():
    report = run_until_stabilized(MatSeries.zero(0, 0)).stabilization
    assert report.k == 0
    assert report.degenerate


def test_zero_family_is_degenerate():
    report = run_until_stabilized(MatSeries.zero(2, 3)).stabilization
    assert report.degenerate
    assert report.dim_kernel_limit == 3


def test_k_max_exceeded_carries_partial_state():
    with pytest.raises(NonStabilizationError) as info:
        run_until_stabilized(shifted_jordan(4), k_max=2)
    assert info.value.partial_state is not None
    assert info.value.partial_state.depth == 3


def test_jet_input_is_certified_through_its_order_only(f2):
    jet = f2.truncate(1)
    report = run_until_stabilized(jet).stabilization
    assert not report.certified
    assert report.certification_method == CertificationMethod.THROUGH_ORDER_ONLY


def test_jet_with_exhausted_kernel_keeps_through_order_label(f1):
    # L_0 invertible: N_1 = {0} from the first coefficient alone
    report = run_until_stabilized(f1.truncate(4)).stabilization
    assert report.k == 0
    assert report.certified
    assert report.certification_method == CertificationMethod.THROUGH_ORDER_ONLY


def test_generic_rank():
    assert generic_rank(FIXTURES["F4"]) == 1
    assert generic_rank(shifted_jordan(3)) == 3
    assert generic_rank(FIXTURES["F2"].truncate(2)) is None


# --- IDENTITIES ---

@pytest.mark.parametrize("name", sorted(FIXTURES))
def test_identity_suite_on_fixtures(name):
    state = run_until_stabilized(FIXTURES[name])
    state = extend(state, state.k + 3)
    checks = run_identity_suite(state)
    assert [c.name for c in checks if not c.passed] == []


@pytest.mark.parametrize("seed", range(6))
def test_identity_suite_on_structured_families(seed):
    family, _ = structured_family(seed)
    state = run_until_stabilized(family)
    assert all(c.passed for c in run_identity_suite(extend(state, state.k + 2)))


def test_nested_kernels(jordan3):
    state = extend(run_until_stabilized(jordan3), 6)
    for i in range(1, state.depth + 1):
        assert state.N(i - 1).contains_space(state.N(i))


# --- QUERIES ---

@pytest.mark.parametrize("length", [1, 2, 3, 4])
def test_chain_basis_spans_toeplitz_kernel(f2, length):
    state = extend(run_until_stabilized(f2), length)
    chains = jordan_chain_basis(state, length)
    built = Subspace.span(chains_as_matrix(chains, state.m, length, state.field))
    assert built.equals(kernel(toeplitz_system(f2, length)))


def test_solution_jet_space_layout(f4):
    jets = solution_jet_space(f4, 2)
    # (b_0; b_1) = ((0, 1); (-1, 0)) solves [1, ε]·b = O(ε²)
    assert jets.contains(Mat.from_rows([[0], [1], [-1], [0]]))


def test_rank_and_leading_coefficient_order(f2):
    state = run_until_stabilized(f2)
    e1 = Mat.from_rows([[1], [0]])
    e2 = Mat.from_rows([[0], [1]])
    assert rank_of(state, e1) == 2
    assert rank_of(state, e2) == 0
    assert rank_of(state, Mat.zeros(2, 1)) == math.inf
    assert lc_of(state, e1) == 0
    assert lc_of(state, e2) == 2


def test_center_scan_finds_the_singular_point(f2):
    reports = scan_centers(f2, ["0", "1", "-1/2"])
    assert [r.stabilization.k for r in reports] == [2, 0, 0]
    assert reports[2].center == "-1/2"
