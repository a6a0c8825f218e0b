import random

import pytest

from app.errors import ContainmentError, NotASolutionError, ShapeMismatchError
from app.services.artin_solver import (
    SolutionCurve,
    artin_approximate,
    artin_rees_decompose,
    extendable_jets,
    flat_basis,
    greenberg,
    greenberg_minimal,
    parametrize_solution,
    truncation_solution,
)
from app.services.core_algebra import Mat, Subspace, series_mul
from app.services.jordan_recursion import solution_jet_space
from app.services.transform_builder import diagonalize
from tests.families import ENTRIES, poly, random_family_with_kernel

# [ε, ε²]: k = 1 with a one-dimensional kernel (-ε·t, t)
WIDE = poly([[0, 0]], [[1, 0]], [[0, 1]])


def vec(*values):
    return Mat.column_vector(values)


@pytest.fixture
def wide():
    return diagonalize(WIDE)


@pytest.fixture
def near_solution():
    # L·b = 5·ε³, so the stored coefficients solve through ε²
    return SolutionCurve.build(WIDE, [vec(0, 1), vec(-1, 0), vec(5, 7)])


def test_wide_family_stabilizes_at_one(wide):
    assert wide.state.k == 1
    assert wide.state.N(2).dim == 1


def test_flat_basis(f4):
    result = diagonalize(f4)
    basis = flat_basis(result.state, result.phi)
    assert len(basis) == 1
    generator = basis.generators[0]
    assert generator.is_exact_through_order
    assert generator.coeffs[0].equals(vec(0, 1))
    assert generator.coeffs[1].equals(vec(-1, 0))


def test_parametrize_flat_generator(f4):
    result = diagonalize(f4)
    generator = flat_basis(result.state, result.phi).generators[0]
    params = parametrize_solution(generator, result.phi, result.state)
    assert params[0].equals(vec(0, 1))
    assert all(p.is_zero() for p in params[1:])


def test_parametrize_rejects_non_solutions(f4):
    result = diagonalize(f4)
    b = SolutionCurve.build(f4, [vec(1, 0)])
    assert b.residual_order == 0
    with pytest.raises(NotASolutionError):
        parametrize_solution(b, result.phi, result.state)


def test_residual_order(near_solution):
    assert near_solution.residual_order is None
    assert near_solution.checked_through == 2
    assert near_solution.approximation_order == 3


def test_artin_approximation(wide, near_solution):
    exact = artin_approximate(near_solution, wide.state, wide.phi)
    assert exact.is_exact_through_order
    assert exact.coeffs[0].equals(vec(0, 1))
    assert exact.coeffs[1].equals(vec(-1, 0))


def test_artin_needs_order_above_k(f2):
    result = diagonalize(f2)
    # L·(1, ε) = (0, ε²): order 2 = k carries nothing
    b = SolutionCurve.build(f2, [vec(1, 0), vec(0, 1), vec(0, 0)])
    with pytest.raises(NotASolutionError):
        artin_approximate(b, result.state, result.phi)


def test_agreement_longer_than_the_curve_allows(wide, near_solution):
    with pytest.raises(NotASolutionError):
        artin_approximate(near_solution, wide.state, wide.phi, l=5)


def test_artin_rees_split(wide, near_solution):
    split = artin_rees_decompose(near_solution, wide.state, wide.phi, l=2)
    assert split.l == 2
    assert split.approximation.is_exact_through_order
    # b = b̂ + ε²·b₀ term by term
    for i, c in enumerate(near_solution.coeffs):
        tail = split.remainder.coeffs[i - 2] if 2 <= i < 2 + split.remainder.order else Mat.zeros(2, 1)
        assert c.equals(split.approximation.coeffs[i] + tail)


def test_greenberg_orders(wide):
    assert greenberg(wide.state, 1) == 2
    assert greenberg(wide.state, 3) == 4
    assert greenberg_minimal(wide.state, wide.phi, 1) == 2
    with pytest.raises(ValueError):
        greenberg(wide.state, 0)


def test_extendable_jets_dimension(wide):
    assert extendable_jets(wide.state, wide.phi, 3).dim == 3
    assert extendable_jets(wide.state, wide.phi, 0).dim == 0


def test_truncation_solution(wide):
    n = wide.state.N(2).basis.column(0)
    b = truncation_solution([n, n], 1, wide.phi, wide.state)
    assert b.is_exact_through_order
    assert b.coeffs[0].equals(n)


def test_truncation_solution_rejects_parameters_outside_the_kernel(wide):
    with pytest.raises(ContainmentError):
        truncation_solution([vec(1, 0)], 0, wide.phi, wide.state)


def test_curve_shape_is_checked():
    with pytest.raises(ShapeMismatchError):
        SolutionCurve.build(WIDE, [vec(1, 2, 3)])
    with pytest.raises(ShapeMismatchError):
        SolutionCurve.build(WIDE, [])


def test_flat_generators_are_annihilated_exactly(wide):
    basis = flat_basis(wide.state, wide.phi)
    for generator in basis.generators:
        product = series_mul(WIDE, generator.as_series(), order=basis.valid_order)
        assert product.first_nonzero() is None


def test_artin_keeps_parameters_past_l(wide):
    n = wide.state.N(2).basis.column(0)
    full = truncation_solution([n, n], 1, wide.phi, wide.state)
    b = SolutionCurve.build(WIDE, full.coeffs[:3])
    greedy = artin_approximate(b, wide.state, wide.phi, l=1)
    single = truncation_solution([n], 0, wide.phi, wide.state)
    assert greedy.coeffs[1].equals(b.coeffs[1])
    assert not single.coeffs[1].equals(b.coeffs[1])


# --- RANDOM BATTERY ---

def _combination(rng: random.Random, basis: Mat) -> Mat:
    weights = Mat.column_vector([rng.choice(ENTRIES) for _ in range(basis.cols)])
    return basis @ weights


@pytest.mark.parametrize("l", [1, 2, 3])
@pytest.mark.parametrize("seed", range(30))
def test_artin_approximation_of_random_jets(seed, l):
    family = random_family_with_kernel(seed)
    result = diagonalize(family)
    k, m = result.state.k, result.state.m
    jets = solution_jet_space(family, k + l).basis
    b = SolutionCurve.build(family, _combination(random.Random(seed * 7 + l), jets).split_rows(m))
    assert b.approximation_order == k + l

    exact = artin_approximate(b, result.state, result.phi, l=l)
    assert exact.is_exact_through_order
    for i in range(l):
        assert exact.coeffs[i].equals(b.coeffs[i])
    split = artin_rees_decompose(b, result.state, result.phi, l=l)
    assert split.approximation.is_exact_through_order


@pytest.mark.parametrize("seed", range(20))
def test_parametrization_recovers_random_parameters(seed):
    family = random_family_with_kernel(seed)
    result = diagonalize(family)
    state = result.state
    rng = random.Random(seed)
    basis = state.N(state.k + 1).basis
    params = [_combination(rng, basis) for _ in range(3)]
    b = truncation_solution(params, 2, result.phi, state)

    recovered = parametrize_solution(b, result.phi, state)
    assert len(recovered) >= 3
    for given, found in zip(params, recovered):
        assert found.equals(given)
    assert all(p.is_zero() for p in recovered[3:])


@pytest.mark.parametrize("l", [1, 2, 3])
@pytest.mark.parametrize("seed", range(20))
def test_extendable_jets_match_leading_blocks_of_approximations(seed, l):
    family = random_family_with_kernel(seed)
    result = diagonalize(family)
    k, m = result.state.k, result.state.m
    extendable = extendable_jets(result.state, result.phi, l)
    approximations = solution_jet_space(family, k + l).basis
    assert extendable.equals(Subspace.span(approximations.row_range(0, m * l)))
    for generator in flat_basis(result.state, result.phi).generators:
        assert extendable.contains(Mat.vstack(list(generator.coeffs[:l])))
