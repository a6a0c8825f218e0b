"""
Seeded random polynomial families up to 5x5 of degree 3, each taken through
the full pipeline: diagonalization with every identity check, the Smith
oracle, the generalized-inverse axioms and the kernel/range and projection
families.
"""

import pytest

from app.services.ginverse_smith import (
    check_constant_factorization,
    check_kernel_range_families,
    check_pinv_leading,
    check_projection_families,
    compare_with_oracle,
    kernel_range_families,
    l_pinv_laurent,
    oracle_smith_polynomial,
    projection_families,
    smith_report,
    verify_ginverse_axioms,
)
from app.services.transform_builder import diagonalize
from tests.families import random_family

SEEDS = range(100)
SAMPLES = ["1/7", "-1/5", "2", "3/4", "-3"]


def _failing(checks):
    return [c.name for c in checks if not c.passed]


@pytest.mark.parametrize("seed", SEEDS)
def test_random_family_through_the_full_pipeline(seed):
    family = random_family(seed, max_size=5, max_degree=3)
    result = diagonalize(family, check=True)
    assert _failing(result.checks) == []

    smith = smith_report(result.state, result.diagonal, result.psi)
    oracle = oracle_smith_polynomial(family)
    assert compare_with_oracle(smith, oracle, result.state.m).passed

    pinv = l_pinv_laurent(result.phi, result.diagonal, result.psi)
    assert check_pinv_leading(result, pinv)
    assert verify_ginverse_axioms(result, SAMPLES, pinv).passed

    families = projection_families(result.phi, result.psi, result.diagonal)
    assert _failing(check_projection_families(families, result.diagonal)) == []
    checks, _ = check_kernel_range_families(result, kernel_range_families(result.phi, result.psi, result.state), SAMPLES)
    assert _failing(checks) == []

    if smith.full_data is not None:
        checks, _ = check_constant_factorization(result, smith.full_data, SAMPLES)
        assert _failing(checks) == []
