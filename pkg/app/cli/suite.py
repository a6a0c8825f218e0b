"""
The --check switchboard shared by the commands that build transformations.
"""

import logging

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
from app.services.jordan_recursion import IdentityCheck
from app.services.transform_builder import DiagonalizationResult
from .reports import AnalysisReport

logger = logging.getLogger(__name__)


def oracle_available(result: DiagonalizationResult) -> bool:
    L = result.state.L
    return L.is_exact and L.field.is_exact


def run_full_suite(result: DiagonalizationResult, sample_points, report: AnalysisReport) -> None:
    """Oracle Smith, generalized-inverse axioms, families and the constant factorization."""
    state = result.state
    smith = smith_report(state, result.diagonal, result.psi)

    if oracle_available(result):
        oracle = oracle_smith_polynomial(state.L)
        report.oracle = oracle.to_dict()
        report.add_checks([compare_with_oracle(smith, oracle, state.m)])
    else:
        report.notes.append("Smith oracle skipped: it needs an exact polynomial family.")

    pinv = l_pinv_laurent(result.phi, result.diagonal, result.psi)
    report.add_checks([
        IdentityCheck("pole-order", check_pinv_leading(result, pinv), None, f"L⁻¹ has pole order k={state.k}")
    ])
    axioms = verify_ginverse_axioms(result, sample_points, pinv)
    skipped = [a for a in axioms.axioms if a.skipped]
    failing = [i for i, a in enumerate(axioms.axioms) if not a.passed]
    report.add_checks([
        IdentityCheck(
            "ginverse-axioms",
            axioms.passed,
            axioms.first_failure if axioms.first_failure is not None else (failing[0] if failing else None),
            f"L·X·L = L and X·L·X = X ({axioms.mode})",
        )
    ])
    report.notes += [f"Sample point {a.point} skipped: {a.note}" for a in skipped]

    families = projection_families(result.phi, result.psi, result.diagonal)
    report.add_checks(check_projection_families(families, result.diagonal))
    checks, notes = check_kernel_range_families(result, kernel_range_families(result.phi, result.psi, state), sample_points)
    report.add_checks(checks)
    report.notes += notes

    if smith.full_data is not None and oracle_available(result):
        checks, notes = check_constant_factorization(result, smith.full_data, sample_points)
        report.add_checks(checks)
        report.notes += notes
    logger.info(f"Verification suite: {sum(c.passed for c in report.checks)}/{len(report.checks)} passed")
