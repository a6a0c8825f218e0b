"""
ginverse: the Laurent expansion of L⁻¹(ε), its projection families and the
local Smith data.
"""

import logging

from app.services.ginverse_smith import kernel_range_families, l_pinv_laurent, projection_families, smith_report
from app.services.transform_builder import diagonalize
from ..reports import AnalysisReport, OutputFormat, step_table
from ..runner import (
    AtOpt,
    BackendOpt,
    CheckOpt,
    FormatOpt,
    InputArg,
    KMaxOpt,
    OrderOpt,
    OutOpt,
    RunContext,
    SampleOpt,
    TolOpt,
    execute,
    resolve,
)
from ..suite import run_full_suite

logger = logging.getLogger(__name__)


def ginverse(
    input_path: InputArg,
    order: OrderOpt = None,
    k_max: KMaxOpt = None,
    at: AtOpt = None,
    backend: BackendOpt = None,
    tol: TolOpt = None,
    sample: SampleOpt = None,
    check: CheckOpt = False,
    fmt: FormatOpt = OutputFormat.TEXT,
    out: OutOpt = None,
) -> None:
    """Generalized inverse L⁻¹(ε) = φ·Δ⁻¹·ψ⁻¹ with pole order k."""
    execute(
        "ginverse",
        lambda: resolve(
            "ginverse", input_path, order=order, k_max=k_max, check=check, at=at,
            backend=backend, tol=tol, sample=sample, fmt=fmt, out=out,
        ),
        _run,
    )


def _run(ctx: RunContext, report: AnalysisReport) -> None:
    result = diagonalize(ctx.L, order=ctx.order, k_max=ctx.k_max, check=ctx.check)
    state = result.state
    report.stabilization = state.stabilization.to_dict()
    report.steps = step_table(state)
    report.add_checks(result.checks)
    report.notes += result.notes

    pinv = l_pinv_laurent(result.phi, result.diagonal, result.psi)
    report.laurent = {
        "pole_order": pinv.pole_order,
        "valid_order": pinv.order,
        "coefficients": pinv.to_strings(),
    }
    domain, target = projection_families(result.phi, result.psi, result.diagonal)
    report.families = {
        "domain_projection": domain.to_strings(),
        "target_projection": target.to_strings(),
        **kernel_range_families(result.phi, result.psi, state).to_dict(),
    }
    report.smith = smith_report(state, result.diagonal, result.psi).to_dict()
    if ctx.check:
        run_full_suite(result, ctx.sample_points, report)
