"""
diagonalize: build φ(ε), ψ(ε) and the local Smith form Δ(ε) = ψ⁻¹·L·φ.
"""

import logging

from app.services.transform_builder import diagonalize as build_diagonalization
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


def diagonalize(
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
    """Transformations φ, ψ and the diagonal form, with the dual-path φ check."""
    execute(
        "diagonalize",
        lambda: resolve(
            "diagonalize", input_path, order=order, k_max=k_max, check=check, at=at,
            backend=backend, tol=tol, sample=sample, fmt=fmt, out=out,
        ),
        _run,
    )


def _run(ctx: RunContext, report: AnalysisReport) -> None:
    result = build_diagonalization(ctx.L, order=ctx.order, k_max=ctx.k_max, check=ctx.check)
    report.stabilization = result.state.stabilization.to_dict()
    report.steps = step_table(result.state)
    report.transforms = {"order": result.order, "phi": result.phi.to_dict(), "psi": result.psi.to_dict()}
    report.diagonal = result.diagonal.to_dict()
    report.add_checks(result.checks)
    report.notes += result.notes
    if ctx.check:
        run_full_suite(result, ctx.sample_points, report)
