"""
solve: analytic solutions of L(ε)·b(ε) = 0, one generator φ(ε)·n̄ per basis
vector of N_(k+1).
"""

import logging

from app.services.artin_solver import flat_basis
from app.services.jordan_recursion import IdentityCheck, generic_rank
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
    TolOpt,
    execute,
    resolve,
)

logger = logging.getLogger(__name__)


def solve(
    input_path: InputArg,
    order: OrderOpt = None,
    k_max: KMaxOpt = None,
    at: AtOpt = None,
    backend: BackendOpt = None,
    tol: TolOpt = None,
    check: CheckOpt = False,
    fmt: FormatOpt = OutputFormat.TEXT,
    out: OutOpt = None,
) -> None:
    """Flat basis of the power-series solution module."""
    execute(
        "solve",
        lambda: resolve(
            "solve", input_path, order=order, k_max=k_max, check=check, at=at,
            backend=backend, tol=tol, fmt=fmt, out=out,
        ),
        _run,
    )


def _run(ctx: RunContext, report: AnalysisReport) -> None:
    result = diagonalize(ctx.L, order=ctx.order, k_max=ctx.k_max, check=ctx.check)
    state = result.state
    basis = flat_basis(state, result.phi)
    report.stabilization = state.stabilization.to_dict()
    report.steps = step_table(state)
    report.add_checks(result.checks)
    report.notes += result.notes
    report.solutions = {"dim_kernel_limit": len(basis), "flat_basis": basis.to_dict()}
    if not ctx.check:
        return

    open_residuals = [i for i, g in enumerate(basis.generators) if not g.is_exact_through_order]
    report.add_checks([
        IdentityCheck(
            "flat-basis-residual",
            not open_residuals,
            open_residuals[0] if open_residuals else None,
            f"L·φ·n̄ = 0 through order {basis.valid_order}",
        )
    ])
    rank = generic_rank(ctx.L)
    if rank is not None:
        report.add_checks([
            IdentityCheck(
                "flat-basis-count",
                len(basis) == state.m - rank,
                None,
                f"{len(basis)} generators, corank of L over K(ε) is {state.m - rank}",
            )
        ])
