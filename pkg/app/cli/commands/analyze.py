"""
analyze: run the kernel/range recursion and report stabilization.
"""

import logging

from app.services.ginverse_smith import certify_with_oracle, compare_with_oracle, oracle_smith_polynomial, smith_report
from app.services.jordan_recursion import (
    RecursionState,
    extend,
    lc_of,
    rank_of,
    run_identity_suite,
    run_until_stabilized,
    scan_centers,
)
from app.services.transform_builder import diagonal_form
from ..reports import AnalysisReport, OutputFormat, step_table
from ..runner import (
    AtOpt,
    BackendOpt,
    CheckOpt,
    FormatOpt,
    InputArg,
    KMaxOpt,
    OutOpt,
    RunContext,
    TolOpt,
    execute,
    resolve,
    split_list,
)

logger = logging.getLogger(__name__)

CHAIN_MARGIN = 2
# Justification: chains two steps past k+1 exercise the Toeplitz tail without
# making the block Toeplitz oracle noticeably larger.


def analyze(
    input_path: InputArg,
    k_max: KMaxOpt = None,
    at: AtOpt = None,
    backend: BackendOpt = None,
    tol: TolOpt = None,
    check: CheckOpt = False,
    fmt: FormatOpt = OutputFormat.TEXT,
    out: OutOpt = None,
) -> None:
    """Stabilization index, partial multiplicities and the step-by-step dimensions."""
    execute(
        "analyze",
        lambda: resolve("analyze", input_path, k_max=k_max, check=check, at=at, backend=backend, tol=tol, fmt=fmt, out=out, allow_scan=True),
        _run,
    )


def _checked_depth(state: RecursionState) -> RecursionState:
    target = state.k + 1 + CHAIN_MARGIN
    if not state.L.is_exact:
        target = min(target, state.L.order + 1)
    return extend(state, target)


def _basis_orders(state: RecursionState) -> list:
    """rk of each chosen N_j^c basis vector and lc of each R_j basis vector."""
    rows = []
    for j in range(1, state.k + 2):
        record = state.step_record(j)
        rows.append({
            "step": j,
            "rank": [rank_of(state, record.N_c.basis.column(c)) for c in range(record.N_c.dim)],
            "leading_order": [lc_of(state, record.R.basis.column(c)) for c in range(record.R.dim)],
        })
    return rows


def _run(ctx: RunContext, report: AnalysisReport) -> None:
    centers = split_list(ctx.center)
    if len(centers) > 1:
        report.centers = [r.to_dict() for r in scan_centers(ctx.L, centers, ctx.k_max)]
        return

    state = run_until_stabilized(ctx.L, ctx.k_max)
    if ctx.check:
        state = _checked_depth(state)
        report.add_checks(run_identity_suite(state))
        if ctx.L.is_exact and ctx.field.is_exact:
            oracle = oracle_smith_polynomial(ctx.L)
            report.oracle = oracle.to_dict()
            report.add_checks([compare_with_oracle(smith_report(state, diagonal_form(state)), oracle, state.m)])
            state = certify_with_oracle(state, oracle)
    report.stabilization = state.stabilization.to_dict()
    report.steps = step_table(state)
    report.basis_orders = _basis_orders(state)
