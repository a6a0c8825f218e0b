"""
oracle-smith: invariant factors of a polynomial matrix by elimination over K[ε].
"""

import logging

from app.services.ginverse_smith import compare_with_oracle, oracle_smith_polynomial, smith_report
from app.services.jordan_recursion import run_until_stabilized
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
    execute,
    resolve,
)

logger = logging.getLogger(__name__)


def oracle_smith(
    input_path: InputArg,
    k_max: KMaxOpt = None,
    at: AtOpt = None,
    backend: BackendOpt = None,
    check: CheckOpt = False,
    fmt: FormatOpt = OutputFormat.TEXT,
    out: OutOpt = None,
) -> None:
    """Smith normal form over K[ε]; --check compares it with the recursion."""
    execute(
        "oracle-smith",
        lambda: resolve("oracle-smith", input_path, k_max=k_max, check=check, at=at, backend=backend, fmt=fmt, out=out),
        _run,
    )


def _run(ctx: RunContext, report: AnalysisReport) -> None:
    oracle = oracle_smith_polynomial(ctx.L)
    report.oracle = oracle.to_dict()
    if not ctx.check:
        return
    state = run_until_stabilized(ctx.L, ctx.k_max)
    report.stabilization = state.stabilization.to_dict()
    report.steps = step_table(state)
    report.add_checks([compare_with_oracle(smith_report(state, diagonal_form(state)), oracle, state.m)])
