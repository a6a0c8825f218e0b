"""
artin: Greenberg orders and, when the document carries a curve b(ε), its
exact solution and Artin-Rees split.
"""

import logging
from typing import Annotated, Optional

import typer

from app.errors import InsufficientOrderError
from app.services.artin_solver import (
    SolutionCurve,
    artin_approximate,
    artin_rees_decompose,
    greenberg,
    greenberg_minimal,
)
from app.services.jordan_recursion import IdentityCheck
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

LOpt = Annotated[Optional[int], typer.Option("--l", min=1, help="Agreement length (default: all the curve allows)")]
LevelsOpt = Annotated[int, typer.Option("--levels", min=1, help="Greenberg table covers l = 1..levels")]


def artin(
    input_path: InputArg,
    l: LOpt = None,
    levels: LevelsOpt = 3,
    order: OrderOpt = None,
    k_max: KMaxOpt = None,
    at: AtOpt = None,
    backend: BackendOpt = None,
    tol: TolOpt = None,
    check: CheckOpt = False,
    fmt: FormatOpt = OutputFormat.TEXT,
    out: OutOpt = None,
) -> None:
    """Greenberg function G(l) = k + l and Artin approximation of a given curve."""
    execute(
        "artin",
        lambda: resolve(
            "artin", input_path, order=order, k_max=k_max, check=check, at=at,
            backend=backend, tol=tol, fmt=fmt, out=out,
        ),
        lambda ctx, report: _run(ctx, report, l, levels),
    )


def _greenberg_table(state, phi, levels: int, notes) -> list:
    table = []
    for level in range(1, levels + 1):
        try:
            minimal = greenberg_minimal(state, phi, level)
        except InsufficientOrderError as e:
            notes.append(f"Minimal Greenberg order for l={level} skipped: {e}")
            minimal = None
        table.append({"l": level, "greenberg": greenberg(state, level), "minimal": minimal})
    return table


def _run(ctx: RunContext, report: AnalysisReport, l: Optional[int], levels: int) -> None:
    result = diagonalize(ctx.L, order=ctx.order, k_max=ctx.k_max, check=ctx.check)
    state = result.state
    report.stabilization = state.stabilization.to_dict()
    report.steps = step_table(state)
    report.add_checks(result.checks)
    report.notes += result.notes
    report.solutions = {"greenberg": _greenberg_table(state, result.phi, levels, report.notes)}

    coeffs = ctx.document.curve_coefficients(ctx.field)
    if not coeffs:
        return
    b = SolutionCurve.build(ctx.L, coeffs)
    exact = artin_approximate(b, state, result.phi, l)
    split = artin_rees_decompose(b, state, result.phi, l)
    report.solutions["curve"] = b.to_dict()
    report.solutions["exact_solution"] = exact.to_dict()
    report.solutions["artin_rees"] = split.to_dict()
    if not ctx.check:
        return

    disagree = [i for i in range(split.l) if not exact.coeffs[i].equals(b.coeffs[i])]
    report.add_checks([
        IdentityCheck(
            "artin-exact-solution",
            exact.is_exact_through_order,
            exact.residual_order,
            f"L·b̂ = 0 through order {exact.checked_through}",
        ),
        IdentityCheck(
            "artin-agreement",
            not disagree,
            disagree[0] if disagree else None,
            f"b̂ agrees with b in its first {split.l} coefficients",
        ),
    ])
