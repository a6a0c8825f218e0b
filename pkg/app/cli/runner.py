"""
Shared plumbing for the commands: option types, input resolution, error to
exit-code mapping and report emission.
"""

import logging
import time
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Annotated, Callable, List, Optional

import typer

from app.config import get_settings
from app.errors import (
    InputParseError,
    InternalConsistencyError,
    LocalSmithError,
    NonStabilizationError,
    VerificationError,
)
from app.services.core_algebra import MatSeries, ScalarField, recenter
from .documents import InputDocument, load_document
from .reports import FLOAT_BANNER, AnalysisReport, CheckEntry, OutputFormat, render, step_table

logger = logging.getLogger(__name__)


class ExitCode(int, Enum):
    OK = 0
    PARSE = 2
    NOT_STABILIZED = 3
    FAILURE = 4


class BackendChoice(str, Enum):
    EXACT = "exact"
    FLOAT = "float"


# --- OPTIONS ---

InputArg = Annotated[Path, typer.Argument(help="Input document (JSON)")]
OrderOpt = Annotated[Optional[int], typer.Option("--order", min=0, help="Expansion order N (default 2k+6)")]
KMaxOpt = Annotated[Optional[int], typer.Option("--k-max", min=1, help="Stabilization cap")]
CheckOpt = Annotated[bool, typer.Option("--check", help="Run the full verification suite")]
AtOpt = Annotated[Optional[str], typer.Option("--at", help="Expansion center (analyze accepts a comma list)")]
BackendOpt = Annotated[Optional[BackendChoice], typer.Option("--backend", help="exact or float")]
TolOpt = Annotated[Optional[float], typer.Option("--tol", help="Float backend tolerance")]
SampleOpt = Annotated[Optional[str], typer.Option("--sample", help="Comma-separated nonzero sample points")]
FormatOpt = Annotated[OutputFormat, typer.Option("--format", help="text or structured")]
OutOpt = Annotated[Optional[Path], typer.Option("--out", help="Write the report to this file")]


@dataclass
class RunContext:
    """Resolved inputs of one command: flags over document over environment."""

    command: str
    document: InputDocument
    field: ScalarField
    L: MatSeries
    order: Optional[int]
    k_max: int
    sample_points: List[str]
    check: bool
    center: Optional[str]
    fmt: OutputFormat
    out: Optional[Path]

    def new_report(self) -> AnalysisReport:
        return AnalysisReport(
            command=self.command,
            backend=self.field.backend.value,
            shape=[self.L.rows, self.L.cols],
            kind=self.L.kind.value,
            banner=None if self.field.is_exact else FLOAT_BANNER,
            center=self.center,
        )


def split_list(text: Optional[str]) -> List[str]:
    return [s.strip() for s in text.split(",") if s.strip()] if text else []


def resolve(
    command: str,
    input_path: Path,
    order: Optional[int] = None,
    k_max: Optional[int] = None,
    check: bool = False,
    at: Optional[str] = None,
    backend: Optional[BackendChoice] = None,
    tol: Optional[float] = None,
    sample: Optional[str] = None,
    fmt: OutputFormat = OutputFormat.TEXT,
    out: Optional[Path] = None,
    allow_scan: bool = False,
) -> RunContext:
    """
    Load the document and apply precedence.

    Raises:
        InputParseError: the document or a flag value cannot be parsed
    """
    settings = get_settings()
    document = load_document(input_path)
    if backend is not None:
        force_float = backend == BackendChoice.FLOAT
    elif "field" in document.model_fields_set:
        force_float = document.field == "float"
    else:
        force_float = settings.backend == BackendChoice.FLOAT.value
    field = document.scalar_field(force_float, tol or document.tolerance or settings.tolerance)
    L = document.to_series(field)
    center = at if at is not None else document.shift
    centers = split_list(center)
    if len(centers) > 1 and not allow_scan:
        raise InputParseError(f"{command} takes a single expansion center, got {center!r}.")
    if len(centers) == 1:
        L = recenter(L, centers[0])
    if not field.is_exact:
        logger.warning(FLOAT_BANNER)
    return RunContext(
        command=command,
        document=document,
        field=field,
        L=L,
        order=order if order is not None else document.order,
        k_max=k_max or document.k_max or settings.k_max,
        sample_points=split_list(sample) or document.sample_points or settings.sample_points,
        check=check,
        center=center,
        fmt=fmt,
        out=out,
    )


def emit(report: AnalysisReport, fmt: OutputFormat, out: Optional[Path]) -> None:
    text = render(report, fmt)
    if out is not None:
        out.write_text(text, encoding="utf-8")
    else:
        typer.echo(text, nl=False)


def execute(command: str, load: Callable[[], RunContext], body: Callable[[RunContext, AnalysisReport], None]) -> None:
    """
    Run one command and exit with its code.

    Service code raises; this is the only place failures become exit codes.
    """
    try:
        ctx = load()
    except LocalSmithError as e:
        logger.error(f"{command}: cannot read input: {e}", exc_info=True)
        typer.echo(f"error: {e}", err=True)
        raise typer.Exit(ExitCode.PARSE.value)

    report = ctx.new_report()
    started = time.perf_counter()
    try:
        body(ctx, report)
    except NonStabilizationError as e:
        logger.error(f"{command}: {e}", exc_info=True)
        if e.partial_state is not None:
            report.steps = step_table(e.partial_state)
        report.notes.append(str(e))
        emit(report, ctx.fmt, ctx.out)
        raise typer.Exit(ExitCode.NOT_STABILIZED.value)
    except VerificationError as e:
        logger.error(f"{command}: {e}", exc_info=True)
        report.checks.append(CheckEntry(name=e.check, passed=False, first_failure=e.first_failure, detail=str(e)))
        emit(report, ctx.fmt, ctx.out)
        raise typer.Exit(ExitCode.FAILURE.value)
    except InternalConsistencyError as e:
        logger.error(f"{command}: {e}", exc_info=True)
        report.notes.append(f"internal consistency failure: {e}")
        emit(report, ctx.fmt, ctx.out)
        raise typer.Exit(ExitCode.FAILURE.value)
    except LocalSmithError as e:
        logger.error(f"{command}: {e}", exc_info=True)
        typer.echo(f"error: {e}", err=True)
        raise typer.Exit(ExitCode.PARSE.value)
    report.timing["total"] = time.perf_counter() - started
    emit(report, ctx.fmt, ctx.out)
    if not report.passed:
        failed = [c.name for c in report.checks if not c.passed]
        logger.error(f"{command}: checks failed: {failed}")
        raise typer.Exit(ExitCode.FAILURE.value)
