"""
Analysis reports and their text / structured renderings.
"""

import json
import logging
from enum import Enum
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field

from app.services.jordan_recursion import IdentityCheck, RecursionState

logger = logging.getLogger(__name__)

FLOAT_BANNER = (
    "FLOAT BACKEND: every rank decision is tolerance-dependent; "
    "results are not certified and may change with --tol."
)


class OutputFormat(str, Enum):
    TEXT = "text"
    STRUCTURED = "structured"


class CheckEntry(BaseModel):
    """One named verification."""

    name: str
    passed: bool
    first_failure: Optional[int] = Field(None, description="First failing coefficient or sample index")
    detail: str = ""

    @classmethod
    def from_check(cls, check: IdentityCheck) -> "CheckEntry":
        return cls(name=check.name, passed=check.passed, first_failure=check.first_failure, detail=check.detail)


class AnalysisReport(BaseModel):
    """Everything one command computed, in JSON-ready form (exact values as strings)."""

    command: str
    backend: str
    shape: List[int]
    kind: str
    banner: Optional[str] = None
    center: Optional[str] = None
    stabilization: Optional[Dict[str, Any]] = None
    steps: List[Dict[str, Any]] = Field(default_factory=list)
    basis_orders: Optional[List[Dict[str, Any]]] = None
    centers: Optional[List[Dict[str, Any]]] = None
    transforms: Optional[Dict[str, Any]] = None
    diagonal: Optional[Dict[str, Any]] = None
    laurent: Optional[Dict[str, Any]] = None
    families: Optional[Dict[str, Any]] = None
    smith: Optional[Dict[str, Any]] = None
    oracle: Optional[Dict[str, Any]] = None
    solutions: Optional[Dict[str, Any]] = None
    checks: List[CheckEntry] = Field(default_factory=list)
    notes: List[str] = Field(default_factory=list)
    timing: Dict[str, float] = Field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add_checks(self, checks: List[IdentityCheck]) -> None:
        self.checks.extend(CheckEntry.from_check(c) for c in checks)


def step_table(state: RecursionState) -> List[Dict[str, Any]]:
    """Per-step dimensions: N_i ⊇ N_(i+1) and R_i ⊕ R_i^c."""
    return [
        {
            "step": s.index,
            "dim_N": s.N.dim,
            "dim_N_complement": s.N_c.dim,
            "dim_R": s.R.dim,
            "dim_R_complement": s.R_c.dim,
        }
        for s in state.steps
    ]


# --- RENDERING ---

def render(report: AnalysisReport, fmt: OutputFormat) -> str:
    """
    Structured output is a single JSON document without timings, so identical
    runs give identical bytes; text output is for people.
    """
    if fmt == OutputFormat.STRUCTURED:
        return report.model_dump_json(indent=2, exclude={"timing"}, exclude_none=True) + "\n"
    return _render_text(report)


def _matrix_lines(rows: List[List[str]], indent: str) -> List[str]:
    if not rows:
        return [f"{indent}[]"]
    width = max((len(x) for row in rows for x in row), default=1)
    return [indent + "[ " + "  ".join(x.rjust(width) for x in row) + " ]" for row in rows]


def _series_lines(name: str, coeffs: List[List[List[str]]], indent: str = "  ") -> List[str]:
    lines = []
    for i, c in enumerate(coeffs):
        lines.append(f"{indent}{name}_{i} =")
        lines.extend(_matrix_lines(c, indent + "  "))
    return lines


def _render_text(report: AnalysisReport) -> str:
    out = []
    if report.banner:
        out += ["!" * 72, report.banner, "!" * 72]
    header = f"local-smith {report.command}: {report.shape[0]}x{report.shape[1]} {report.kind} over {report.backend}"
    if report.center:
        header += f", centered at {report.center}"
    out.append(header)

    if report.stabilization:
        s = report.stabilization
        out.append(f"k = {s['k']}  exponents = {s['exponents']}  dim N_(k+1) = {s['dim_kernel_limit']}")
        out.append(f"certified = {s['certified']} ({s['certification_method']})" + ("  [degenerate]" if s["degenerate"] else ""))
    if report.steps:
        out.append("step  dim N  dim N^c  dim R  dim R^c")
        for row in report.steps:
            out.append(
                f"{row['step']:>4}  {row['dim_N']:>5}  {row['dim_N_complement']:>7}  {row['dim_R']:>5}  {row['dim_R_complement']:>7}"
            )
    if report.basis_orders:
        out.append("step  rk of N^c basis  lc of R basis")
        for row in report.basis_orders:
            out.append(f"{row['step']:>4}  {row['rank']}  {row['leading_order']}")
    if report.centers:
        out.append("centers:")
        for c in report.centers:
            stab = c.get("stabilization") or {}
            out.append(f"  {c['center']}: k = {stab.get('k')}, exponents = {stab.get('exponents')}")
    if report.transforms:
        for name in ("phi", "psi"):
            t = report.transforms.get(name)
            if t:
                out.append(f"{name} ({t['provenance']}, valid through order {t['valid_order']}):")
                out += _series_lines(name, t["coefficients"])
    if report.diagonal:
        out.append(f"Δ(ε) exponents: {[p['exponent'] for p in report.diagonal['parts']]}")
        for p in report.diagonal["parts"]:
            out.append(f"  ε^{p['exponent']}: S =")
            out += _matrix_lines(p["S"], "    ")
    if report.laurent:
        out.append(f"L⁻¹(ε): pole order {report.laurent['pole_order']}, valid through ε^{report.laurent['valid_order']}")
        lowest = -report.laurent["pole_order"]
        for offset, c in enumerate(report.laurent["coefficients"]):
            out.append(f"  ε^{lowest + offset}:")
            out += _matrix_lines(c, "    ")
    if report.families:
        for name, coeffs in report.families.items():
            out.append(f"{name}:")
            out += _series_lines(name, coeffs)
    if report.smith:
        s = report.smith
        out.append(f"Smith: exponents {s['exponents']}, full = {s['full_smith']}, rank limit {s['rank_limit']}")
    if report.oracle:
        out.append(f"Oracle invariant factors: {report.oracle['invariant_factors']}")
        out.append(f"Oracle local exponents: {report.oracle['local_exponents']}")
    if report.solutions:
        for key, value in report.solutions.items():
            out.append(f"{key}: {json.dumps(value, ensure_ascii=False)}")
    if report.checks:
        out.append("checks:")
        for c in report.checks:
            status = "ok" if c.passed else f"FAILED at {c.first_failure}"
            out.append(f"  [{status}] {c.name}: {c.detail}")
    for note in report.notes:
        out.append(f"note: {note}")
    if report.timing:
        out.append("timing: " + ", ".join(f"{k} {v:.3f}s" for k, v in report.timing.items()))
    return "\n".join(out) + "\n"
