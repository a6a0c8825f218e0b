import logging
from typing import Optional, Sequence

from app.errors import SamplePointError
from app.services.core_algebra import LaurentSeries, laurent_mul
from app.services.transform_builder import DiagonalizationResult
from .inverse import l_pinv_laurent, point_values
from .models import AxiomCheck, GInverseReport

logger = logging.getLogger(__name__)


def verify_ginverse_axioms(
    result: DiagonalizationResult,
    sample_points: Sequence,
    pinv: Optional[LaurentSeries] = None,
) -> GInverseReport:
    """
    L·X·L = L and X·L·X = X for X = L⁻¹.

    Polynomial input is checked exactly at each nonzero sample point, with X
    the closed-form value φ(ε*)·Δ⁻¹(ε*)·ψ(ε*)⁻¹; points where an auxiliary
    denominator vanishes are skipped with a note. For jets both identities are
    compared coefficient by coefficient through the valid order of the
    Laurent expansion.

    Args:
        result: output of diagonalize()
        sample_points: nonzero points in L's field (polynomial input only)
        pinv: precomputed Laurent expansion of L⁻¹

    Returns:
        GInverseReport with one AxiomCheck per sample point
    """
    L = result.state.L
    if pinv is None:
        pinv = l_pinv_laurent(result.phi, result.diagonal, result.psi)
    report = GInverseReport(pole_order=pinv.pole_order)

    if not L.is_exact:
        report.mode = "coefficients"
        through = pinv.order
        Ls = LaurentSeries.from_series(L)
        lxl = laurent_mul(laurent_mul(Ls, pinv, through), Ls, through)
        xlx = laurent_mul(laurent_mul(pinv, Ls, through), pinv, through)
        first_lxl = lxl.first_difference(Ls, lxl.order)
        first_xlx = xlx.first_difference(pinv, xlx.order)
        failures = [f for f in (first_lxl, first_xlx) if f is not None]
        report.first_failure = min(failures) if failures else None
        report.axioms.append(AxiomCheck(point="formal", lxl=first_lxl is None, xlx=first_xlx is None))
        return report

    field = L.field
    for x in sample_points:
        label = field.format(field.convert(x))
        try:
            values = point_values(result, x)
        except SamplePointError as e:
            logger.warning(f"Sample point {label} skipped: {e}")
            report.axioms.append(AxiomCheck(point=label, note=str(e)))
            continue
        X, A = values.pinv, values.L
        check = AxiomCheck(point=label, lxl=(A @ X @ A).equals(A), xlx=(X @ A @ X).equals(X))
        if not check.passed:
            logger.warning(f"Generalized-inverse axioms fail at ε = {label}")
        report.axioms.append(check)
    logger.info(f"Generalized-inverse axioms: {sum(a.passed and not a.skipped for a in report.axioms)} points passed")
    return report
