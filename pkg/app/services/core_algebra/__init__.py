"""
Core algebra - exact scalars, dense matrices, matrix power series, Laurent
series and subspace arithmetic shared by every other service.
"""

from .scalars import EXACT, Backend, ScalarField
from .matrix import Mat
from .series import MatSeries, SeriesKind, recenter, section, series_block, series_inverse_near_identity, series_mul
from .laurent import LaurentSeries, laurent_mul
from .subspace import Decomposition, Subspace, build_decomposition, complement_in, kernel, range_of

__all__ = [
    "Backend",
    "ScalarField",
    "EXACT",
    "Mat",
    "MatSeries",
    "SeriesKind",
    "series_mul",
    "series_inverse_near_identity",
    "recenter",
    "section",
    "series_block",
    "LaurentSeries",
    "laurent_mul",
    "Subspace",
    "Decomposition",
    "kernel",
    "range_of",
    "complement_in",
    "build_decomposition",
]
