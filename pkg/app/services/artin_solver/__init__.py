"""
Artin solver - power-series solutions of L(ε)·b(ε) = 0: parametrization by
N_(k+1), the flat analytic basis, strong approximation of approximate
solutions, the Greenberg order and the Artin-Rees split.
"""

from .models import ArtinReesSplit, FlatBasis, SolutionCurve
from .solver import (
    artin_approximate,
    artin_rees_decompose,
    extendable_jets,
    flat_basis,
    greenberg,
    greenberg_minimal,
    parametrize_solution,
    truncation_solution,
)

__all__ = [
    "SolutionCurve",
    "FlatBasis",
    "ArtinReesSplit",
    "parametrize_solution",
    "flat_basis",
    "artin_approximate",
    "greenberg",
    "greenberg_minimal",
    "artin_rees_decompose",
    "truncation_solution",
    "extendable_jets",
]
