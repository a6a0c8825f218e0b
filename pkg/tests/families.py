"""
Matrix families shared by the test modules: the named fixtures and the
seeded random battery.
"""

import random
from typing import List, Sequence

from app.services.core_algebra import EXACT, Mat, MatSeries, ScalarField, series_mul


def poly(*coeffs, field: ScalarField = EXACT) -> MatSeries:
    """Polynomial family from nested lists L_0, L_1, …"""
    return MatSeries.polynomial([Mat.from_rows(c, field) for c in coeffs])


def shifted_jordan(n: int) -> MatSeries:
    """εI - J with J the nilpotent Jordan block of size n."""
    minus_j = [[-1 if c == r + 1 else 0 for c in range(n)] for r in range(n)]
    identity = [[1 if c == r else 0 for c in range(n)] for r in range(n)]
    return poly(minus_j, identity)


def diag_powers(exponents: Sequence[int]) -> MatSeries:
    """diag(ε^a_1, …, ε^a_n)."""
    n = len(exponents)
    top = max(exponents, default=0)
    coeffs = [
        [[1 if (r == c and exponents[r] == i) else 0 for c in range(n)] for r in range(n)]
        for i in range(top + 1)
    ]
    if n == 0:
        return MatSeries.zero(0, 0)
    return poly(*coeffs)


F1 = poly([[1]], [[1]])
F2 = poly([[0, -1], [0, 0]], [[1, 0], [0, 1]])
F3 = diag_powers([0, 2])
F4 = poly([[1, 0]], [[0, 1]])
F5 = poly([[1], [0]], [[0], [1]])

FIXTURES = {"F1": F1, "F2": F2, "F3": F3, "F4": F4, "F5": F5}
FIXTURE_EXPONENTS = {"F1": [0], "F2": [0, 2], "F3": [0, 2], "F4": [0], "F5": [0]}

ENTRIES = (-2, -1, 0, 0, 1, 2)


def _random_poly(rng: random.Random, rows: int, cols: int, degree: int) -> MatSeries:
    coeffs = [
        Mat.from_rows([[rng.choice(ENTRIES) for _ in range(cols)] for _ in range(rows)], EXACT, cols=cols)
        for _ in range(degree + 1)
    ]
    return MatSeries.polynomial(coeffs, rows, cols, EXACT)


def _unit_lower(rng: random.Random, n: int) -> Mat:
    return Mat.from_rows(
        [[1 if r == c else (rng.choice(ENTRIES) if c < r else 0) for c in range(n)] for r in range(n)],
        EXACT,
        cols=n,
    )


def random_family(seed: int, max_size: int = 4, max_degree: int = 3) -> MatSeries:
    """
    Seeded random polynomial family; about a third are products through a
    narrower middle dimension, so the generic rank drops.
    """
    rng = random.Random(seed)
    rows, cols = rng.randint(1, max_size), rng.randint(1, max_size)
    degree = rng.randint(0, max_degree)
    if rng.random() < 0.35:
        inner = rng.randint(1, min(rows, cols))
        left = _random_poly(rng, rows, inner, 1)
        right = _random_poly(rng, inner, cols, max(degree - 1, 0))
        return series_mul(left, right)
    return _random_poly(rng, rows, cols, degree)


def structured_family(seed: int, size: int = 3, max_exponent: int = 3):
    """
    U(ε)·diag(ε^a)·V(ε) with U(0), V(0) unit triangular, so the local
    exponents at ε = 0 are exactly a.

    Returns:
        (family, sorted exponents)
    """
    rng = random.Random(seed)
    exponents = sorted(rng.randint(0, max_exponent) for _ in range(size))
    u = MatSeries.polynomial([_unit_lower(rng, size), _random_poly(rng, size, size, 0).coeff(0)], size, size, EXACT)
    v = MatSeries.polynomial([_unit_lower(rng, size).T, _random_poly(rng, size, size, 0).coeff(0)], size, size, EXACT)
    return series_mul(series_mul(u, diag_powers(exponents)), v), exponents


def random_battery(count: int, **kwargs) -> List[MatSeries]:
    return [random_family(seed, **kwargs) for seed in range(count)]


def random_family_with_kernel(seed: int, max_size: int = 4, max_degree: int = 3) -> MatSeries:
    """
    random_family(seed)·[I | c] for a seeded constant column c, so that
    (c; -1) always solves L·b = 0 and N_(k+1) is nonzero.
    """
    family = random_family(seed, max_size, max_degree)
    rng = random.Random(10_000 + seed)
    n = family.cols
    c = Mat.column_vector([rng.choice(ENTRIES) for _ in range(n)])
    widen = Mat.hstack([Mat.eye(n), c], rows=n, field=EXACT)
    return series_mul(family, MatSeries.constant(widen))
