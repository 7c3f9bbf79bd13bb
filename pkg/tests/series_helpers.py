"""
HeckMort - Test helpers for building series and monomials
"""

from fractions import Fraction
from typing import Sequence

import numpy as np

from series_core import QSeries, SignedMonomial


def random_series(rng: np.random.Generator, precision: int, unit: bool = True) -> QSeries:
    """Integer-coefficient series with a nonzero constant term when unit is set"""
    coeffs = rng.integers(-3, 4, size=precision)
    if unit and coeffs[0] == 0:
        coeffs[0] = 1
    return QSeries({k: int(c) for k, c in enumerate(coeffs)}, precision)


def series_of(coeffs: Sequence[int], precision: int) -> QSeries:
    """Series from a list of coefficients starting at q^0"""
    return QSeries({k: c for k, c in enumerate(coeffs)}, precision)


def fraction_monomial(num: int, den: int, coeff: int = 1) -> SignedMonomial:
    return SignedMonomial.q(Fraction(num, den), coeff)
