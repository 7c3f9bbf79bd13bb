"""
HeckMort - Lattice sum tests
"""

import math
from fractions import Fraction

import pytest

from engine_errors import NonterminatingEnumeration
from hecke import HeckeParams, f_abc
from lattice_sums import (
    Affine,
    EnumerationLimits,
    LatticeSum,
    Quadratic,
    Region,
    binom2,
    index_range,
    monomial_power,
    negative,
    restrict,
    sg2_regions,
    sign_sum_regions,
)
from series_core import QSeries, SignedMonomial
from theta import ThetaSpec, theta_j
from tests.series_helpers import fraction_monomial


def bilateral_theta(x: SignedMonomial) -> LatticeSum:
    """sum over all n of (-1)^n q^C(n,2) x^n as a one-index lattice sum"""
    (n,) = Affine.variables(1)
    exponent, factor = monomial_power(-x, n)
    return LatticeSum(
        exponent=binom2(n) + exponent,
        factors=(factor,),
        regions=(Region(Fraction(1), (n,)), Region(Fraction(1), (negative(n),))),
    )


def test_affine_and_quadratic_evaluation():
    r, s = Affine.variables(2)
    form = binom2(r + 1) + r * s * 2 - s
    assert form((3, 2)) == 6 + 12 - 2
    assert binom2(5) == 10
    assert (r - 2 * s + 1)((4, 1)) == 3


def test_sign_regions_cover_weights():
    r, s = Affine.variables(2)
    pieces = sign_sum_regions([r, s], Fraction(1, 2))
    # (sg(r) + sg(s))/2 vanishes on mixed quadrants
    assert sorted(p.weight for p in pieces) == [-1, 1]
    assert sg2_regions(r, s) == pieces


def test_one_dimensional_sum_matches_theta(q):
    x = fraction_monomial(1, 2)
    series = bilateral_theta(x).evaluate(20)
    assert series == theta_j(ThetaSpec(x, q), 20)


def test_restricted_range():
    (n,) = Affine.variables(1)
    lsum = LatticeSum(
        exponent=Quadratic.of(n),
        factors=(),
        regions=restrict((Region(Fraction(1), ()),), *index_range(n, 2, 5)),
    )
    assert lsum.evaluate(10) == QSeries({2: 1, 3: 1, 4: 1, 5: 1}, 10)


def test_scalar_multiplies_every_term():
    x = fraction_monomial(1, 3, -2)
    plain = bilateral_theta(x)
    doubled = LatticeSum(plain.exponent, plain.factors, plain.regions, scalar=Fraction(-3))
    assert doubled.evaluate(15) == plain.evaluate(15).scale(-3)


def test_doubled_limits_do_not_change_results(rng):
    for _ in range(10):
        a, c = (int(v) for v in rng.integers(1, 4, size=2))
        b = int(rng.integers(max(a, c) + 1, 6))
        x = fraction_monomial(int(rng.integers(-3, 6)), int(rng.integers(1, 4)))
        y = fraction_monomial(int(rng.integers(-3, 6)), int(rng.integers(1, 4)), -1)
        params = HeckeParams(a, b, c)
        base = f_abc(params, x, y, 15)
        assert f_abc(params, x, y, 15, EnumerationLimits().doubled()) == base


def test_step_cap_raises():
    r, s = Affine.variables(2)
    lsum = LatticeSum(
        exponent=binom2(r) + binom2(s) + r * s * 3,
        factors=(),
        regions=sg2_regions(r, s),
    )
    with pytest.raises(NonterminatingEnumeration):
        lsum.evaluate(200, EnumerationLimits(patience=3, max_steps=5))


def test_row_minima_cycling_with_the_inner_bound():
    # r + 3w >= 0 bounds w below by ceil(-r/3): going down in r the row minimum
    # w0^2 + (r + 3 w0) drops twice per cycle of three and rises at the wrap
    r, w = Affine.variables(2)
    lsum = LatticeSum(
        exponent=w * w + Quadratic.of(r + 3 * w),
        factors=(),
        regions=(Region(Fraction(1), (r + 3 * w,)),),
    )
    series = lsum.evaluate(12, EnumerationLimits(patience=3, max_steps=2000))
    # u = r + 3w >= 0 is free, so the sum is theta(q) / (1 - q)
    assert series == QSeries({k: 2 * math.isqrt(k) + 1 for k in range(12)}, 12)
