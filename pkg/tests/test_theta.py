"""
HeckMort - Theta function tests
"""

from fractions import Fraction

import pytest

from series_core import QSeries, SignedMonomial, compare
from theta import (
    J,
    Jbar,
    Jm,
    ThetaSpec,
    ThetaVariant,
    j,
    theta_j,
    theta_j_product,
    theta_product_form,
    triple_product_check,
    vanishes,
)
from tests.series_helpers import fraction_monomial, series_of


def test_j_at_minus_one(q):
    assert j(-q ** 0, q, 7) == QSeries({0: 2, 1: 2, 3: 2, 6: 2}, 7)


def test_eta_quotient_is_euler_product():
    assert Jm(1, 13) == QSeries({0: 1, 1: -1, 2: -1, 5: 1, 7: 1, 12: -1}, 13)


def test_integral_powers_of_the_base_vanish(q):
    for k in (-3, 0, 1, 4):
        spec = ThetaSpec(q ** k, q)
        assert vanishes(spec)
        assert theta_j(spec, 10).is_empty
    assert not vanishes(ThetaSpec(-q, q))
    assert theta_j_product([ThetaSpec(q ** 2, q), ThetaSpec(-q, q)], 10).is_empty


def test_family_members_share_one_definition():
    assert J(2, 5, ThetaVariant.PLAIN, 20) == j(SignedMonomial.q(2), SignedMonomial.q(5), 20)
    assert Jbar(1, 4, 20) == j(SignedMonomial.q(1, -1), SignedMonomial.q(4), 20)
    assert Jm(3, 20) == j(SignedMonomial.q(3), SignedMonomial.q(9), 20)


def test_sum_form_matches_product_form(rng):
    for _ in range(100):
        den = int(rng.integers(1, 5))
        num = int(rng.integers(-3 * den, 3 * den + 1))
        coeff = int(rng.choice([-2, -1, 1, 2, 3]))
        base = SignedMonomial.q(int(rng.integers(1, 4)))
        spec = ThetaSpec(fraction_monomial(num, den, coeff), base)
        report = triple_product_check(spec, 25)
        assert report.verified, report.summary()


def test_reflection_symmetry(q):
    # j(x;q) = j(q/x;q)
    for x in (fraction_monomial(1, 3), fraction_monomial(-2, 5, 3), fraction_monomial(7, 4, -1)):
        assert compare(theta_j(ThetaSpec(x, q), 30), theta_j(ThetaSpec(q / x, q), 30)).verified


def test_quasi_periodicity(q):
    # j(qx;q) = -x^-1 j(x;q)
    x = fraction_monomial(2, 7, -3)
    shifted = theta_j(ThetaSpec(q * x, q), 30)
    scaled = theta_j(ThetaSpec(x, q), 31).shift(-x.inverse())
    assert compare(shifted, scaled).verified


def test_product_of_thetas(q):
    x, y = fraction_monomial(1, 2), fraction_monomial(1, 3, -1)
    product = theta_j_product([ThetaSpec(x, q), ThetaSpec(y, q)], 15)
    expected = theta_j(ThetaSpec(x, q), 16) * theta_j(ThetaSpec(y, q), 16)
    assert product.precision == 15
    assert compare(product, expected).verified


def test_product_form_alone(q):
    assert theta_product_form(ThetaSpec(-q ** 0, q), 7) == series_of([2, 2, 0, 2, 0, 0, 2], 7)


def test_base_must_have_positive_order():
    with pytest.raises(ValueError):
        ThetaSpec(SignedMonomial.q(1), SignedMonomial.q(0))
    with pytest.raises(ValueError):
        J(1, 0, ThetaVariant.PLAIN, 10)


def test_cross_check_rejects_negative_base():
    spec = ThetaSpec(SignedMonomial.q(Fraction(1, 2)), SignedMonomial.q(1, -1))
    with pytest.raises(ValueError):
        triple_product_check(spec, 10)


def test_product_form_at_full_order():
    # several negative-order factors from both x and q/x
    for x, base in (
        (fraction_monomial(-7, 3, -3), SignedMonomial.q(1)),
        (fraction_monomial(17, 6, 2), SignedMonomial.q(2)),
    ):
        report = triple_product_check(ThetaSpec(x, base), 200)
        assert report.verified, report.summary()
