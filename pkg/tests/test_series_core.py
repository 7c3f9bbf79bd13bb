"""
HeckMort - Series core tests
"""

from fractions import Fraction
import math

import pytest

from engine_errors import HalfPowerOfNegative, InsufficientPrecision, IrrationalPower
from series_core import (
    QSeries,
    SignedMonomial,
    VerificationStatus,
    binomial_product,
    compare,
    pow_monomial,
    product_at,
    quotient_at,
    rational_power,
    to_fraction,
)
from tests.series_helpers import random_series, series_of


def geometric(precision):
    return QSeries({k: 1 for k in range(math.ceil(precision))}, precision)


def test_geometric_inverse():
    one_minus_q = QSeries({0: 1, 1: -1}, 5)
    assert one_minus_q.invert() == series_of([1, 1, 1, 1, 1], 5)


def test_terms_beyond_precision_are_dropped():
    series = QSeries({0: 1, 4: 2, 5: 7}, 5)
    assert series.exponents() == [Fraction(0), Fraction(4)]
    with pytest.raises(InsufficientPrecision):
        series.coefficient(5)


def test_fractional_exponents_combine():
    half = QSeries({Fraction(1, 2): 1}, 3)
    assert half * half == QSeries({1: 1}, Fraction(7, 2))
    assert (half * half).common_denominator == 1


def test_negative_order_lowers_product_precision():
    product = QSeries({-1: 1}, 5) * QSeries({0: 1, 1: 1}, 5)
    assert product.precision == 4
    assert product == QSeries({-1: 1, 0: 1}, 4)


def test_shift_moves_horizon():
    shifted = series_of([1, 2], 4).shift(SignedMonomial.q(Fraction(1, 3), -2))
    assert shifted.precision == Fraction(13, 3)
    assert shifted.coefficient(Fraction(4, 3)) == -4


def test_ring_laws(rng):
    for _ in range(100):
        a, b, c = (random_series(rng, 8) for _ in range(3))
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert a * b == b * a


def test_inversion_law(rng):
    for _ in range(100):
        a = random_series(rng, 10)
        assert a * a.invert() == QSeries.one(10)


def test_integer_power_matches_repeated_product(rng):
    a = random_series(rng, 9)
    assert a ** 3 == a * a * a
    assert a ** -2 == (a * a).invert()


def test_substitute_q_power():
    assert series_of([1, -1], 4).substitute_q_power(3) == QSeries({0: 1, 3: -1}, 12)


def test_scalar_arithmetic():
    series = series_of([2, 4], 3)
    assert series / 2 == series_of([1, 2], 3)
    assert 1 - series == series_of([-1, -4], 3)


def test_rational_power():
    assert rational_power(Fraction(4, 9), Fraction(1, 2)) == Fraction(2, 3)
    assert rational_power(Fraction(-2), Fraction(3)) == -8
    with pytest.raises(HalfPowerOfNegative):
        rational_power(Fraction(-1), Fraction(1, 2))
    with pytest.raises(IrrationalPower):
        rational_power(Fraction(2), Fraction(1, 2))


def test_monomial_powers():
    m = SignedMonomial.q(Fraction(1, 2), 4)
    assert pow_monomial(m, Fraction(1, 2)) == SignedMonomial.q(Fraction(1, 4), 2)
    assert (m * m).exp == 1
    assert m.inverse() == SignedMonomial.q(Fraction(-1, 2), Fraction(1, 4))
    assert SignedMonomial.q(6).integral_log(SignedMonomial.q(2)) == 3
    assert SignedMonomial.q(3, -1).integral_log(SignedMonomial.q(1, -1)) == 3
    with pytest.raises(ValueError):
        SignedMonomial.q(1, 0)


def test_to_fraction_rejects_floats():
    assert to_fraction("3/4") == Fraction(3, 4)
    with pytest.raises(TypeError):
        to_fraction(0.5)


def test_product_at_rebuilds_factors_with_negative_orders():
    result = product_at(5, [lambda P: QSeries({-2: 1}, P), geometric])
    assert result.precision == 5
    assert result == QSeries({k: 1 for k in range(-2, 5)}, 5)


def test_quotient_at_divides_to_requested_precision():
    result = quotient_at(6, lambda P: QSeries.one(P), lambda P: QSeries({1: 1, 2: -1}, P))
    # 1/(q - q^2) = q^-1 (1 + q + q^2 + ...)
    assert result == QSeries({k: 1 for k in range(-1, 6)}, 6)


def test_quotient_by_zero_series_is_insufficient():
    with pytest.raises(InsufficientPrecision):
        quotient_at(4, lambda P: QSeries.one(P), lambda P: QSeries.zero(P))


def test_compare_reports_first_mismatch():
    report = compare(series_of([1, 0, 0, 2], 10), series_of([1, 0, 0, 5], 10), label="demo")
    assert report.status is VerificationStatus.MISMATCH
    assert report.first_mismatch.exponent == 3
    assert (report.first_mismatch.lhs, report.first_mismatch.rhs) == (2, 5)
    assert "demo" in report.summary()


def test_compare_is_inconclusive_below_required_order():
    report = compare(series_of([1], 10), series_of([1], 10), required=12)
    assert report.status is VerificationStatus.INCONCLUSIVE
    assert report.checked_to == 10


def test_compare_uses_the_lower_horizon():
    report = compare(series_of([1, 1], 3), QSeries({0: 1, 1: 1, 5: 9}, 8))
    assert report.verified
    assert report.checked_to == 3


def test_json_form_is_exact():
    series = QSeries({Fraction(-1, 3): Fraction(5, 7), 2: -1}, Fraction(9, 2))
    assert QSeries.from_json_obj(series.to_json_obj()) == series


EXPONENT_NUMERATORS = [k for k in range(-6, 13) if k != 0]


def direct_binomial_product(monomials, precision):
    low = sum(min(Fraction(0), m.exp) for m in monomials)
    working = precision - low
    product = QSeries.one(working)
    for m in monomials:
        product = product * (QSeries.one(working) - QSeries.monomial(m, working))
    return product.truncate(precision)


def test_binomial_product_with_negative_orders():
    monomials = [SignedMonomial.q(-2), SignedMonomial.q(1), SignedMonomial.q(Fraction(-1, 2), 3)]
    result = binomial_product(monomials, 4)
    assert result.precision == 4
    assert result == direct_binomial_product(monomials, Fraction(4))
    assert result.coefficient(Fraction(-5, 2)) == 3


def test_binomial_product_matches_direct_expansion(rng):
    for _ in range(100):
        monomials = [
            SignedMonomial.q(
                Fraction(int(rng.choice(EXPONENT_NUMERATORS)), int(rng.integers(1, 5))),
                Fraction(int(rng.choice([-3, -1, 1, 2])), int(rng.choice([1, 2]))),
            )
            for _ in range(int(rng.integers(0, 6)))
        ]
        precision = Fraction(int(rng.integers(1, 12)), int(rng.integers(1, 4)))
        assert binomial_product(monomials, precision) == direct_binomial_product(
            monomials, precision
        )


def test_binomial_product_constant_factor():
    assert binomial_product([SignedMonomial.q(0, 3)], 2) == QSeries({0: -2}, 2)
    assert binomial_product([SignedMonomial.q(-3)], -5) == QSeries.zero(-5)
