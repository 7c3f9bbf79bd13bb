"""
HeckMort - Appell-Lerch sum tests
"""

from fractions import Fraction

import pytest

from appell import (
    AppellSpec,
    appell_m,
    lemma_expansion_A,
    lemma_expansion_B,
    normalized_appell,
    verify_expansion,
)
from engine_errors import PoleAtSpecialization, WindowViolation
from series_core import SignedMonomial, compare
from tests.series_helpers import fraction_monomial


@pytest.mark.parametrize(
    "x, z",
    [
        (fraction_monomial(1, 2), fraction_monomial(3, 1)),
        (fraction_monomial(1, 2), fraction_monomial(1, 2)),
        (fraction_monomial(-5, 3), fraction_monomial(2, 3)),
    ],
)
def test_poles_are_rejected(x, q, z):
    with pytest.raises(PoleAtSpecialization):
        appell_m(AppellSpec(x, q, z), 10)


def test_z_shift_invariance(q):
    # m(x,q,qz) = m(x,q,z)
    x, z = fraction_monomial(1, 3), fraction_monomial(1, 5, -1)
    assert compare(
        appell_m(AppellSpec(x, q, q * z), 20), appell_m(AppellSpec(x, q, z), 20)
    ).verified


def test_x_shift_relation(q):
    # m(qx,q,z) = 1 - x m(x,q,z)
    x, z = fraction_monomial(1, 3), fraction_monomial(1, 5, -1)
    lhs = appell_m(AppellSpec(q * x, q, z), 20)
    rhs = 1 - appell_m(AppellSpec(x, q, z), 20).shift(x)
    report = compare(lhs, rhs, required=20)
    assert report.verified, report.summary()


@pytest.mark.parametrize("coeff", [1, -1, 2])
def test_expansion_in_positive_window(coeff):
    for num, den in ((1, 2), (1, 3), (2, 3), (3, 7)):
        x = fraction_monomial(num, den, coeff)
        report = verify_expansion(x, 25)
        assert report.verified, report.summary()


@pytest.mark.parametrize("coeff", [1, -1, 2])
def test_expansion_in_negative_window(coeff):
    for num, den in ((-1, 2), (-1, 3), (-2, 3), (-4, 7)):
        x = fraction_monomial(num, den, coeff)
        report = verify_expansion(x, 25)
        assert report.verified, report.summary()


def test_expansions_agree_only_where_they_apply():
    with pytest.raises(WindowViolation):
        lemma_expansion_A(fraction_monomial(3, 2), 10)
    with pytest.raises(WindowViolation):
        lemma_expansion_A(fraction_monomial(-1, 2), 10)
    with pytest.raises(WindowViolation):
        lemma_expansion_B(fraction_monomial(1, 2), 10)
    with pytest.raises(WindowViolation):
        lemma_expansion_B(SignedMonomial.q(-1), 10)


def test_normalized_appell_precision():
    series = normalized_appell(fraction_monomial(1, 4, -1), Fraction(31, 2))
    assert series.precision == Fraction(31, 2)


def test_appell_base_must_have_positive_order():
    with pytest.raises(ValueError):
        AppellSpec(SignedMonomial.q(1), SignedMonomial.q(-1), SignedMonomial.q(Fraction(1, 2)))
