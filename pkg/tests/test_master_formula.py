"""
HeckMort - Master formula tests
"""

from fractions import Fraction

import pytest

from engine_errors import NonGenericSpecialization
from hecke import f_abc
from master_formula import (
    MasterParams,
    Specialization,
    check_generic,
    check_windows,
    g_abc,
    lemma_sign_ids,
    q_power,
    theta_np,
    theta_np_terms,
    verify_master,
    verify_master_matrix,
)
from series_core import VerificationStatus, compare

GENERIC = Specialization(-q_power(Fraction(1, 5)), -q_power(Fraction(2, 7)))


def test_params_validation():
    with pytest.raises(ValueError):
        MasterParams(2, 2)
    with pytest.raises(ValueError):
        MasterParams(0, 1)
    mp = MasterParams(2, 3)
    assert (mp.hecke.a, mp.hecke.b, mp.hecke.c) == (2, 5, 2)
    assert mp.discriminant == 21
    assert mp.theta_modulus == 63
    assert mp.jbar_modulus == 42
    assert mp.fractional_shift == Fraction(1, 2)
    assert not mp.is_odd


def test_theta_np_has_p_squared_terms():
    assert len(theta_np_terms(MasterParams(1, 3), GENERIC)) == 9
    assert len(theta_np_terms(MasterParams(3, 1), GENERIC)) == 1


@pytest.mark.parametrize("n, p", [(1, 1), (1, 2), (2, 1), (1, 3), (3, 1), (2, 3), (3, 2)])
def test_master_formula_generic(n, p):
    report = verify_master(MasterParams(n, p), GENERIC, 12)
    assert report.verified, report.summary()


def test_master_formula_second_specialization():
    spec = Specialization(-q_power(Fraction(3, 7)), -q_power(Fraction(1, 5)))
    reports = verify_master_matrix([(MasterParams(1, 2), spec), (MasterParams(2, 1), spec)], 12)
    assert [r.verified for r in reports] == [True, True]
    assert "n=1, p=2" in reports[0].label


@pytest.mark.parametrize(
    "n, p, x, y",
    [
        (2, 1, q_power(1), q_power(Fraction(1, 3))),
        (1, 2, q_power(Fraction(1, 5), Fraction(1, 2)), -q_power(Fraction(2, 7))),
        (3, 1, q_power(Fraction(2, 5)), q_power(Fraction(1, 7), Fraction(3, 2))),
    ],
)
def test_master_formula_positive_and_fractional_coefficients(n, p, x, y):
    report = verify_master(MasterParams(n, p), Specialization(x, y), 15)
    assert report.verified, report.summary()


def test_theta_part_is_needed():
    mp = MasterParams(1, 2)
    hp = mp.hecke
    lhs = f_abc(hp, GENERIC.x, GENERIC.y, 12)
    without_theta = g_abc(hp.a, hp.b, hp.c, GENERIC.x, GENERIC.y, 12)
    assert compare(lhs, without_theta).status is VerificationStatus.MISMATCH
    with_theta = without_theta + theta_np(mp, GENERIC, 12)
    assert compare(lhs, with_theta, required=12).verified


def test_non_generic_specialization():
    spec = Specialization(-q_power(2), q_power(2))
    with pytest.raises(NonGenericSpecialization):
        check_generic(MasterParams(1, 1), spec)
    with pytest.raises(NonGenericSpecialization):
        theta_np(MasterParams(1, 1), spec, 10)


def test_g_requires_indefinite_form():
    with pytest.raises(ValueError):
        g_abc(2, 1, 2, GENERIC.x, GENERIC.y, 10)


def test_windows_hold_inside():
    report = check_windows(MasterParams(1, 2), Specialization(-q_power(1), -q_power(1)))
    assert report.hypothesis_holds
    assert report.holds
    assert report.failures() == []


def test_windows_fail_outside():
    report = check_windows(MasterParams(1, 2), Specialization(-q_power(5), -q_power(1)))
    assert not report.hypothesis_holds
    assert not report.holds
    assert "hypothesis fails" in report.summary()


@pytest.mark.parametrize("n", [1, 3, 5, 7, 9])
def test_sign_identities_hold_for_odd_n(n):
    assert lemma_sign_ids(n, 6).verified


@pytest.mark.parametrize("n", [2, 4])
def test_sign_identities_break_for_even_n(n):
    report = lemma_sign_ids(n, 6)
    assert report.status is VerificationStatus.MISMATCH
    assert f"k={n // 2}" in report.detail


def test_sign_identity_check_detects_perturbation():
    assert lemma_sign_ids(3, 4, perturbation=1).status is VerificationStatus.MISMATCH
    with pytest.raises(ValueError):
        lemma_sign_ids(0, 4)
