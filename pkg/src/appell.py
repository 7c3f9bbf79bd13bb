"""
HeckMort - Appell-Lerch Sums
m(x,q,z) under monomial specialization and its two sign-weighted double-sum expansions.

    m(x,q,z) = 1/j(z;q) * sum_r (-1)^r q^C(r,2) z^r / (1 - q^(r-1) x z)

Each summand is expanded as a geometric series in whichever direction converges for the
q-order of u_r = q^(r-1) x z.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Optional

from engine_errors import PoleAtSpecialization, WindowViolation
from lattice_sums import (
    Affine,
    EnumerationLimits,
    LatticeSum,
    binom2,
    monomial_power,
    sg2_regions,
)
from logging_setup import get_logger
from series_core import (
    QSeries,
    Rational,
    SignedMonomial,
    VerificationReport,
    compare,
    product_at,
    quotient_at,
    to_fraction,
)
from theta import ThetaSpec, Jbar, theta_j

logger = get_logger(__name__)

Q = SignedMonomial.q(1)
MINUS_ONE = SignedMonomial.q(0, -1)


@dataclass(frozen=True)
class AppellSpec:
    """m(x, base, z)"""

    x: SignedMonomial
    base: SignedMonomial
    z: SignedMonomial

    def __post_init__(self) -> None:
        if self.base.exp <= 0:
            raise ValueError(f"Appell-Lerch base must have positive q-order, got {self.base}")

    def check_poles(self) -> None:
        if self.z.is_integral_power_of(self.base):
            raise PoleAtSpecialization(f"z = {self.z} is an integral power of {self.base}")
        xz = self.x * self.z
        if xz.is_integral_power_of(self.base):
            raise PoleAtSpecialization(f"xz = {xz} is an integral power of {self.base}")


def _binom2(n: int) -> int:
    return n * (n - 1) // 2


def _lerch_numerator(spec: AppellSpec, precision: Fraction) -> QSeries:
    """sum_r (-1)^r base^C(r,2) z^r / (1 - base^(r-1) x z), truncated below the precision"""
    b, ze = spec.base.exp, spec.z.exp
    xz = spec.x * spec.z

    def order(r: int) -> Fraction:
        return _binom2(r) * b + r * ze

    # Every expansion of 1/(1-u) has q-order >= 0 relative to its prefactor, so the
    # convex prefactor order bounds the whole summand from below
    start = math.ceil(Fraction(1, 2) - ze / b)
    terms: Dict[Fraction, Fraction] = {}
    for step in (1, -1):
        r = start if step == 1 else start - 1
        while order(r) < precision:
            sign = -1 if r % 2 else 1
            lead = SignedMonomial(
                sign * spec.base.coeff ** _binom2(r) * spec.z.coeff**r, order(r)
            )
            u = spec.base ** (r - 1) * xz
            _accumulate_geometric(terms, lead, u, precision)
            r += step
    return QSeries(terms, precision)


def _accumulate_geometric(
    terms: Dict[Fraction, Fraction], lead: SignedMonomial, u: SignedMonomial, precision: Fraction
) -> None:
    """Add lead/(1-u) expanded in the convergent direction"""
    if u.exp > 0:
        term = lead
        while term.exp < precision:
            terms[term.exp] = terms.get(term.exp, Fraction(0)) + term.coeff
            term = term * u
    elif u.exp < 0:
        # 1/(1-u) = -u^-1/(1-u^-1)
        inverse = u.inverse()
        term = -(lead * inverse)
        while term.exp < precision:
            terms[term.exp] = terms.get(term.exp, Fraction(0)) + term.coeff
            term = term * inverse
    else:
        if u.coeff == 1:
            raise PoleAtSpecialization(f"Summand denominator 1 - ({u}) vanishes")
        terms[lead.exp] = terms.get(lead.exp, Fraction(0)) + lead.coeff / (1 - u.coeff)


def appell_m(spec: AppellSpec, precision: Rational) -> QSeries:
    """m(x, base, z) truncated below the precision"""
    precision = to_fraction(precision)
    spec.check_poles()
    return quotient_at(
        precision,
        lambda working: _lerch_numerator(spec, working),
        lambda working: theta_j(ThetaSpec(spec.z, spec.base), working),
    )


def _check_window(x: SignedMonomial, low: Fraction, high: Fraction, name: str) -> None:
    if not low < x.exp < high:
        raise WindowViolation(
            f"{name} needs {low} < ord(x) < {high}, got ord(x) = {x.exp}"
        )


def lemma_expansion_sum(x: SignedMonomial, shifted: bool) -> LatticeSum:
    """
    sum_{v,s} sg(v,s) q^(C(v+1,2)+vs) (-x)^s, or with (v+1)(s+1) in place of vs when shifted
    """
    v, s = Affine.variables(2)
    quad = binom2(v + 1) + ((v + 1) * (s + 1) if shifted else v * s)
    exponent, factor = monomial_power(-x, s)
    return LatticeSum(
        exponent=quad + exponent,
        factors=(factor,),
        regions=sg2_regions(v, s),
        label="expansion B" if shifted else "expansion A",
    )


def lemma_expansion_A(
    x: SignedMonomial, precision: Rational, limits: Optional[EnumerationLimits] = None
) -> QSeries:
    """Jbar_{0,1} m(x,q,-1) as a double sum, valid for 0 < ord(x) < 1"""
    _check_window(x, Fraction(0), Fraction(1), "Expansion A")
    return lemma_expansion_sum(x, shifted=False).evaluate(precision, limits)


def lemma_expansion_B(
    x: SignedMonomial, precision: Rational, limits: Optional[EnumerationLimits] = None
) -> QSeries:
    """Jbar_{0,1} m(x,q,-1) as a double sum, valid for -1 < ord(x) < 0"""
    _check_window(x, Fraction(-1), Fraction(0), "Expansion B")
    return lemma_expansion_sum(x, shifted=True).evaluate(precision, limits)


def normalized_appell(x: SignedMonomial, precision: Rational) -> QSeries:
    """Jbar_{0,1} m(x,q,-1) computed from the Lerch sum"""
    spec = AppellSpec(x, Q, MINUS_ONE)
    return product_at(
        to_fraction(precision),
        [lambda working: Jbar(0, 1, working), lambda working: appell_m(spec, working)],
    )


def verify_expansion(x: SignedMonomial, precision: Rational) -> VerificationReport:
    """Compare Jbar_{0,1} m(x,q,-1) with whichever expansion window contains ord(x)"""
    expansion = lemma_expansion_A if x.exp > 0 else lemma_expansion_B
    report = compare(
        normalized_appell(x, precision),
        expansion(x, precision),
        label=f"expansion {'A' if x.exp > 0 else 'B'} at x = {x}",
        required=precision,
    )
    logger.debug(report.summary())
    return report
