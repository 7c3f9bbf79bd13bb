"""
HeckMort - Theta Functions
j(x;q) under monomial specialization, multi-argument products and the J_{a,m} family.

    j(x;q) = (x)_inf (q/x)_inf (q)_inf = sum_n (-1)^n q^C(n,2) x^n

The sum form is the primary constructor; the product form exists to cross-check it.
"""

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import partial
from typing import Dict, Sequence

from logging_setup import get_logger
from series_core import (
    QSeries,
    Rational,
    SignedMonomial,
    VerificationReport,
    binomial_product,
    compare,
    pochhammer_monomials,
    product_at,
    to_fraction,
)

logger = get_logger(__name__)


@dataclass(frozen=True)
class ThetaSpec:
    """j(arg; base)"""

    arg: SignedMonomial
    base: SignedMonomial

    def __post_init__(self) -> None:
        if self.base.exp <= 0:
            raise ValueError(f"Theta base must have positive q-order, got {self.base}")

    def __str__(self) -> str:
        return f"j({self.arg}; {self.base})"


class ThetaVariant(Enum):
    PLAIN = "plain"  # J_{a,m} = j(q^a; q^m)
    BAR = "bar"  # Jbar_{a,m} = j(-q^a; q^m)
    ETA = "eta"  # J_m = J_{m,3m}


def vanishes(spec: ThetaSpec) -> bool:
    """j(x;q) is identically zero exactly when x is an integral power of q"""
    return spec.arg.is_integral_power_of(spec.base)


def _binom2(n: int) -> int:
    return n * (n - 1) // 2


def theta_j(spec: ThetaSpec, precision: Rational) -> QSeries:
    """Triple-product sum of j(arg; base) truncated below the precision"""
    precision = to_fraction(precision)
    if vanishes(spec):
        return QSeries.zero(precision)
    a, b = spec.arg.exp, spec.base.exp

    def order(n: int) -> Fraction:
        return _binom2(n) * b + n * a

    # order(n) is convex with vertex 1/2 - a/b: nondecreasing from ceil(vertex) upward
    # and from ceil(vertex) - 1 downward
    start = math.ceil(Fraction(1, 2) - a / b)
    terms: Dict[Fraction, Fraction] = {}
    for step in (1, -1):
        n = start if step == 1 else start - 1
        while order(n) < precision:
            sign = -1 if n % 2 else 1
            coeff = sign * spec.base.coeff ** _binom2(n) * spec.arg.coeff**n
            e = order(n)
            terms[e] = terms.get(e, Fraction(0)) + coeff
            n += step
    return QSeries(terms, precision)


def j(arg: SignedMonomial, base: SignedMonomial, precision: Rational) -> QSeries:
    return theta_j(ThetaSpec(arg, base), precision)


def theta_j_product(specs: Sequence[ThetaSpec], precision: Rational) -> QSeries:
    """j(x_1, ..., x_k; q) as the product of the individual thetas"""
    precision = to_fraction(precision)
    if not specs:
        return QSeries.one(precision)
    bases = {spec.base for spec in specs}
    if len(bases) != 1:
        raise ValueError("All arguments of a theta product must share one base")
    if any(vanishes(spec) for spec in specs):
        return QSeries.zero(precision)
    return product_at(precision, [partial(theta_j, spec) for spec in specs])


def J(a: int, m: int, variant: ThetaVariant, precision: Rational) -> QSeries:
    """J_{a,m}, Jbar_{a,m} or J_m (a is ignored for the eta variant)"""
    if m <= 0:
        raise ValueError(f"J needs a positive modulus, got {m}")
    base = SignedMonomial.q(m)
    if variant is ThetaVariant.PLAIN:
        return theta_j(ThetaSpec(SignedMonomial.q(a), base), precision)
    if variant is ThetaVariant.BAR:
        return theta_j(ThetaSpec(SignedMonomial.q(a, -1), base), precision)
    return theta_j(ThetaSpec(SignedMonomial.q(m), SignedMonomial.q(3 * m)), precision)


def Jm(m: int, precision: Rational) -> QSeries:
    return J(m, m, ThetaVariant.ETA, precision)


def Jbar(a: int, m: int, precision: Rational) -> QSeries:
    return J(a, m, ThetaVariant.BAR, precision)


def theta_product_form(spec: ThetaSpec, precision: Rational) -> QSeries:
    """(x)_inf (q/x)_inf (q)_inf as one finite product of binomials"""
    precision = to_fraction(precision)
    if vanishes(spec):
        return QSeries.zero(precision)
    args = [spec.arg, spec.base / spec.arg, spec.base]
    logger.debug(f"{spec}: product form from three infinite Pochhammer factors")
    # every factor's negative orders lower the others' horizon
    mass = sum(
        min(Fraction(0), m.exp)
        for arg in args
        for m in pochhammer_monomials(arg, spec.base, None, precision)
    )
    monomials = [
        m for arg in args for m in pochhammer_monomials(arg, spec.base, None, precision - mass)
    ]
    return binomial_product(monomials, precision)


def triple_product_check(spec: ThetaSpec, precision: Rational) -> VerificationReport:
    """Sum form against product form; positive bases only"""
    if spec.base.coeff <= 0:
        raise ValueError("The product-form cross-check needs a positive theta base")
    return compare(
        theta_j(spec, precision),
        theta_product_form(spec, precision),
        label=f"triple product {spec}",
        required=precision,
    )
