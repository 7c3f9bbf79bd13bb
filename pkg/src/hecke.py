"""
HeckMort - Hecke-type Double Sums
f_{a,b,c}(x,y,q), the sign weights, and the bilateral 1psi1 summation in monomial form.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Tuple

from engine_errors import NonUnitFactor, WindowViolation
from lattice_sums import (
    Affine,
    EnumerationLimits,
    LatticeSum,
    binom2,
    monomial_power,
    sg2_regions,
)
from logging_setup import get_logger, log_execution_time
from series_core import (
    QSeries,
    Rational,
    SignedMonomial,
    VerificationReport,
    binomial_product,
    compare,
    pochhammer_monomials,
    product_at,
    quotient_at,
    to_fraction,
)
from theta import Jm, j

logger = get_logger(__name__)

Q = SignedMonomial.q(1)


@dataclass(frozen=True)
class HeckeParams:
    """Subscripts of f_{a,b,c}"""

    a: int
    b: int
    c: int

    def __post_init__(self) -> None:
        if min(self.a, self.b, self.c) < 1:
            raise ValueError(f"Hecke parameters must be positive integers, got {self}")

    @property
    def discriminant(self) -> int:
        return self.b * self.b - self.a * self.c

    def mirrored(self) -> "HeckeParams":
        return HeckeParams(self.c, self.b, self.a)

    def __str__(self) -> str:
        return f"({self.a},{self.b},{self.c})"


def sg(r: int) -> int:
    return 1 if r >= 0 else -1


def sg2(r: int, s: int) -> int:
    return (sg(r) + sg(s)) // 2


def hecke_sum(params: HeckeParams, x: SignedMonomial, y: SignedMonomial) -> LatticeSum:
    """Definition of f_{a,b,c}: sg(r) over the two same-sign quadrants, which is sg(r,s)"""
    r, s = Affine.variables(2)
    quad = params.a * binom2(r) + params.b * (r * s) + params.c * binom2(s)
    x_exp, x_factor = monomial_power(-x, r)
    y_exp, y_factor = monomial_power(-y, s)
    return LatticeSum(
        exponent=quad + x_exp + y_exp,
        factors=(x_factor, y_factor),
        regions=sg2_regions(r, s),
        label=f"f{params}",
    )


def f_abc(
    params: HeckeParams,
    x: SignedMonomial,
    y: SignedMonomial,
    precision: Rational,
    limits: Optional[EnumerationLimits] = None,
) -> QSeries:
    """f_{a,b,c}(x,y,q) truncated below the precision"""
    return hecke_sum(params, x, y).evaluate(precision, limits)


def _check_unit_window(m: SignedMonomial, name: str) -> None:
    if not 0 < m.exp < 1:
        raise WindowViolation(f"{name} needs 0 < ord({name}) < 1, got {m.exp}")


def onepsi_corollary_lhs(
    x: SignedMonomial,
    y: SignedMonomial,
    precision: Rational,
    limits: Optional[EnumerationLimits] = None,
) -> QSeries:
    """sum_{r,s} sg(r,s) q^(rs) x^r y^s"""
    _check_unit_window(x, "x")
    _check_unit_window(y, "y")
    r, s = Affine.variables(2)
    x_exp, x_factor = monomial_power(x, r)
    y_exp, y_factor = monomial_power(y, s)
    lsum = LatticeSum(
        exponent=(r * s) + x_exp + y_exp,
        factors=(x_factor, y_factor),
        regions=sg2_regions(r, s),
        label="1psi1 corollary",
    )
    return lsum.evaluate(precision, limits)


def onepsi_corollary_rhs(x: SignedMonomial, y: SignedMonomial, precision: Rational) -> QSeries:
    """J_1^3 j(xy;q) / (j(x;q) j(y;q))"""
    precision = to_fraction(precision)
    return quotient_at(
        precision,
        lambda working: product_at(
            working, [lambda w: Jm(1, w) ** 3, lambda w: j(x * y, Q, w)]
        ),
        lambda working: product_at(working, [lambda w: j(x, Q, w), lambda w: j(y, Q, w)]),
    )


def _factor_order(m: SignedMonomial) -> Optional[Fraction]:
    """q-order of 1 - m, None when the factor is zero"""
    if m.exp == 0 and m.coeff == 1:
        return None
    return min(Fraction(0), m.exp)


def _ratio_monomials(
    a: SignedMonomial, b: SignedMonomial, n: int
) -> Tuple[List[SignedMonomial], List[SignedMonomial]]:
    """Binomial factors of (a)_n/(b)_n as (numerator, denominator) monomial lists"""
    if n >= 0:
        return [a * Q**k for k in range(n)], [b * Q**k for k in range(n)]
    # (a)_{-m} = 1/(a q^{-m})_m
    m = -n
    return [b * Q ** (-k) for k in range(1, m + 1)], [a * Q ** (-k) for k in range(1, m + 1)]


def _bilateral_term(
    a: SignedMonomial, b: SignedMonomial, x: SignedMonomial, n: int, precision: Fraction
) -> Optional[QSeries]:
    numerator, denominator = _ratio_monomials(a, b, n)
    if any(_factor_order(m) is None for m in denominator):
        raise NonUnitFactor(f"(b)_n has a zero factor at n = {n}")
    if any(_factor_order(m) is None for m in numerator):
        return None
    shift = x ** n
    return quotient_at(
        precision,
        lambda working: binomial_product(numerator, working - shift.exp).shift(shift),
        lambda working: binomial_product(denominator, working),
    )


def _term_order(a: SignedMonomial, b: SignedMonomial, x: SignedMonomial, n: int) -> Optional[Fraction]:
    numerator, denominator = _ratio_monomials(a, b, n)
    orders = [_factor_order(m) for m in numerator]
    if any(order is None for order in orders):
        return None
    return n * x.exp + sum(orders, Fraction(0)) - sum(
        (_factor_order(m) or Fraction(0) for m in denominator), Fraction(0)
    )


def onepsi_lhs(
    a: SignedMonomial, b: SignedMonomial, x: SignedMonomial, precision: Rational
) -> QSeries:
    """sum_n (a)_n/(b)_n x^n over all integers n"""
    precision = to_fraction(precision)
    total = QSeries.zero(precision)
    # term orders become linear once every factor has left the negative-order range:
    # slope ord(x) upward, ord(b) - ord(a) - ord(x) downward
    settle = int(max(abs(a.exp), abs(b.exp))) + 1
    for step in (1, -1):
        n = 0 if step == 1 else -1
        while True:
            order = _term_order(a, b, x, n)
            if order is None and step == 1:
                break  # (a)_n = 0 from here on
            if order is not None and order < precision:
                term = _bilateral_term(a, b, x, n, precision)
                if term is not None:
                    total = total + term
            elif abs(n) > settle:
                break
            n += step
    return total


def onepsi_rhs(
    a: SignedMonomial, b: SignedMonomial, x: SignedMonomial, precision: Rational
) -> QSeries:
    """(b/a, q/(ax), ax, q)_inf / (b, b/(ax), q/a, x)_inf"""
    precision = to_fraction(precision)
    ax = a * x
    upper = [b / a, Q / ax, ax, Q]
    lower = [b, b / ax, Q / a, x]
    for arg in lower:
        # some arg q^k equals 1
        if arg.coeff == 1 and arg.exp.denominator == 1 and arg.exp <= 0:
            raise NonUnitFactor(f"({arg};q)_inf has a zero factor")

    def product(args: List[SignedMonomial], working: Fraction) -> QSeries:
        lowest = Fraction(0)
        for arg in args:
            k = 0
            while arg.exp + k < 0:
                lowest += arg.exp + k
                k += 1
        monomials: List[SignedMonomial] = []
        for arg in args:
            monomials.extend(pochhammer_monomials(arg, Q, None, working - lowest))
        return binomial_product(monomials, working)

    return quotient_at(
        precision,
        lambda working: product(upper, working),
        lambda working: product(lower, working),
    )


@log_execution_time
def onepsi_general(
    a: SignedMonomial, b: SignedMonomial, x: SignedMonomial, precision: Rational
) -> VerificationReport:
    """Bilateral 1psi1 summation, checked inside 0 < ord(x) < ord(b) - ord(a)"""
    if not 0 < x.exp < b.exp - a.exp:
        raise WindowViolation(
            f"1psi1 needs 0 < ord(x) < ord(b/a) = {b.exp - a.exp}, got ord(x) = {x.exp}"
        )
    return compare(
        onepsi_lhs(a, b, x, precision),
        onepsi_rhs(a, b, x, precision),
        label=f"1psi1 a={a} b={b} x={x}",
        required=precision,
    )
