"""
HeckMort - Eulerian Series
q-Pochhammer symbols, the universal mock theta function g(x,q), the named Eulerian and
Hecke-type series used as builtins, and the catalog of identities relating them.

    g(x,q) = x^-1 ( -1 + sum_{n>=0} q^(n^2) / ((x)_{n+1} (q/x)_n) )
"""

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import partial
from typing import Callable, Dict, List, Optional, Sequence

from engine_errors import NonUnitFactor, UnknownBuiltin
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
from theta import J, Jbar, Jm, ThetaVariant, j

logger = get_logger(__name__)


def q_mono(exp: Rational, coeff: Rational = 1) -> SignedMonomial:
    return SignedMonomial.q(exp, coeff)


@dataclass(frozen=True)
class PochhammerSpec:
    """(arg; base)_length, length None meaning the infinite product"""

    arg: SignedMonomial
    base: SignedMonomial
    length: Optional[int] = None

    def __post_init__(self) -> None:
        if self.base.exp <= 0:
            raise ValueError(f"Pochhammer base must have positive q-order, got {self.base}")
        if self.length is not None and self.length < 0:
            raise ValueError(f"Pochhammer length must be nonnegative, got {self.length}")

    def zero_factor(self) -> Optional[int]:
        """k with arg * base^k = 1 inside the product, if any"""
        k = self.arg.inverse().integral_log(self.base)
        if k is None or k < 0:
            return None
        if self.length is not None and k >= self.length:
            return None
        return k

    def __str__(self) -> str:
        length = "inf" if self.length is None else self.length
        return f"({self.arg}; {self.base})_{length}"


def pochhammer(spec: PochhammerSpec, precision: Rational) -> QSeries:
    """(arg; base)_length truncated below the precision"""
    precision = to_fraction(precision)
    k = spec.zero_factor()
    if k is not None:
        raise NonUnitFactor(f"{spec}: factor k={k} is 1 - 1")
    monomials = pochhammer_monomials(spec.arg, spec.base, spec.length, precision)
    return binomial_product(monomials, precision)


def aqprod(
    arg: SignedMonomial, base: SignedMonomial, length: Optional[int], precision: Rational
) -> QSeries:
    return pochhammer(PochhammerSpec(arg, base, length), precision)


def _pochhammer_builder(spec: PochhammerSpec) -> Callable[[Fraction], QSeries]:
    return partial(pochhammer, spec)


def g_term_count(x: SignedMonomial, base: SignedMonomial, precision: Rational) -> int:
    """Number of Eulerian terms of g(x, base) that reach below the precision"""
    margin = to_fraction(precision) + abs(x.exp) + 1
    n = 0
    while n * n * base.exp <= margin:
        n += 1
    return n


def g_universal(
    x: SignedMonomial, base: SignedMonomial, precision: Rational, terms: Optional[int] = None
) -> QSeries:
    """g(x, base) truncated below the precision, summing terms Eulerian terms if given"""
    precision = to_fraction(precision)
    if base.exp <= 0:
        raise ValueError(f"g needs a base of positive q-order, got {base}")
    if terms is None:
        terms = g_term_count(x, base, precision)
    # the x^-1 prefactor moves every order down by x.exp
    inner = precision + x.exp
    total = QSeries.constant(-1, inner)
    for n in range(terms):
        specs = [PochhammerSpec(x, base, n + 1), PochhammerSpec(base / x, base, n)]
        lead = base ** (n * n)
        term = quotient_at(
            inner,
            lambda working, m=lead: QSeries.monomial(m, working),
            lambda working, specs=specs: product_at(
                working, [_pochhammer_builder(spec) for spec in specs]
            ),
        )
        total = total + term
    logger.debug(f"g({x}, {base}): {terms} Eulerian terms below q^({precision})")
    return total.shift(x.inverse())


# Builtin series

Q = q_mono(1)


def _eulerian_sum(
    precision: Fraction,
    order: Callable[[int], int],
    denominators: Callable[[int], List[PochhammerSpec]],
) -> QSeries:
    """sum_n q^order(n) / prod(denominators(n)), the orders increasing with n"""
    total = QSeries.zero(precision)
    n = 0
    while order(n) < precision:
        lead = q_mono(order(n))
        builders = [_pochhammer_builder(spec) for spec in denominators(n)]
        total = total + quotient_at(
            precision,
            lambda working: QSeries.monomial(lead, working),
            lambda working: product_at(working, builders),
        )
        n += 1
    return total


def _hecke_type_sum(
    precision: Fraction,
    lowest: Callable[[int], Fraction],
    outer: Callable[[int], int],
    gap: Callable[[int], int],
    inner: Callable[[int], List[SignedMonomial]],
) -> QSeries:
    """
    1/(q^2;q^2)_inf * sum_{n>=0} q^outer(n) (1 - q^gap(n)) sum_j inner(n)_j

    lowest(n) bounds the q-order of the n-th summand from below and increases with n.
    """

    def summed(working: Fraction) -> QSeries:
        terms: Dict[Fraction, Fraction] = {}
        n = 0
        while lowest(n) < working:
            for m in inner(n):
                for exponent, sign in ((outer(n) + m.exp, 1), (outer(n) + gap(n) + m.exp, -1)):
                    terms[exponent] = terms.get(exponent, Fraction(0)) + sign * m.coeff
            n += 1
        return QSeries(terms, working)

    q2 = q_mono(2)
    return quotient_at(
        precision, summed, lambda working: aqprod(q2, q2, None, working)
    )


def f0_lhs(precision: Rational) -> QSeries:
    """sum q^(n^2) / (-q)_n"""
    return _eulerian_sum(
        to_fraction(precision),
        lambda n: n * n,
        lambda n: [PochhammerSpec(-Q, Q, n)],
    )


def f0_rhs(precision: Rational) -> QSeries:
    """J_{5,10} J_{2,5} / J_1 - 2q^2 g(q^2, q^10)"""
    precision = to_fraction(precision)
    theta_part = quotient_at(
        precision,
        lambda working: product_at(
            working,
            [
                lambda w: J(5, 10, ThetaVariant.PLAIN, w),
                lambda w: J(2, 5, ThetaVariant.PLAIN, w),
            ],
        ),
        lambda working: Jm(1, working),
    )
    mock_part = g_universal(q_mono(2), q_mono(10), precision - 2).shift(q_mono(2, 2))
    return theta_part - mock_part


def slater39_lhs(precision: Rational) -> QSeries:
    """sum q^(2n^2) / (q;q)_{2n}"""
    return _eulerian_sum(
        to_fraction(precision),
        lambda n: 2 * n * n,
        lambda n: [PochhammerSpec(Q, Q, 2 * n)],
    )


def slater39_rhs(precision: Rational) -> QSeries:
    """Jbar_{3,8} / J_2"""
    return quotient_at(
        to_fraction(precision),
        lambda working: Jbar(3, 8, working),
        lambda working: Jm(2, working),
    )


def andrews114_lhs(precision: Rational) -> QSeries:
    """sum q^(2n^2) / (-q;q)_{2n}"""
    return _eulerian_sum(
        to_fraction(precision),
        lambda n: 2 * n * n,
        lambda n: [PochhammerSpec(-Q, Q, 2 * n)],
    )


def _signed_squares(n: int) -> List[SignedMonomial]:
    """(-1)^j q^(-j^2) for |j| <= n"""
    return [q_mono(-j * j, -1 if j % 2 else 1) for j in range(-n, n + 1)]


def andrews114_rhs(precision: Rational) -> QSeries:
    """1/(q^2;q^2)_inf sum q^(4n^2+n) (1 - q^(6n+3)) sum_{|j|<=n} (-1)^j q^(-j^2)"""
    return _hecke_type_sum(
        to_fraction(precision),
        lambda n: Fraction(3 * n * n + n),
        lambda n: 4 * n * n + n,
        lambda n: 6 * n + 3,
        _signed_squares,
    )


def g_neg_q_rhs(precision: Rational) -> QSeries:
    """2 - 2q g(-q, q^8) - J_{1,2} Jbar_{3,8} / J_2"""
    precision = to_fraction(precision)
    mock_part = g_universal(q_mono(1, -1), q_mono(8), precision - 1).shift(q_mono(1, 2))
    theta_part = quotient_at(
        precision,
        lambda working: product_at(
            working,
            [lambda w: J(1, 2, ThetaVariant.PLAIN, w), lambda w: Jbar(3, 8, w)],
        ),
        lambda working: Jm(2, working),
    )
    return QSeries.constant(2, precision) - mock_part - theta_part


def andrews425_lhs(precision: Rational) -> QSeries:
    """sum q^(3n^2+2n) / ((q)_{2n} (-q^2;q^2)_n)"""
    q2 = q_mono(2)
    return _eulerian_sum(
        to_fraction(precision),
        lambda n: 3 * n * n + 2 * n,
        lambda n: [PochhammerSpec(Q, Q, 2 * n), PochhammerSpec(-q2, q2, n)],
    )


def _signed_pentagonals(n: int) -> List[SignedMonomial]:
    """(-1)^j (-q)^(-j(3j-1)/2) for |j| <= n"""
    terms = []
    for k in range(-n, n + 1):
        e = -k * (3 * k - 1) // 2
        terms.append(q_mono(e, -1 if (k + e) % 2 else 1))
    return terms


def andrews425_rhs(precision: Rational) -> QSeries:
    """1/(q^2;q^2)_inf sum q^(4n^2+2n) (1 - q^(4n+2)) sum_{|j|<=n} (-1)^j (-q)^(-j(3j-1)/2)"""
    return _hecke_type_sum(
        to_fraction(precision),
        lambda n: Fraction(5 * n * n + 3 * n, 2),
        lambda n: 4 * n * n + 2 * n,
        lambda n: 4 * n + 2,
        _signed_pentagonals,
    )


def andrews425_mock_rhs(precision: Rational) -> QSeries:
    """
    -q^2 g(q^2,q^10) j(-q;-q^5)/J_2 + q^3 g(q^4,q^10) j(q^2;-q^5)/J_2
        + j(-q^5;-q^15)^3 / (J_2 J_10)
    """
    precision = to_fraction(precision)
    minus_q5 = q_mono(5, -1)

    def mock_term(x: SignedMonomial, theta_arg: SignedMonomial, shift: SignedMonomial) -> QSeries:
        working = precision - shift.exp
        return quotient_at(
            working,
            lambda w: product_at(
                w,
                [lambda v: g_universal(x, q_mono(10), v), lambda v: j(theta_arg, minus_q5, v)],
            ),
            lambda w: Jm(2, w),
        ).shift(shift)

    first = mock_term(q_mono(2), q_mono(1, -1), q_mono(2, -1))
    second = mock_term(q_mono(4), q_mono(2), q_mono(3))
    theta_part = quotient_at(
        precision,
        lambda working: j(minus_q5, q_mono(15, -1), working) ** 3,
        lambda working: product_at(working, [lambda w: Jm(2, w), lambda w: Jm(10, w)]),
    )
    return first + second + theta_part


BUILTINS: Dict[str, Callable[[Rational], QSeries]] = {
    "f0_lhs": f0_lhs,
    "f0_rhs": f0_rhs,
    "slater39_lhs": slater39_lhs,
    "slater39_rhs": slater39_rhs,
    "andrews114_lhs": andrews114_lhs,
    "andrews114_rhs": andrews114_rhs,
    "g_neg_q_rhs": g_neg_q_rhs,
    "andrews425_lhs": andrews425_lhs,
    "andrews425_rhs": andrews425_rhs,
    "andrews425_mock_rhs": andrews425_mock_rhs,
}


def builtin_series(name: str, precision: Rational) -> QSeries:
    """Named builtin series truncated below the precision"""
    try:
        build = BUILTINS[name]
    except KeyError:
        raise UnknownBuiltin(
            f"Unknown builtin '{name}'; known: {', '.join(sorted(BUILTINS))}"
        ) from None
    return build(precision)


# Identity catalog


@dataclass(frozen=True)
class IdentityCatalogEntry:
    """One quoted identity: lhs_builder(P) == rhs_builder(P)"""

    name: str
    lhs: str
    rhs: str
    source: str

    def lhs_builder(self, precision: Rational) -> QSeries:
        return builtin_series(self.lhs, precision)

    def rhs_builder(self, precision: Rational) -> QSeries:
        return builtin_series(self.rhs, precision)


CATALOG: Dict[str, IdentityCatalogEntry] = {
    entry.name: entry
    for entry in (
        IdentityCatalogEntry(
            "f0_conjecture",
            "f0_lhs",
            "f0_rhs",
            "fifth order mock theta conjecture for f0(q)",
        ),
        IdentityCatalogEntry(
            "slater_39", "slater39_lhs", "slater39_rhs", "Slater's list, identity (39)"
        ),
        IdentityCatalogEntry(
            "andrews_1_14",
            "andrews114_lhs",
            "andrews114_rhs",
            "Andrews, Hecke-type expansion (1.14) via q-orthogonal polynomials",
        ),
        IdentityCatalogEntry(
            "mortenson_g_neg_q",
            "andrews114_lhs",
            "g_neg_q_rhs",
            "mock theta conjecture-like identity in g(-q, q^8)",
        ),
        IdentityCatalogEntry(
            "andrews_4_25",
            "andrews425_lhs",
            "andrews425_rhs",
            "Andrews, Hecke-type expansion (4.25) from evens/odds interchange",
        ),
        IdentityCatalogEntry(
            "eq_1_5",
            "andrews425_lhs",
            "andrews425_mock_rhs",
            "g(q^2,q^10) and g(q^4,q^10) form of the (4.25) series; checked numerically",
        ),
    )
}


# descriptive names accepted in place of the stable identifiers
CATALOG_ALIASES: Dict[str, str] = {
    "g_neg_q_conjecture": "mortenson_g_neg_q",
    "andrews_4_25_mock": "eq_1_5",
}


def catalog_entry(name: str) -> IdentityCatalogEntry:
    try:
        return CATALOG[CATALOG_ALIASES.get(name, name)]
    except KeyError:
        raise UnknownBuiltin(
            f"Unknown catalog identity '{name}'; known: {', '.join(CATALOG)}"
        ) from None


@log_execution_time
def catalog_verify(name: str, precision: Rational) -> VerificationReport:
    """Build both sides of a catalog identity and compare them below the precision"""
    entry = catalog_entry(name)
    started = time.perf_counter()
    report = compare(
        entry.lhs_builder(precision),
        entry.rhs_builder(precision),
        label=entry.name,
        required=precision,
        started=started,
    )
    logger.info(report.summary())
    return report


def catalog_verify_many(
    names: Sequence[str], precision: Rational, jobs: int = 1
) -> List[VerificationReport]:
    """catalog_verify over several names; results keep the input order"""
    for name in names:
        catalog_entry(name)
    if jobs <= 1 or len(names) <= 1:
        return [catalog_verify(name, precision) for name in names]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(catalog_verify, names, [to_fraction(precision)] * len(names)))
