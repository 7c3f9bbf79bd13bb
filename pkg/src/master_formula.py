"""
HeckMort - Master Formula
Expansion of f_{n,n+p,n} into Appell-Lerch sums and a theta quotient:

    f_{n,n+p,n}(x,y,q) = g_{n,n+p,n}(x,y,q) + theta_{n,p}(x,y,q)

together with the q-order window conditions under which the lattice-sum proof applies and
the sign identities it relies on.
"""

import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from appell import AppellSpec, appell_m
from engine_errors import NonGenericSpecialization
from hecke import HeckeParams, f_abc, sg
from lattice_sums import EnumerationLimits
from logging_setup import get_logger, log_execution_time
from series_core import (
    QSeries,
    Rational,
    SignedMonomial,
    VerificationReport,
    VerificationStatus,
    compare,
    product_at,
    quotient_at,
    to_fraction,
)
from theta import Jbar, Jm, ThetaSpec, theta_j, vanishes

logger = get_logger(__name__)

MINUS_ONE = SignedMonomial.q(0, -1)


def q_power(exp: Rational, coeff: Rational = 1) -> SignedMonomial:
    return SignedMonomial.q(exp, coeff)


def binom2(value: Rational) -> Fraction:
    value = to_fraction(value)
    return value * (value - 1) / 2


@dataclass(frozen=True)
class MasterParams:
    """n, p of the master formula"""

    n: int
    p: int

    def __post_init__(self) -> None:
        if self.n < 1 or self.p < 1:
            raise ValueError(f"n and p must be positive integers, got ({self.n},{self.p})")
        if math.gcd(self.n, self.p) != 1:
            raise ValueError(f"n and p must be coprime, got ({self.n},{self.p})")

    @property
    def hecke(self) -> HeckeParams:
        return HeckeParams(self.n, self.n + self.p, self.n)

    @property
    def discriminant(self) -> int:
        """b^2 - ac = p(2n+p)"""
        return self.p * (2 * self.n + self.p)

    @property
    def theta_modulus(self) -> int:
        """p^2(2n+p)"""
        return self.p * self.discriminant

    @property
    def jbar_modulus(self) -> int:
        """np(2n+p)"""
        return self.n * self.discriminant

    @property
    def half(self) -> Fraction:
        """(n-1)/2"""
        return Fraction(self.n - 1, 2)

    @property
    def fractional_shift(self) -> Fraction:
        """{(n-1)/2}"""
        return self.half - math.floor(self.half)

    @property
    def is_odd(self) -> bool:
        return self.n % 2 == 1

    def __str__(self) -> str:
        return f"(n={self.n}, p={self.p})"


def hecke_params_for(mp: MasterParams) -> HeckeParams:
    return mp.hecke


@dataclass(frozen=True)
class Specialization:
    """Monomial values of x and y"""

    x: SignedMonomial
    y: SignedMonomial

    def mirrored(self) -> "Specialization":
        return Specialization(self.y, self.x)

    def __str__(self) -> str:
        return f"x={self.x}, y={self.y}"


# g_{a,b,c}


def _g_half(
    a: int, b: int, c: int, x: SignedMonomial, y: SignedMonomial, precision: Fraction
) -> QSeries:
    """sum_{t<a} (-y)^t q^(cC(t,2)) j(q^(bt)x; q^a) m(-q^(...) (-y)^a/(-x)^b, q^(a(b^2-ac)), -1)"""
    disc = b * b - a * c
    offset = a * binom2(b + 1) - c * binom2(a + 1)
    total = QSeries.zero(precision)
    for t in range(a):
        prefactor = (-y) ** t * q_power(c * binom2(t))
        theta_spec = ThetaSpec(q_power(b * t) * x, q_power(a))
        if vanishes(theta_spec):
            continue
        appell_spec = AppellSpec(
            -q_power(offset - t * disc) * (-y) ** a / (-x) ** b,
            q_power(a * disc),
            MINUS_ONE,
        )
        appell_spec.check_poles()
        inner = product_at(
            precision - prefactor.exp,
            [
                lambda working, spec=theta_spec: theta_j(spec, working),
                lambda working, spec=appell_spec: appell_m(spec, working),
            ],
        )
        total = total + inner.shift(prefactor)
    return total


def g_abc(
    a: int, b: int, c: int, x: SignedMonomial, y: SignedMonomial, precision: Rational
) -> QSeries:
    """g_{a,b,c}(x,y,q): two t-sums of theta times Appell-Lerch products"""
    precision = to_fraction(precision)
    if min(a, b, c) < 1 or b * b - a * c <= 0:
        raise ValueError(f"g needs positive a,b,c with b^2 - ac > 0, got ({a},{b},{c})")
    return _g_half(a, b, c, x, y, precision) + _g_half(c, b, a, y, x, precision)


# theta_{n,p}


@dataclass(frozen=True)
class ThetaQuotientTerm:
    """One (r*, s*) summand: prefactor * J^3 j(N1) j(N2) / (Jbar j(D1) j(D2))"""

    r: Fraction
    s: Fraction
    prefactor: SignedMonomial
    numerator: Tuple[ThetaSpec, ThetaSpec]
    denominator: Tuple[ThetaSpec, ThetaSpec]

    @property
    def vanishes(self) -> bool:
        return any(vanishes(spec) for spec in self.numerator)


def theta_np_terms(mp: MasterParams, spec: Specialization) -> List[ThetaQuotientTerm]:
    """The p^2 summands of theta_{n,p}, with r = r* + {(n-1)/2} and s = s* + {(n-1)/2}"""
    n, p = mp.n, mp.p
    h = mp.half
    x, y = spec.x, spec.y
    minus_x, minus_y = -x, -y
    disc = mp.discriminant
    big_base = q_power(mp.theta_modulus)
    terms = []
    for r_star in range(p):
        for s_star in range(p):
            r = r_star + mp.fractional_shift
            s = s_star + mp.fractional_shift
            a_pow, b_pow = r - h, s + h + 1
            exponent = n * binom2(a_pow) + (n + p) * a_pow * b_pow + n * binom2(b_pow)
            prefactor = q_power(exponent) * minus_x**a_pow * minus_y**b_pow
            numerator = (
                ThetaSpec(
                    -q_power(n * p * (s - r)) * x**n / y**n,
                    q_power(n * p * p),
                ),
                ThetaSpec(
                    q_power(disc * (r + s) + p * (n + p)) * x**p * y**p,
                    big_base,
                ),
            )
            denominator = (
                ThetaSpec(
                    q_power(disc * r + Fraction(p * (n + p), 2)) * minus_y ** (n + p) / minus_x**n,
                    big_base,
                ),
                ThetaSpec(
                    q_power(disc * s + Fraction(p * (n + p), 2)) * minus_x ** (n + p) / minus_y**n,
                    big_base,
                ),
            )
            terms.append(ThetaQuotientTerm(r, s, prefactor, numerator, denominator))
    return terms


def check_generic(mp: MasterParams, spec: Specialization) -> None:
    """Raise NonGenericSpecialization if a denominator theta is identically zero"""
    for term in theta_np_terms(mp, spec):
        for theta_spec in term.denominator:
            if vanishes(theta_spec):
                raise NonGenericSpecialization(
                    f"theta{mp} at {spec}: denominator {theta_spec} vanishes identically"
                )


def theta_np(
    mp: MasterParams, spec: Specialization, precision: Rational, *, times_jbar: bool = False
) -> QSeries:
    """
    theta_{n,p}(x,y,q) truncated below the precision.

    With times_jbar the Jbar_{0,np(2n+p)} denominator is left out, giving
    Jbar_{0,np(2n+p)} * theta_{n,p}.
    """
    precision = to_fraction(precision)
    check_generic(mp, spec)
    big = mp.theta_modulus
    total = QSeries.zero(precision)
    for term in theta_np_terms(mp, spec):
        if term.vanishes:
            continue
        denominators = [
            lambda working, t=theta_spec: theta_j(t, working) for theta_spec in term.denominator
        ]
        if not times_jbar:
            denominators.append(lambda working: Jbar(0, mp.jbar_modulus, working))
        numerators = [lambda working: Jm(big, working) ** 3] + [
            lambda working, t=theta_spec: theta_j(t, working) for theta_spec in term.numerator
        ]
        quotient = quotient_at(
            precision - term.prefactor.exp,
            lambda working, builders=numerators: product_at(working, builders),
            lambda working, builders=denominators: product_at(working, builders),
        )
        total = total + quotient.shift(term.prefactor)
    return total


@log_execution_time
def verify_master(
    mp: MasterParams,
    spec: Specialization,
    precision: Rational,
    limits: Optional[EnumerationLimits] = None,
) -> VerificationReport:
    """f_{n,n+p,n} against g_{n,n+p,n} + theta_{n,p}"""
    started = time.perf_counter()
    hp = mp.hecke
    lhs = f_abc(hp, spec.x, spec.y, precision, limits)
    rhs = g_abc(hp.a, hp.b, hp.c, spec.x, spec.y, precision) + theta_np(mp, spec, precision)
    report = compare(
        lhs, rhs, label=f"master{mp} {spec}", required=precision, started=started
    )
    logger.info(report.summary())
    return report


def _verify_case(case: Tuple[MasterParams, Specialization, Fraction]) -> VerificationReport:
    mp, spec, precision = case
    return verify_master(mp, spec, precision)


def verify_master_matrix(
    cases: Sequence[Tuple[MasterParams, Specialization]],
    precision: Rational,
    jobs: int = 1,
) -> List[VerificationReport]:
    """verify_master over many (params, specialization) pairs; results keep input order"""
    work = [(mp, spec, to_fraction(precision)) for mp, spec in cases]
    if jobs <= 1 or len(work) <= 1:
        return [_verify_case(case) for case in work]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_verify_case, work))


# Window conditions


@dataclass(frozen=True)
class WindowCondition:
    """lower < order < upper for one q-order"""

    name: str
    order: Fraction
    lower: Fraction
    upper: Fraction

    @property
    def holds(self) -> bool:
        return self.lower < self.order < self.upper

    def __str__(self) -> str:
        mark = "ok" if self.holds else "FAILS"
        return f"{self.name}: {self.lower} < {self.order} < {self.upper} [{mark}]"


@dataclass(frozen=True)
class WindowReport:
    params: MasterParams
    spec: Specialization
    hypotheses: Tuple[WindowCondition, ...]
    conclusions: Tuple[WindowCondition, ...]

    @property
    def hypothesis_holds(self) -> bool:
        return all(c.holds for c in self.hypotheses)

    @property
    def conclusions_hold(self) -> bool:
        return all(c.holds for c in self.conclusions)

    @property
    def holds(self) -> bool:
        return self.hypothesis_holds and self.conclusions_hold

    def failures(self) -> List[WindowCondition]:
        return [c for c in self.hypotheses + self.conclusions if not c.holds]

    def summary(self) -> str:
        lines = [f"windows for {self.params} at {self.spec}"]
        lines.extend(f"  {c}" for c in self.hypotheses)
        if self.hypothesis_holds:
            lines.extend(f"  {c}" for c in self.conclusions)
        else:
            lines.append("  hypothesis fails; conclusions not asserted")
        return "\n".join(lines)


def appell_offset(mp: MasterParams, k: int) -> int:
    """n(np + C(p+1,2)) - kp(2n+p), shifted by np(2n+p) on the upper k-range"""
    n, p = mp.n, mp.p
    offset = n * (n * p + p * (p + 1) // 2) - k * mp.discriminant
    if k > mp.half:
        offset += mp.jbar_modulus
    return offset


def check_windows(mp: MasterParams, spec: Specialization) -> WindowReport:
    """q-order versions of the hypotheses and conclusions used by the lattice-sum proof"""
    n, p = mp.n, mp.p
    hypotheses = []
    conclusions = []
    for side, s in (("x^-n y^(n+p)", spec), ("y^-n x^(n+p)", spec.mirrored())):
        # ord(x^-n y^(n+p)) and its mirror
        level = -n * s.x.exp + (n + p) * s.y.exp
        hypotheses.append(
            WindowCondition(
                f"hypothesis on {side}",
                level,
                Fraction(-p * (n + p), 2),
                Fraction(p * (3 * n + p), 2),
            )
        )
        for r in range(p):
            conclusions.append(
                WindowCondition(
                    f"theta argument r={r} for {side}",
                    Fraction(p * (n + p), 2) + mp.discriminant * r + level,
                    Fraction(0),
                    Fraction(mp.theta_modulus),
                )
            )
        for k in range(n):
            conclusions.append(
                WindowCondition(
                    f"Appell argument k={k} for {side}",
                    appell_offset(mp, k) - level,
                    Fraction(0),
                    Fraction(mp.jbar_modulus),
                )
            )
    return WindowReport(mp, spec, tuple(hypotheses), tuple(conclusions))


# Sign identities


def lemma_sign_ids(n: int, bound: int, perturbation: int = 0) -> VerificationReport:
    """
    Exhaustive check of the two case-split sign identities over |r|,|s|,|w| <= bound:

        sg(nr+k+nw+[n/2])   = -sg(-w-1-r) for k <= [n/2],  -sg(-w-2-r) otherwise
        sg(ns+k-nw-[n/2]-1) = -sg(w-s)    for k <= [n/2],  -sg(w-1-s)  otherwise

    perturbation shifts the left-hand sign arguments.
    """
    started = time.perf_counter()
    if n < 1 or bound < 0:
        raise ValueError("lemma_sign_ids needs n >= 1 and bound >= 0")
    half = n // 2
    span = range(-bound, bound + 1)
    checked = 0
    detail = ""
    for k in range(n):
        low = k <= half
        for w in span:
            for r in span:
                checked += 1
                lhs = sg(n * r + k + n * w + half + perturbation)
                rhs = -sg(-w - 1 - r) if low else -sg(-w - 2 - r)
                if lhs != rhs:
                    detail = f"first identity fails at n={n}, k={k}, r={r}, w={w}: {lhs} != {rhs}"
                    break
                lhs = sg(n * r + k - n * w - half - 1 + perturbation)
                rhs = -sg(w - r) if low else -sg(w - 1 - r)
                if lhs != rhs:
                    detail = f"second identity fails at n={n}, k={k}, s={r}, w={w}: {lhs} != {rhs}"
                    break
            if detail:
                break
        if detail:
            break
    status = VerificationStatus.MISMATCH if detail else VerificationStatus.VERIFIED
    if not detail:
        detail = f"{checked} cases"
    return VerificationReport(
        status=status,
        checked_to=Fraction(bound),
        elapsed=time.perf_counter() - started,
        label=f"sign identities n={n}",
        detail=detail,
    )
