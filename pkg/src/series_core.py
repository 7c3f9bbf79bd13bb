"""
HeckMort - Series Core
Exact truncated Laurent series in q with rational exponents and rational coefficients.

Every engine module computes into QSeries. A series is known exactly modulo q^P where P
is its precision; stored exponents are always strictly below P. Internally exponents are
kept as integers over a per-series common denominator, which is reduced after every
operation, so two equal series always have equal internal state.

Usage:
    one_minus_q = QSeries({0: 1, 1: -1}, precision=5)
    geometric = one_minus_q.invert()        # 1 + q + q^2 + q^3 + q^4 + O(q^5)
"""

import math
import time
from dataclasses import dataclass, replace
from enum import Enum
from fractions import Fraction
from typing import (
    Callable,
    Dict,
    Iterator,
    List,
    Mapping,
    Optional,
    Sequence,
    Tuple,
    Union,
)

import numpy as np

from engine_errors import HalfPowerOfNegative, InsufficientPrecision, IrrationalPower

Exponent = Fraction
Coefficient = Fraction
Rational = Union[int, Fraction]

# Stored coefficients are ints when integral, Fractions otherwise
_Scalar = Union[int, Fraction]


def to_fraction(value: Union[int, Fraction, str]) -> Fraction:
    """Convert an exact rational (int, Fraction or 'a/b' text) to Fraction; floats are rejected"""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("Booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"Expected an exact rational, got {type(value).__name__}")


def _norm(value: _Scalar) -> _Scalar:
    if isinstance(value, Fraction) and value.denominator == 1:
        return value.numerator
    return value


def _ceil_scaled(value: Fraction, den: int) -> int:
    """Smallest integer k with k >= value * den"""
    return -((-value.numerator * den) // value.denominator)


def _integer_root(n: int, degree: int) -> Optional[int]:
    """Exact integer degree-th root of n >= 0, or None"""
    if n < 2:
        return n
    lo, hi = 1, 1 << (n.bit_length() // degree + 1)
    while lo <= hi:
        mid = (lo + hi) // 2
        power = mid**degree
        if power == n:
            return mid
        if power < n:
            lo = mid + 1
        else:
            hi = mid - 1
    return None


def rational_power(value: Fraction, k: Fraction) -> Fraction:
    """value**k for rational k, exact; non-integral k needs a positive value with a rational root"""
    if k.denominator == 1:
        return value ** k.numerator
    if value < 0:
        raise HalfPowerOfNegative(f"({value})^({k}) needs a branch choice for a negative base")
    num_root = _integer_root(value.numerator, k.denominator)
    den_root = _integer_root(value.denominator, k.denominator)
    if num_root is None or den_root is None:
        raise IrrationalPower(f"({value})^({k}) is not rational")
    return Fraction(num_root, den_root) ** k.numerator


@dataclass(frozen=True)
class SignedMonomial:
    """coeff * q^exp with nonzero rational coeff"""

    coeff: Fraction
    exp: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "coeff", to_fraction(self.coeff))
        object.__setattr__(self, "exp", to_fraction(self.exp))
        if self.coeff == 0:
            raise ValueError("SignedMonomial coefficient must be nonzero")

    @classmethod
    def q(cls, exp: Rational = 1, coeff: Rational = 1) -> "SignedMonomial":
        return cls(to_fraction(coeff), to_fraction(exp))

    @property
    def q_order(self) -> Fraction:
        return self.exp

    def __mul__(self, other: Union["SignedMonomial", int, Fraction]) -> "SignedMonomial":
        if isinstance(other, SignedMonomial):
            return SignedMonomial(self.coeff * other.coeff, self.exp + other.exp)
        if isinstance(other, (int, Fraction)):
            return SignedMonomial(self.coeff * to_fraction(other), self.exp)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other: "SignedMonomial") -> "SignedMonomial":
        return self * other.inverse()

    def __neg__(self) -> "SignedMonomial":
        return SignedMonomial(-self.coeff, self.exp)

    def __pow__(self, k: Rational) -> "SignedMonomial":
        return pow_monomial(self, to_fraction(k))

    def inverse(self) -> "SignedMonomial":
        return SignedMonomial(1 / self.coeff, -self.exp)

    def integral_log(self, base: "SignedMonomial") -> Optional[int]:
        """k with self == base**k, when such an integer exists"""
        if base.exp == 0:
            return None
        k = self.exp / base.exp
        if k.denominator != 1:
            return None
        if base.coeff ** k.numerator != self.coeff:
            return None
        return k.numerator

    def is_integral_power_of(self, base: "SignedMonomial") -> bool:
        return self.integral_log(base) is not None

    def to_series(self, precision: Rational) -> "QSeries":
        return QSeries({self.exp: self.coeff}, precision)

    def __str__(self) -> str:
        return f"{self.coeff}*q^({self.exp})"


def pow_monomial(m: SignedMonomial, k: Rational) -> SignedMonomial:
    """m**k; non-integral k is defined only for a positive coefficient with a rational root"""
    k = to_fraction(k)
    return SignedMonomial(rational_power(m.coeff, k), m.exp * k)


class QSeries:
    """Truncated Laurent series with exact rational exponents and coefficients"""

    __slots__ = ("_den", "_terms", "_precision")

    def __init__(
        self,
        terms: Optional[Mapping[Rational, Rational]] = None,
        precision: Rational = 0,
    ):
        items = [(to_fraction(e), to_fraction(c)) for e, c in (terms or {}).items()]
        den = 1
        for exponent, _ in items:
            den = den * exponent.denominator // math.gcd(den, exponent.denominator)
        scaled: Dict[int, _Scalar] = {}
        for exponent, coeff in items:
            key = exponent.numerator * (den // exponent.denominator)
            scaled[key] = scaled.get(key, 0) + coeff
        self._assign(scaled, den, to_fraction(precision))

    @classmethod
    def _from_scaled(
        cls, scaled: Mapping[int, _Scalar], den: int, precision: Fraction
    ) -> "QSeries":
        series = cls.__new__(cls)
        series._assign(scaled, den, precision)
        return series

    def _assign(self, scaled: Mapping[int, _Scalar], den: int, precision: Fraction) -> None:
        limit = _ceil_scaled(precision, den)
        kept = sorted((k, c) for k, c in scaled.items() if c != 0 and k < limit)
        divisor = den
        for key, _ in kept:
            divisor = math.gcd(divisor, key)
            if divisor == 1:
                break
        if kept and divisor > 1:
            kept = [(k // divisor, c) for k, c in kept]
            den //= divisor
        elif not kept:
            den = 1
        self._den = den
        self._terms: Dict[int, _Scalar] = {k: _norm(c) for k, c in kept}
        self._precision = precision

    # Constructors

    @classmethod
    def from_scaled_terms(
        cls, scaled: Mapping[int, _Scalar], den: int, precision: Rational
    ) -> "QSeries":
        """Build from integer exponent keys meaning key/den"""
        return cls._from_scaled(scaled, den, to_fraction(precision))

    @classmethod
    def zero(cls, precision: Rational) -> "QSeries":
        return cls({}, precision)

    @classmethod
    def constant(cls, value: Rational, precision: Rational) -> "QSeries":
        return cls({0: value}, precision)

    @classmethod
    def one(cls, precision: Rational) -> "QSeries":
        return cls.constant(1, precision)

    @classmethod
    def monomial(cls, m: SignedMonomial, precision: Rational) -> "QSeries":
        return cls({m.exp: m.coeff}, precision)

    # Inspection

    @property
    def precision(self) -> Fraction:
        return self._precision

    @property
    def common_denominator(self) -> int:
        return self._den

    def terms(self) -> Iterator[Tuple[Fraction, Fraction]]:
        """(exponent, coefficient) pairs in ascending exponent order"""
        for key, coeff in self._terms.items():
            yield Fraction(key, self._den), Fraction(coeff)

    def exponents(self) -> List[Fraction]:
        return [Fraction(key, self._den) for key in self._terms]

    def __len__(self) -> int:
        return len(self._terms)

    @property
    def is_empty(self) -> bool:
        return not self._terms

    @property
    def q_order(self) -> Fraction:
        """Least stored exponent, or the precision horizon when nothing is stored"""
        if not self._terms:
            return self._precision
        return Fraction(next(iter(self._terms)), self._den)

    def leading_term(self) -> SignedMonomial:
        if not self._terms:
            raise InsufficientPrecision(f"No term below q^({self._precision})")
        key = next(iter(self._terms))
        return SignedMonomial(Fraction(self._terms[key]), Fraction(key, self._den))

    def coefficient(self, exponent: Rational) -> Fraction:
        exponent = to_fraction(exponent)
        if exponent >= self._precision:
            raise InsufficientPrecision(
                f"Coefficient of q^({exponent}) is beyond the horizon q^({self._precision})"
            )
        scaled = exponent * self._den
        if scaled.denominator != 1:
            return Fraction(0)
        return Fraction(self._terms.get(scaled.numerator, 0))

    def has_integer_coefficients(self) -> bool:
        return all(isinstance(c, int) for c in self._terms.values())

    def _rescaled(self, den: int) -> Dict[int, _Scalar]:
        factor = den // self._den
        if factor == 1:
            return dict(self._terms)
        return {k * factor: c for k, c in self._terms.items()}

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, QSeries):
            return NotImplemented
        return (
            self._precision == other._precision
            and self._den == other._den
            and self._terms == other._terms
        )

    def __hash__(self) -> int:
        return hash((self._precision, self._den, tuple(self._terms.items())))

    def __repr__(self) -> str:
        return f"QSeries({self.to_text()})"

    # Arithmetic

    def truncate(self, precision: Rational) -> "QSeries":
        precision = min(to_fraction(precision), self._precision)
        if precision == self._precision:
            return self
        return QSeries._from_scaled(self._terms, self._den, precision)

    def __neg__(self) -> "QSeries":
        return QSeries._from_scaled(
            {k: -c for k, c in self._terms.items()}, self._den, self._precision
        )

    def __add__(self, other: Union["QSeries", int, Fraction]) -> "QSeries":
        if not isinstance(other, QSeries):
            if isinstance(other, (int, Fraction)):
                other = QSeries.constant(other, self._precision)
            else:
                return NotImplemented
        den = self._den * other._den // math.gcd(self._den, other._den)
        total = self._rescaled(den)
        for key, coeff in other._rescaled(den).items():
            total[key] = total.get(key, 0) + coeff
        return QSeries._from_scaled(total, den, min(self._precision, other._precision))

    __radd__ = __add__

    def __sub__(self, other: Union["QSeries", int, Fraction]) -> "QSeries":
        return self + (-other)

    def __rsub__(self, other: Union[int, Fraction]) -> "QSeries":
        return (-self) + other

    def scale(self, factor: Rational) -> "QSeries":
        factor = to_fraction(factor)
        if factor == 0:
            return QSeries.zero(self._precision)
        return QSeries._from_scaled(
            {k: c * factor for k, c in self._terms.items()}, self._den, self._precision
        )

    def shift(self, m: SignedMonomial) -> "QSeries":
        """Multiply by the monomial m exactly; the horizon moves by m.exp"""
        den = self._den * m.exp.denominator // math.gcd(self._den, m.exp.denominator)
        offset = m.exp.numerator * (den // m.exp.denominator)
        shifted = {k + offset: c * m.coeff for k, c in self._rescaled(den).items()}
        return QSeries._from_scaled(shifted, den, self._precision + m.exp)

    def __mul__(self, other: Union["QSeries", SignedMonomial, int, Fraction]) -> "QSeries":
        if isinstance(other, SignedMonomial):
            return self.shift(other)
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, QSeries):
            return NotImplemented
        precision = min(
            self._precision + other.q_order, other._precision + self.q_order
        )
        den = self._den * other._den // math.gcd(self._den, other._den)
        limit = _ceil_scaled(precision, den)
        left = list(self._rescaled(den).items())
        right = list(other._rescaled(den).items())
        product: Dict[int, _Scalar] = {}
        for key_a, coeff_a in left:
            for key_b, coeff_b in right:
                key = key_a + key_b
                if key >= limit:
                    break
                product[key] = product.get(key, 0) + coeff_a * coeff_b
        return QSeries._from_scaled(product, den, precision)

    __rmul__ = __mul__

    def invert(self) -> "QSeries":
        """Reciprocal: factor out the leading monomial and expand the unit part"""
        if not self._terms:
            raise InsufficientPrecision(
                f"Cannot invert a series with no term below q^({self._precision})"
            )
        items = list(self._terms.items())
        lead_key, lead_coeff = items[0]
        lead = Fraction(lead_coeff)
        length = _ceil_scaled(self._precision, self._den) - lead_key
        unit = [(k - lead_key, _norm(Fraction(c) / lead)) for k, c in items[1:]]
        reciprocal: List[_Scalar] = [0] * length
        reciprocal[0] = 1
        for m in range(1, length):
            acc: _Scalar = 0
            for offset, coeff in unit:
                if offset > m:
                    break
                previous = reciprocal[m - offset]
                if previous:
                    acc -= coeff * previous
            reciprocal[m] = _norm(acc)
        inverse_lead = 1 / lead
        scaled = {
            m - lead_key: c * inverse_lead for m, c in enumerate(reciprocal) if c
        }
        lead_exp = Fraction(lead_key, self._den)
        return QSeries._from_scaled(scaled, self._den, self._precision - 2 * lead_exp)

    def __truediv__(self, other: Union["QSeries", SignedMonomial, int, Fraction]) -> "QSeries":
        if isinstance(other, SignedMonomial):
            return self.shift(other.inverse())
        if isinstance(other, (int, Fraction)):
            return self.scale(1 / to_fraction(other))
        if not isinstance(other, QSeries):
            return NotImplemented
        return self * other.invert()

    def __rtruediv__(self, other: Union[int, Fraction]) -> "QSeries":
        return self.invert().scale(other)

    def __pow__(self, k: int) -> "QSeries":
        if not isinstance(k, int):
            raise TypeError("QSeries powers must be integers")
        if k < 0:
            return self.invert() ** (-k)
        result = QSeries.one(self._precision - self.q_order)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def substitute_q_power(self, d: int) -> "QSeries":
        """q -> q^d: exponents and precision are multiplied by d"""
        if d < 1:
            raise ValueError("substitute_q_power needs a positive integer")
        scaled = {k * d: c for k, c in self._terms.items()}
        return QSeries._from_scaled(scaled, self._den, self._precision * d)

    # Serialization

    def to_text(self) -> str:
        parts = [f"{Fraction(c)}*q^({Fraction(k, self._den)})" for k, c in self._terms.items()]
        parts.append(f"O(q^({self._precision}))")
        return " + ".join(parts)

    def to_json_obj(self) -> Dict[str, list]:
        terms = []
        for exponent, coeff in self.terms():
            terms.append(
                [exponent.numerator, exponent.denominator, str(coeff.numerator), str(coeff.denominator)]
            )
        return {
            "terms": terms,
            "precision": [self._precision.numerator, self._precision.denominator],
        }

    @classmethod
    def from_json_obj(cls, data: Mapping[str, list]) -> "QSeries":
        terms: Dict[Fraction, Fraction] = {}
        for exp_num, exp_den, coeff_num, coeff_den in data["terms"]:
            terms[Fraction(int(exp_num), int(exp_den))] = Fraction(int(coeff_num), int(coeff_den))
        num, den = data["precision"]
        return cls(terms, Fraction(int(num), int(den)))


# Functional forms of the series operations


def add(a: QSeries, b: QSeries) -> QSeries:
    return a + b


def mul(a: QSeries, b: QSeries) -> QSeries:
    return a * b


def invert(a: QSeries) -> QSeries:
    return a.invert()


def substitute_q_power(a: QSeries, d: int) -> QSeries:
    return a.substitute_q_power(d)


# Working-precision management

SeriesBuilder = Callable[[Fraction], QSeries]

_MAX_ROUNDS = 8


def _ensure(result: QSeries, precision: Fraction, what: str) -> QSeries:
    if result.precision < precision:
        raise InsufficientPrecision(
            f"{what} only known to q^({result.precision}), needed q^({precision})"
        )
    return result.truncate(precision)


def build_at(build: SeriesBuilder, needed: Rational) -> QSeries:
    """build(needed), asked again with the shortfall added while the builder falls short"""
    needed = to_fraction(needed)
    request = needed
    series = build(request)
    for _ in range(_MAX_ROUNDS):
        if series.precision >= needed:
            break
        request += needed - series.precision
        series = build(request)
    return series


def product_at(precision: Rational, builders: Sequence[SeriesBuilder]) -> QSeries:
    """
    Product of the built factors known to the requested precision.

    Each factor is first built at the target precision to learn its q-order, then
    rebuilt where the other factors' orders demand more (negative orders eat precision).
    """
    precision = to_fraction(precision)
    if not builders:
        return QSeries.one(precision)
    factors = [build(precision) for build in builders]
    for _ in range(_MAX_ROUNDS):
        orders = [f.q_order for f in factors]
        total = sum(orders, Fraction(0))
        changed = False
        for index, build in enumerate(builders):
            needed = precision - (total - orders[index])
            if needed > factors[index].precision:
                factors[index] = build_at(build, needed)
                changed = True
        if not changed:
            break
    result = factors[0]
    for factor in factors[1:]:
        result = result * factor
    return _ensure(result, precision, "Product")


def quotient_at(
    precision: Rational, numerator: SeriesBuilder, denominator: SeriesBuilder
) -> QSeries:
    """numerator / denominator known to the requested precision"""
    precision = to_fraction(precision)
    den = denominator(precision)
    step = max(abs(precision), Fraction(1))
    for _ in range(_MAX_ROUNDS):
        if not den.is_empty:
            break
        den = denominator(den.precision + step)
    if den.is_empty:
        raise InsufficientPrecision(
            f"Denominator has no visible term below q^({den.precision})"
        )
    num = build_at(numerator, precision + den.q_order)
    for _ in range(_MAX_ROUNDS):
        needed_den = precision + 2 * den.q_order - num.q_order
        needed_num = precision + den.q_order
        if needed_den <= den.precision and needed_num <= num.precision:
            break
        if needed_den > den.precision:
            den = build_at(denominator, needed_den)
        if needed_num > num.precision:
            num = build_at(numerator, needed_num)
    return _ensure(num * den.invert(), precision, "Quotient")


def binomial_product(monomials: Sequence[SignedMonomial], precision: Rational) -> QSeries:
    """Product of (1 - m) over a finite list of monomials, known to the requested precision"""
    precision = to_fraction(precision)
    den = precision.denominator
    for m in monomials:
        den = den * m.exp.denominator // math.gcd(den, m.exp.denominator)
    limit = _ceil_scaled(precision, den)
    factors = [(m.exp.numerator * (den // m.exp.denominator), _norm(m.coeff)) for m in monomials]
    low = sum(min(0, shift) for shift, _ in factors)
    if limit <= low:
        return QSeries.zero(precision)
    # Dense exact coefficients for scaled keys low .. limit - low - 1. A downward shift
    # reads past the top only for keys the remaining negative mass cannot bring below limit.
    coeffs = np.zeros(limit - 2 * low, dtype=object)
    coeffs[-low] = 1
    for shift, coeff in factors:
        if shift == 0:
            coeffs = coeffs * (1 - coeff)
        elif abs(shift) < len(coeffs):
            source = coeffs[:-shift] if shift > 0 else coeffs[-shift:]
            if coeff != 1:
                source = coeff * source
            if shift > 0:
                coeffs[shift:] = coeffs[shift:] - source
            else:
                coeffs[:shift] = coeffs[:shift] - source
    terms = {low + index: value for index, value in enumerate(coeffs[: limit - low]) if value}
    return QSeries._from_scaled(terms, den, precision)


def pochhammer_monomials(
    arg: SignedMonomial, base: SignedMonomial, length: Optional[int], precision: Rational
) -> List[SignedMonomial]:
    """
    The monomials arg*base^k for k < length whose factor (1 - arg*base^k) matters below
    the precision. length None means the infinite product; its tail factors are 1 mod q^P.
    """
    precision = to_fraction(precision)
    if base.exp <= 0:
        raise ValueError("Pochhammer base must have positive q-order")
    if length is not None:
        return [arg * base ** k for k in range(length)]
    # Orders grow linearly in k, so the finitely many negative ones bound the product below
    lowest = Fraction(0)
    k = 0
    while arg.exp + k * base.exp < 0:
        lowest += arg.exp + k * base.exp
        k += 1
    monomials = []
    k = 0
    while arg.exp + k * base.exp < precision - lowest:
        monomials.append(arg * base ** k)
        k += 1
    return monomials


# Verification reports


class VerificationStatus(Enum):
    """Outcome of a coefficient comparison"""

    VERIFIED = "Verified"
    MISMATCH = "Mismatch"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class Mismatch:
    """First differing coefficient"""

    exponent: Fraction
    lhs: Fraction
    rhs: Fraction


@dataclass(frozen=True)
class VerificationReport:
    """Result of comparing two series, or of an exhaustive check"""

    status: VerificationStatus
    checked_to: Fraction
    first_mismatch: Optional[Mismatch] = None
    elapsed: float = 0.0
    label: str = ""
    detail: str = ""

    @property
    def verified(self) -> bool:
        return self.status is VerificationStatus.VERIFIED

    def with_label(self, label: str) -> "VerificationReport":
        return replace(self, label=label)

    def with_elapsed(self, elapsed: float) -> "VerificationReport":
        return replace(self, elapsed=elapsed)

    def summary(self) -> str:
        text = f"{self.label or 'identity'}: {self.status.value} to q^({self.checked_to})"
        if self.first_mismatch is not None:
            m = self.first_mismatch
            text += f", first mismatch at q^({m.exponent}): {m.lhs} != {m.rhs}"
        if self.detail:
            text += f" [{self.detail}]"
        return text


def compare(
    a: QSeries,
    b: QSeries,
    *,
    label: str = "",
    required: Optional[Rational] = None,
    started: Optional[float] = None,
) -> VerificationReport:
    """
    Exact coefficient comparison strictly below min(a.precision, b.precision).

    With required set, a comparison that could only reach a lower horizon is Inconclusive.
    started is a time.perf_counter() value; elapsed then covers the whole computation.
    """
    clock = started if started is not None else time.perf_counter()
    horizon = min(a.precision, b.precision)
    den = a._den * b._den // math.gcd(a._den, b._den)
    limit = _ceil_scaled(horizon, den)
    left = a._rescaled(den)
    right = b._rescaled(den)
    mismatch = None
    for key in sorted(set(left) | set(right)):
        if key >= limit:
            break
        lhs, rhs = left.get(key, 0), right.get(key, 0)
        if lhs != rhs:
            mismatch = Mismatch(Fraction(key, den), Fraction(lhs), Fraction(rhs))
            break
    if mismatch is not None:
        status = VerificationStatus.MISMATCH
    elif required is not None and horizon < to_fraction(required):
        status = VerificationStatus.INCONCLUSIVE
    else:
        status = VerificationStatus.VERIFIED
    return VerificationReport(
        status=status,
        checked_to=horizon,
        first_mismatch=mismatch,
        elapsed=time.perf_counter() - clock,
        label=label,
    )
