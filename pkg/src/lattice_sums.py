"""
HeckMort - Lattice Sums
Sign-weighted sums of q-monomials over integer lattices, truncated below a horizon.

A LatticeSum is described by
    - an exponent: a quadratic polynomial in the summation indices (the q-power of a term)
    - coefficient factors: base**power(indices) with integer-valued powers
    - regions: polyhedral pieces {form >= 0, ...} carrying a constant weight; sign weights
      such as sg(r) or (sg(r)+sg(s))/2 decompose into such pieces

Evaluation walks the indices outermost first. For each index the feasible interval is
computed exactly by Fourier-Motzkin projection of the region onto that index. The
innermost index is solved in closed form (the exponent is a univariate quadratic there);
outer indices are scanned outward and a direction stops after `patience` residue periods
of nonempty rows whose row minimum is beyond the horizon and no lower than the row one
period back. The period of an index is the largest ratio |c_inner| / gcd(c_inner, c_index)
over the region constraints: a bound such as ceil(-(r + h) / n) on an inner index makes the
row minima cycle with period n in r, dropping inside each cycle while growing from cycle
to cycle. Row minima of a convex form restricted to a convex piece are convex along each
residue class; the extra patience and the bound-doubling tests cover the indefinite forms
where that argument only holds on the pieces actually enumerated.
"""

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from itertools import product
import math
from typing import Deque, Dict, List, Optional, Sequence, Tuple, Union

from engine_errors import NonterminatingEnumeration
from logging_setup import get_logger
from series_core import QSeries, Rational, SignedMonomial, to_fraction

logger = get_logger(__name__)

Scalar = Union[int, Fraction]


@dataclass(frozen=True)
class EnumerationLimits:
    """Stopping rule parameters of the lattice scan"""

    patience: int = 3
    max_steps: int = 100_000

    def doubled(self) -> "EnumerationLimits":
        return EnumerationLimits(self.patience * 2, self.max_steps * 2)


DEFAULT_LIMITS = EnumerationLimits()


@dataclass(frozen=True)
class Affine:
    """c_0 + sum c_i * index_i"""

    coeffs: Tuple[Fraction, ...]
    const: Fraction = Fraction(0)

    @staticmethod
    def variables(dims: int) -> Tuple["Affine", ...]:
        return tuple(
            Affine(tuple(Fraction(int(i == j)) for j in range(dims))) for i in range(dims)
        )

    @property
    def dims(self) -> int:
        return len(self.coeffs)

    def _lift(self, other: Union["Affine", Scalar]) -> "Affine":
        if isinstance(other, Affine):
            return other
        return Affine(tuple(Fraction(0) for _ in self.coeffs), to_fraction(other))

    def __add__(self, other: Union["Affine", Scalar]) -> "Affine":
        if isinstance(other, Quadratic):
            return NotImplemented
        other = self._lift(other)
        return Affine(
            tuple(a + b for a, b in zip(self.coeffs, other.coeffs)), self.const + other.const
        )

    __radd__ = __add__

    def __neg__(self) -> "Affine":
        return Affine(tuple(-a for a in self.coeffs), -self.const)

    def __sub__(self, other: Union["Affine", Scalar]) -> "Affine":
        if isinstance(other, Quadratic):
            return NotImplemented
        return self + (-self._lift(other))

    def __rsub__(self, other: Scalar) -> "Affine":
        return (-self) + other

    def __mul__(self, other: Union["Affine", Scalar]) -> Union["Affine", "Quadratic"]:
        if isinstance(other, Affine):
            pairs: Dict[Tuple[int, int], Fraction] = {}
            for i, a in enumerate(self.coeffs):
                if not a:
                    continue
                for j, b in enumerate(other.coeffs):
                    if b:
                        key = (min(i, j), max(i, j))
                        pairs[key] = pairs.get(key, Fraction(0)) + a * b
            linear = Affine(
                tuple(a * other.const + b * self.const for a, b in zip(self.coeffs, other.coeffs)),
                self.const * other.const,
            )
            return Quadratic.build(pairs, linear)
        if isinstance(other, Quadratic):
            return NotImplemented
        factor = to_fraction(other)
        return Affine(tuple(a * factor for a in self.coeffs), self.const * factor)

    __rmul__ = __mul__

    def __call__(self, point: Sequence[int]) -> Fraction:
        return self.const + sum((a * x for a, x in zip(self.coeffs, point)), Fraction(0))

    def is_integral(self) -> bool:
        return self.const.denominator == 1 and all(a.denominator == 1 for a in self.coeffs)


@dataclass(frozen=True)
class Quadratic:
    """sum_{i<=j} c_ij * index_i * index_j + affine part"""

    pairs: Tuple[Tuple[Tuple[int, int], Fraction], ...]
    linear: Affine

    @staticmethod
    def build(pairs: Dict[Tuple[int, int], Fraction], linear: Affine) -> "Quadratic":
        return Quadratic(tuple(sorted((k, v) for k, v in pairs.items() if v)), linear)

    @staticmethod
    def of(value: Union["Quadratic", Affine]) -> "Quadratic":
        if isinstance(value, Quadratic):
            return value
        return Quadratic((), value)

    @property
    def dims(self) -> int:
        return self.linear.dims

    def __add__(self, other: Union["Quadratic", Affine, Scalar]) -> "Quadratic":
        if isinstance(other, (int, Fraction)):
            return Quadratic(self.pairs, self.linear + other)
        other = Quadratic.of(other)
        merged = dict(self.pairs)
        for key, value in other.pairs:
            merged[key] = merged.get(key, Fraction(0)) + value
        return Quadratic.build(merged, self.linear + other.linear)

    __radd__ = __add__

    def __neg__(self) -> "Quadratic":
        return Quadratic(tuple((k, -v) for k, v in self.pairs), -self.linear)

    def __sub__(self, other: Union["Quadratic", Affine, Scalar]) -> "Quadratic":
        if isinstance(other, (int, Fraction)):
            return self + (-to_fraction(other))
        return self + (-Quadratic.of(other))

    def __rsub__(self, other: Union[Affine, Scalar]) -> "Quadratic":
        return (-self) + other

    def __mul__(self, other: Scalar) -> "Quadratic":
        factor = to_fraction(other)
        return Quadratic.build({k: v * factor for k, v in self.pairs}, self.linear * factor)

    __rmul__ = __mul__

    def __call__(self, point: Sequence[int]) -> Fraction:
        total = self.linear(point)
        for (i, j), value in self.pairs:
            total += value * point[i] * point[j]
        return total

    def denominators(self) -> List[int]:
        dens = [v.denominator for _, v in self.pairs]
        dens.extend(a.denominator for a in self.linear.coeffs)
        dens.append(self.linear.const.denominator)
        return dens


def binom2(form: Union[Affine, Scalar]) -> Union[Quadratic, Fraction]:
    """C(form, 2) = form*(form-1)/2 as a polynomial in the indices"""
    if not isinstance(form, Affine):
        value = to_fraction(form)
        return value * (value - 1) / 2
    return (form * form - form) * Fraction(1, 2)


@dataclass(frozen=True)
class CoefficientFactor:
    """base ** power(indices); the power must be integer-valued on the lattice"""

    base: Fraction
    power: Quadratic


@dataclass(frozen=True)
class Region:
    """Polyhedral piece {form >= 0 for every constraint} with constant weight"""

    weight: Fraction
    constraints: Tuple[Affine, ...]


def negative(form: Affine) -> Affine:
    """form < 0 as a '>= 0' constraint, valid for integer-valued forms"""
    return -form - 1


def sg_regions(form: Affine) -> Tuple[Region, ...]:
    """sg(form): +1 where form >= 0 and -1 elsewhere"""
    return (Region(Fraction(1), (form,)), Region(Fraction(-1), (negative(form),)))


def sg2_regions(first: Affine, second: Affine) -> Tuple[Region, ...]:
    """(sg(first) + sg(second))/2, nonzero only on the two same-sign quadrants"""
    return (
        Region(Fraction(1), (first, second)),
        Region(Fraction(-1), (negative(first), negative(second))),
    )


def sign_sum_regions(forms: Sequence[Affine], scale: Rational = 1) -> Tuple[Region, ...]:
    """scale * sum of sg(form), split over every sign pattern; zero-weight pieces dropped"""
    pieces = []
    for signs in product((1, -1), repeat=len(forms)):
        weight = to_fraction(scale) * sum(signs)
        if weight:
            constraints = tuple(
                form if sign > 0 else negative(form) for sign, form in zip(signs, forms)
            )
            pieces.append(Region(weight, constraints))
    return tuple(pieces)


def restrict(regions: Sequence[Region], *constraints: Affine) -> Tuple[Region, ...]:
    return tuple(Region(r.weight, r.constraints + constraints) for r in regions)


def index_range(index: Affine, low: int, high: int) -> Tuple[Affine, Affine]:
    """low <= index <= high"""
    return (index - low, high - index)


def monomial_power(
    m: SignedMonomial, power: Union[Affine, Quadratic]
) -> Tuple[Quadratic, CoefficientFactor]:
    """m ** power: the q-exponent contribution and the coefficient factor"""
    power = Quadratic.of(power)
    return power * m.exp, CoefficientFactor(m.coeff, power)


@dataclass(frozen=True)
class LatticeSum:
    """scalar * sum over regions of weight * prod(factors) * q^exponent"""

    exponent: Quadratic
    factors: Tuple[CoefficientFactor, ...]
    regions: Tuple[Region, ...]
    scalar: Fraction = Fraction(1)
    label: str = ""

    @property
    def dims(self) -> int:
        return self.exponent.dims

    def evaluate(
        self, precision: Rational, limits: Optional[EnumerationLimits] = None
    ) -> QSeries:
        scanner = _LatticeScanner(self, to_fraction(precision), limits or DEFAULT_LIMITS)
        return scanner.run()


class _CompiledForm:
    """Integer evaluation of scale * Quadratic"""

    def __init__(self, form: Quadratic, scale: int):
        self.scale = scale
        self.quad = [(i, j, int(v * scale)) for (i, j), v in form.pairs]
        self.linear = [(i, int(a * scale)) for i, a in enumerate(form.linear.coeffs) if a]
        self.const = int(form.linear.const * scale)

    def __call__(self, point: Sequence[int]) -> int:
        total = self.const
        for i, c in self.linear:
            total += c * point[i]
        for i, j, c in self.quad:
            total += c * point[i] * point[j]
        return total


_Constraint = Tuple[Tuple[int, ...], int]


def _eliminate(constraints: List[_Constraint], var: int) -> List[_Constraint]:
    """Fourier-Motzkin elimination of one variable from {coeffs . x + const >= 0}"""
    upper, lower, rest = [], [], []
    for coeffs, const in constraints:
        c = coeffs[var]
        if c > 0:
            lower.append((coeffs, const))
        elif c < 0:
            upper.append((coeffs, const))
        else:
            rest.append((coeffs, const))
    combined = set(rest)
    for lo_coeffs, lo_const in lower:
        a = lo_coeffs[var]
        for up_coeffs, up_const in upper:
            b = -up_coeffs[var]
            coeffs = tuple(b * x + a * y for x, y in zip(lo_coeffs, up_coeffs))
            const = b * lo_const + a * up_const
            divisor = reduce(math.gcd, coeffs, abs(const))
            if divisor > 1:
                coeffs = tuple(x // divisor for x in coeffs)
                const //= divisor
            combined.add((coeffs, const))
    return list(combined)


def _residue_period(constraints: List[_Constraint], level: int) -> int:
    """Cycle length of the row minima of index `level` induced by the inner-index bounds"""
    period = 1
    for coeffs, _ in constraints:
        outer = coeffs[level]
        if outer == 0:
            continue
        for inner in coeffs[level + 1 :]:
            if inner:
                cycle = abs(inner) // math.gcd(inner, outer)
                period = period * cycle // math.gcd(period, cycle)
    return period


class _LatticeScanner:
    """One evaluation pass of a LatticeSum below a horizon"""

    def __init__(self, lsum: LatticeSum, precision: Fraction, limits: EnumerationLimits):
        self.lsum = lsum
        self.dims = lsum.dims
        self.precision = precision
        self.limits = limits
        dens = lsum.exponent.denominators() + [precision.denominator]
        self.scale = reduce(lambda a, b: a * b // math.gcd(a, b), dens, 1)
        self.energy = _CompiledForm(lsum.exponent, self.scale)
        self.limit = -((-precision.numerator * self.scale) // precision.denominator)
        self.powers = []
        for factor in lsum.factors:
            power_scale = reduce(
                lambda a, b: a * b // math.gcd(a, b), factor.power.denominators(), 1
            )
            self.powers.append((factor.base, _CompiledForm(factor.power, power_scale)))
        self.terms: Dict[int, Scalar] = {}
        self.visited = 0

    def run(self) -> QSeries:
        for region in self.lsum.regions:
            for form in region.constraints:
                if not form.is_integral():
                    raise ValueError(f"Region constraint must be integral: {form}")
            constraints = [
                (tuple(int(a) for a in form.coeffs), int(form.const))
                for form in region.constraints
            ]
            projections = [constraints]
            for var in range(self.dims - 1, 0, -1):
                projections.append(_eliminate(projections[-1], var))
            # projections[k] constrains variables 0..dims-1-k only
            self.projections = projections[::-1]
            self.periods = [_residue_period(constraints, level) for level in range(self.dims)]
            self.weight = region.weight * self.lsum.scalar
            self._scan_level(0, [0] * self.dims)
        logger.debug(
            f"Lattice sum {self.lsum.label or '<anon>'}: {self.visited} rows, "
            f"{len(self.terms)} exponents below q^({self.precision})"
        )
        return QSeries.from_scaled_terms(self.terms, self.scale, self.precision)

    def _interval(self, level: int, point: List[int]) -> Tuple[Optional[int], Optional[int], bool]:
        """Feasible integer interval of index `level` given the outer indices"""
        lo: Optional[int] = None
        hi: Optional[int] = None
        for coeffs, const in self.projections[level]:
            value = const + sum(coeffs[i] * point[i] for i in range(level))
            c = coeffs[level]
            if c > 0:
                bound = -((value) // c)  # index >= ceil(-value / c)
                lo = bound if lo is None else max(lo, bound)
            elif c < 0:
                bound = value // (-c)  # index <= floor(value / -c)
                hi = bound if hi is None else min(hi, bound)
            elif value < 0:
                return 0, -1, False
        empty = lo is not None and hi is not None and lo > hi
        return lo, hi, not empty

    def _scan_level(self, level: int, point: List[int]) -> Optional[int]:
        """Enumerate indices level.. for fixed outer indices; minimum exponent seen, None if empty"""
        lo, hi, feasible = self._interval(level, point)
        if not feasible:
            return None
        self.visited += 1
        if level == self.dims - 1:
            return self._innermost(point, lo, hi)
        if lo is not None and hi is not None:
            best = None
            for i in range(lo, hi + 1):
                point[level] = i
                row = self._scan_level(level + 1, point)
                if row is not None and (best is None or row < best):
                    best = row
            return best
        if lo is not None:
            return self._scan_direction(level, point, lo, 1, hi)
        if hi is not None:
            return self._scan_direction(level, point, hi, -1, lo)
        upward = self._scan_direction(level, point, 0, 1, None)
        downward = self._scan_direction(level, point, -1, -1, None)
        candidates = [v for v in (upward, downward) if v is not None]
        return min(candidates) if candidates else None

    def _scan_direction(
        self, level: int, point: List[int], start: int, step: int, bound: Optional[int]
    ) -> Optional[int]:
        period = self.periods[level]
        needed = self.limits.patience * period
        best = None
        recent: Deque[Optional[int]] = deque(maxlen=period)
        streak = 0
        steps = 0
        i = start
        while bound is None or (i <= bound if step > 0 else i >= bound):
            steps += 1
            if steps > self.limits.max_steps:
                raise NonterminatingEnumeration(
                    f"{self.lsum.label or 'lattice sum'}: index {level} scanned "
                    f"{self.limits.max_steps} rows without leaving the support"
                )
            point[level] = i
            row = self._scan_level(level + 1, point)
            if row is not None:
                best = row if best is None else min(best, row)
                earlier = recent[0] if len(recent) == period else None
                if row >= self.limit and (earlier is None or row >= earlier):
                    streak += 1
                else:
                    streak = 0
                if streak >= needed:
                    break
            recent.append(row)
            i += step
        return best

    def _innermost(self, point: List[int], lo: Optional[int], hi: Optional[int]) -> Optional[int]:
        d = self.dims - 1
        point[d] = 0
        gamma = self.energy(point)
        point[d] = 1
        e_plus = self.energy(point)
        point[d] = -1
        e_minus = self.energy(point)
        alpha = (e_plus + e_minus - 2 * gamma) // 2
        beta = (e_plus - e_minus) // 2

        def energy(i: int) -> int:
            return alpha * i * i + beta * i + gamma

        def clamp(i: int) -> int:
            if lo is not None and i < lo:
                return lo
            if hi is not None and i > hi:
                return hi
            return i

        limit = self.limit
        if alpha > 0:
            start = clamp((-beta) // (2 * alpha))
            i = start
            while lo is None or i >= lo:
                e = energy(i)
                if e >= limit:
                    break
                self._emit(point, d, i, e)
                i -= 1
            i = start + 1
            while hi is None or i <= hi:
                e = energy(i)
                if e >= limit:
                    break
                self._emit(point, d, i, e)
                i += 1
            return min(energy(start), energy(clamp(start + 1)))
        if alpha == 0 and beta > 0:
            if lo is None:
                raise NonterminatingEnumeration(
                    f"{self.lsum.label or 'lattice sum'}: exponent decreases without bound"
                )
            i = lo
            while (hi is None or i <= hi) and energy(i) < limit:
                self._emit(point, d, i, energy(i))
                i += 1
            return energy(lo)
        if alpha == 0 and beta < 0:
            if hi is None:
                raise NonterminatingEnumeration(
                    f"{self.lsum.label or 'lattice sum'}: exponent decreases without bound"
                )
            i = hi
            while (lo is None or i >= lo) and energy(i) < limit:
                self._emit(point, d, i, energy(i))
                i -= 1
            return energy(hi)
        if lo is None or hi is None:
            if alpha == 0 and gamma >= limit:
                return gamma
            raise NonterminatingEnumeration(
                f"{self.lsum.label or 'lattice sum'}: unbounded index with non-growing exponent"
            )
        for i in range(lo, hi + 1):
            e = energy(i)
            if e < limit:
                self._emit(point, d, i, e)
        return min(energy(lo), energy(hi))

    def _emit(self, point: List[int], d: int, i: int, exponent: int) -> None:
        point[d] = i
        coeff: Scalar = 1
        for base, power in self.powers:
            scaled = power(point)
            exp, rem = divmod(scaled, power.scale)
            if rem:
                raise ValueError("Coefficient power is not integral on the lattice")
            if base == 1:
                continue
            if base == -1:
                coeff = -coeff if exp % 2 else coeff
            else:
                coeff = coeff * base**exp
        value = coeff * self.weight
        self.terms[exponent] = self.terms.get(exponent, 0) + value


def evaluate_all(sums: Sequence[LatticeSum], precision: Rational,
                 limits: Optional[EnumerationLimits] = None) -> QSeries:
    """Sum of several lattice sums at one horizon"""
    total = QSeries.zero(precision)
    for lsum in sums:
        total = total + lsum.evaluate(precision, limits)
    return total
