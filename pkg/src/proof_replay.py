"""
HeckMort - Proof Replay
Executable replay of the lattice-sum proof of the master formula for odd n.

Both sides of

    Jbar_{0,np(2n+p)} f_{n,n+p,n} - Jbar_{0,np(2n+p)} g_{n,n+p,n} = Jbar_{0,np(2n+p)} theta_{n,p}

are rewritten step by step. Every intermediate form is evaluated independently as a truncated
series and each rewrite is checked against its predecessor.

Right-hand chain:
    rh0  theta quotients (series)
    rh1  bilateral 1psi1 expansion of each quotient, indices (r, s, v, u, t)
    rh2  after r = R - pu, s = S - pt, v = t - u - w
    rh3  recentred so the quadratic part is that of f, weight sg(r+nw+h, s-nw-h-1)
    rh4  the same weight written as (sg(A) + sg(B))/2
    rh5  r and s split into residue classes mod n
Left-hand chain:
    lh1  Jbar * f, as a product and as a triple sum
    lh2A -Jbar * g (series)
    lh2B each Appell-Lerch factor replaced by its double-sum expansion
    lh2C t = (n+p)s + r
    lh2D r and s exchanged in the x-prefactor groups
    lh2E v eliminated in favour of the Jbar index w
"""

import time
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from engine_errors import WindowViolation
from hecke import f_abc
from lattice_sums import (
    Affine,
    CoefficientFactor,
    EnumerationLimits,
    LatticeSum,
    Quadratic,
    Region,
    binom2,
    index_range,
    monomial_power,
    restrict,
    sg2_regions,
    sign_sum_regions,
)
from logging_setup import LoggerMixin, log_execution_time
from master_formula import (
    MasterParams,
    Specialization,
    check_generic,
    check_windows,
    g_abc,
    theta_np,
)
from series_core import (
    QSeries,
    Rational,
    SeriesBuilder,
    SignedMonomial,
    VerificationReport,
    compare,
    product_at,
    to_fraction,
)
from theta import Jbar

RH_CHAIN = ("rh0", "rh1", "rh2", "rh3", "rh4", "rh5")
LH2_CHAIN = ("lh2A", "lh2B", "lh2C", "lh2D", "lh2E")

Power = Tuple[Quadratic, Tuple[CoefficientFactor, ...]]


class ProofReplayer(LoggerMixin):
    """Builds and evaluates every stage of the proof for one (n, p) and specialization"""

    def __init__(
        self,
        mp: MasterParams,
        spec: Specialization,
        precision: Rational,
        limits: Optional[EnumerationLimits] = None,
    ):
        if not mp.is_odd:
            raise ValueError(f"Proof replay covers odd n only, got {mp}")
        windows = check_windows(mp, spec)
        if not windows.holds:
            failed = "; ".join(str(c) for c in windows.failures())
            raise WindowViolation(f"Replay for {mp} at {spec} outside its windows: {failed}")
        check_generic(mp, spec)
        self.mp = mp
        self.spec = spec
        self.precision = to_fraction(precision)
        self.limits = limits
        n, p = mp.n, mp.p
        self.n = n
        self.p = p
        self.h = (n - 1) // 2
        self.disc = mp.discriminant
        self.big = mp.theta_modulus
        self.modulus = mp.jbar_modulus

    # helpers

    def _powers(
        self,
        first: SignedMonomial,
        first_power: Affine,
        second: SignedMonomial,
        second_power: Affine,
    ) -> Power:
        first_exp, first_factor = monomial_power(first, first_power)
        second_exp, second_factor = monomial_power(second, second_power)
        return first_exp + second_exp, (first_factor, second_factor)

    def _xy_powers(self, x_power: Affine, y_power: Affine) -> Power:
        """(-x)^x_power (-y)^y_power"""
        return self._powers(-self.spec.x, x_power, -self.spec.y, y_power)

    def _hecke_form(self, r: Affine, s: Affine) -> Quadratic:
        """nC(r,2) + (n+p)rs + nC(s,2)"""
        n, p = self.n, self.p
        return n * binom2(r) + (n + p) * (r * s) + n * binom2(s)

    def _appell_constant(self, k: int) -> int:
        """n(np + C(p+1,2)) - kp(2n+p)"""
        n, p = self.n, self.p
        return n * (n * p + p * (p + 1) // 2) - k * self.disc

    def _groups(self) -> List[Tuple[int, bool, bool]]:
        """(k, shifted, mirrored) for the four groups of the g expansion"""
        groups = []
        for mirrored in (False, True):
            for k in range(self.n):
                groups.append((k, k > self.h, mirrored))
        return groups

    def _ordered_pair(self, mirrored: bool) -> Tuple[SignedMonomial, SignedMonomial]:
        """(-x, -y), or (-y, -x) for the half of g with the y-prefactor"""
        minus_x, minus_y = -self.spec.x, -self.spec.y
        return (minus_y, minus_x) if mirrored else (minus_x, minus_y)

    # right-hand chain

    def rh1(self) -> LatticeSum:
        n, p, h = self.n, self.p, self.h
        r, s, v, u, t = Affine.variables(5)
        half_step = Fraction(p * (n + p), 2)
        exponent = (
            self._hecke_form(r - h, s + h + 1)
            + n * p * p * binom2(v)
            + n * p * ((s - r) * v)
            + self.big * (t * u)
            + self.disc * (r * t + s * u)
            + half_step * (t + u)
        )
        monomial_exp, factors = self._xy_powers(
            r + (n + p) * u - n * t + n * v - h,
            s + (n + p) * t - n * u - n * v + h + 1,
        )
        regions = restrict(
            sg2_regions(t, u), *index_range(r, 0, p - 1), *index_range(s, 0, p - 1)
        )
        return LatticeSum(exponent + monomial_exp, factors, regions, label="rh1")

    def rh2(self) -> LatticeSum:
        n, h = self.n, self.h
        w, big_r, big_s = Affine.variables(3)
        a = big_r - n * w - h
        b = big_s + n * w + h + 1
        exponent = self._hecke_form(a, b) + self.modulus * binom2(w + 1)
        monomial_exp, factors = self._xy_powers(a, b)
        return LatticeSum(
            exponent + monomial_exp, factors, sg2_regions(big_r, big_s), label="rh2"
        )

    def _recentred(self, regions: Tuple[Region, ...], label: str) -> LatticeSum:
        r, s, w = Affine.variables(3)
        exponent = self._hecke_form(r, s) + self.modulus * binom2(w + 1)
        monomial_exp, factors = self._xy_powers(r, s)
        return LatticeSum(exponent + monomial_exp, factors, regions, label=label)

    def _shifted_forms(self, r: Affine, s: Affine, w: Affine) -> Tuple[Affine, Affine]:
        """r + nw + h and s - nw - h - 1"""
        n, h = self.n, self.h
        return r + n * w + h, s - n * w - h - 1

    def rh3(self) -> LatticeSum:
        r, s, w = Affine.variables(3)
        first, second = self._shifted_forms(r, s, w)
        return self._recentred(sg2_regions(first, second), "rh3")

    def rh4(self) -> LatticeSum:
        r, s, w = Affine.variables(3)
        first, second = self._shifted_forms(r, s, w)
        return self._recentred(sign_sum_regions([first, second], Fraction(1, 2)), "rh4")

    def rh5(self) -> LatticeSum:
        n = self.n
        k1, k2, big_r, big_s, w = Affine.variables(5)
        r = n * big_r + k1
        s = n * big_s + k2
        first, second = self._shifted_forms(r, s, w)
        regions = restrict(
            sign_sum_regions([first, second], Fraction(1, 2)),
            *index_range(k1, 0, n - 1),
            *index_range(k2, 0, n - 1),
        )
        exponent = self._hecke_form(r, s) + self.modulus * binom2(w + 1)
        monomial_exp, factors = self._xy_powers(r, s)
        return LatticeSum(exponent + monomial_exp, factors, regions, label="rh5")

    # left-hand chain

    def lh1(self) -> LatticeSum:
        r, s, _ = Affine.variables(3)
        return self._recentred(sg2_regions(r, s), "lh1")

    def lh2b(self) -> List[LatticeSum]:
        n, p, M = self.n, self.p, self.modulus
        sums = []
        for k, shifted, mirrored in self._groups():
            v, s, t = Affine.variables(3)
            first, second = self._ordered_pair(mirrored)
            if shifted:
                appell = binom2(v + 1) + (v + 1) * (s + 1)
            else:
                appell = binom2(v + 1) + v * s
            exponent = (
                n * binom2(Fraction(k))
                + n * binom2(t)
                + (n + p) * k * t
                + self._appell_constant(k) * s
                + M * appell
            )
            monomial_exp, factors = self._powers(first, k + n * s, second, t - (n + p) * s)
            sums.append(
                LatticeSum(
                    exponent + monomial_exp,
                    factors,
                    sg2_regions(v, s),
                    scalar=Fraction(-1),
                    label=f"lh2B k={k}{' mirrored' if mirrored else ''}",
                )
            )
        return sums

    def _residue_form(self, k: int, outer: Affine, inner: Affine) -> Quadratic:
        """nC(inner,2) + (n+p) inner (n outer + k) + nC(n outer + k, 2)"""
        return self._hecke_form(inner, self.n * outer + k)

    def lh2c(self) -> List[LatticeSum]:
        n, M = self.n, self.modulus
        sums = []
        for k, shifted, mirrored in self._groups():
            v, s, r = Affine.variables(3)
            first, second = self._ordered_pair(mirrored)
            exponent = self._residue_form(k, s, r) + M * binom2(s + v + (2 if shifted else 1))
            monomial_exp, factors = self._powers(first, k + n * s, second, r)
            sums.append(
                LatticeSum(
                    exponent + monomial_exp,
                    factors,
                    sg2_regions(v, s),
                    scalar=Fraction(-1),
                    label=f"lh2C k={k}{' mirrored' if mirrored else ''}",
                )
            )
        return sums

    def lh2d(self) -> List[LatticeSum]:
        n, M = self.n, self.modulus
        sums = []
        for k, shifted, mirrored in self._groups():
            # x-prefactor groups: the residue index is renamed r and the free index s, so
            # both halves read (v, residue index, free index)
            v, outer, inner = Affine.variables(3)
            first, second = self._ordered_pair(mirrored)
            exponent = self._residue_form(k, outer, inner) + M * binom2(
                outer + v + (2 if shifted else 1)
            )
            monomial_exp, factors = self._powers(first, k + n * outer, second, inner)
            sums.append(
                LatticeSum(
                    exponent + monomial_exp,
                    factors,
                    sg2_regions(v, outer),
                    scalar=Fraction(-1),
                    label=f"lh2D k={k}{' mirrored' if mirrored else ''}",
                )
            )
        return sums

    def lh2e(self) -> List[LatticeSum]:
        n, M = self.n, self.modulus
        sums = []
        for k, shifted, mirrored in self._groups():
            w, outer, inner = Affine.variables(3)
            first, second = self._ordered_pair(mirrored)
            if mirrored:
                # v = w - s, or w - 1 - s on the upper residues
                eliminated = w - outer - (1 if shifted else 0)
            else:
                # v = -w - 1 - r, or -w - 2 - r on the upper residues
                eliminated = -w - outer - (2 if shifted else 1)
            exponent = self._residue_form(k, outer, inner) + M * binom2(w + 1)
            monomial_exp, factors = self._powers(first, k + n * outer, second, inner)
            sums.append(
                LatticeSum(
                    exponent + monomial_exp,
                    factors,
                    sg2_regions(eliminated, outer),
                    scalar=Fraction(-1),
                    label=f"lh2E k={k}{' mirrored' if mirrored else ''}",
                )
            )
        return sums

    # evaluation

    def _evaluate(self, sums: List[LatticeSum]) -> QSeries:
        total = QSeries.zero(self.precision)
        for lsum in sums:
            total = total + lsum.evaluate(self.precision, self.limits)
        return total

    def _jbar_times(self, builder: SeriesBuilder) -> QSeries:
        return product_at(
            self.precision,
            [lambda working: Jbar(0, self.modulus, working), builder],
        )

    def stages(self) -> Dict[str, QSeries]:
        """Every stage as a truncated series, in proof order"""
        mp, spec, P = self.mp, self.spec, self.precision
        hp = mp.hecke
        values: Dict[str, QSeries] = {}
        values["rh0"] = theta_np(mp, spec, P, times_jbar=True)
        for name, build in (
            ("rh1", self.rh1),
            ("rh2", self.rh2),
            ("rh3", self.rh3),
            ("rh4", self.rh4),
            ("rh5", self.rh5),
        ):
            values[name] = self._evaluate([build()])
            self.logger.debug(f"{name} evaluated: {len(values[name])} terms")
        values["lh1 product"] = self._jbar_times(
            lambda working: f_abc(hp, spec.x, spec.y, working, self.limits)
        )
        values["lh1"] = self._evaluate([self.lh1()])
        values["lh2A"] = -self._jbar_times(
            lambda working: g_abc(hp.a, hp.b, hp.c, spec.x, spec.y, working)
        )
        for name, build in (
            ("lh2B", self.lh2b),
            ("lh2C", self.lh2c),
            ("lh2D", self.lh2d),
            ("lh2E", self.lh2e),
        ):
            values[name] = self._evaluate(build())
            self.logger.debug(f"{name} evaluated: {len(values[name])} terms")
        return values

    def run(self) -> List[VerificationReport]:
        started = time.perf_counter()
        values = self.stages()
        P = self.precision
        checks: List[Tuple[str, QSeries, QSeries]] = [
            (f"{before} = {after}", values[before], values[after])
            for before, after in zip(RH_CHAIN, RH_CHAIN[1:])
        ]
        checks.append(("lh1 product = lh1", values["lh1 product"], values["lh1"]))
        checks.extend(
            (f"{before} = {after}", values[before], values[after])
            for before, after in zip(LH2_CHAIN, LH2_CHAIN[1:])
        )
        checks.append(
            ("lh1 + lh2A = rh0", values["lh1 product"] + values["lh2A"], values["rh0"])
        )
        checks.append(("lh1 + lh2E = rh5", values["lh1"] + values["lh2E"], values["rh5"]))
        checks.append(("lh1 + lh2E = rh3", values["lh1"] + values["lh2E"], values["rh3"]))
        reports = []
        for label, lhs, rhs in checks:
            report = compare(lhs, rhs, label=f"replay{self.mp} {label}", required=P)
            if not report.verified:
                self.logger.warning(report.summary())
            reports.append(report)
        elapsed = time.perf_counter() - started
        self.logger.info(
            f"Replay {self.mp} at {self.spec}: "
            f"{sum(r.verified for r in reports)}/{len(reports)} steps verified in {elapsed:.2f}s"
        )
        return reports


@log_execution_time
def replay_proof(
    mp: MasterParams,
    spec: Specialization,
    precision: Rational,
    limits: Optional[EnumerationLimits] = None,
) -> List[VerificationReport]:
    """Evaluate every proof stage below the precision and check each rewrite"""
    return ProofReplayer(mp, spec, precision, limits).run()
