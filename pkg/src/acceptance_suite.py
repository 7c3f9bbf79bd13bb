"""
HeckMort - Acceptance Suite
Runs the full verification matrix behind `heckmort selftest`

Checks:
- Triple product sum form against product form
- 1psi1 double sums against theta quotients
- Master formula over the (n, p) matrix
- Catalog identities at their published orders
- Appell-Lerch double-sum expansions
- Sign identities used by the lattice-sum proof
- Proof replay stage by stage
"""

import json
import time
from dataclasses import dataclass
from datetime import datetime
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from appell import verify_expansion
from eulerian import catalog_verify
from hecke import onepsi_corollary_lhs, onepsi_corollary_rhs
from logging_setup import LoggerMixin
from master_formula import (
    MasterParams,
    Specialization,
    lemma_sign_ids,
    q_power,
    verify_master,
)
from proof_replay import replay_proof
from series_core import SignedMonomial, VerificationReport, compare
from theta import ThetaSpec, triple_product_check

MASTER_PARAMS: Tuple[Tuple[int, int], ...] = (
    (1, 1), (1, 2), (2, 1), (1, 3), (3, 1), (2, 3), (3, 2)
)

# x = -q^a, y = -q^b; the exponent denominators keep every denominator theta
# and every Appell-Lerch argument off the integral powers of its base
MASTER_SPECS: Tuple[Specialization, ...] = (
    Specialization(-q_power(Fraction(1, 5)), -q_power(Fraction(2, 7))),
    Specialization(-q_power(Fraction(3, 7)), -q_power(Fraction(1, 5))),
    Specialization(-q_power(Fraction(4, 11)), -q_power(Fraction(5, 13))),
)

# positive and non-unit coefficients; a coefficient off {1, -1} keeps every theta nonzero
MASTER_EXTRA_CASES: Tuple[Tuple[MasterParams, Specialization], ...] = (
    (MasterParams(2, 1), Specialization(q_power(1), q_power(Fraction(1, 3)))),
    (
        MasterParams(1, 2),
        Specialization(q_power(Fraction(1, 5), Fraction(1, 2)), -q_power(Fraction(2, 7))),
    ),
    (
        MasterParams(3, 1),
        Specialization(q_power(Fraction(2, 5)), q_power(Fraction(1, 7), Fraction(3, 2))),
    ),
)

REPLAY_CASES: Tuple[Tuple[MasterParams, Specialization], ...] = (
    (MasterParams(1, 2), Specialization(-q_power(1), -q_power(1))),
    (MasterParams(1, 2), Specialization(q_power(1), -q_power(1))),
    (MasterParams(3, 2), Specialization(-q_power(1), -q_power(1))),
)

# (catalog name, order, time budget in seconds)
CATALOG_CHECKS: Tuple[Tuple[str, int, float], ...] = (
    ("f0_conjecture", 150, 30.0),
    ("slater_39", 200, 10.0),
    ("andrews_1_14", 150, 30.0),
    ("mortenson_g_neg_q", 150, 30.0),
    ("andrews_4_25", 120, 60.0),
    ("eq_1_5", 120, 60.0),
)


@dataclass(frozen=True)
class AcceptanceResult:
    """One acceptance criterion"""
    name: str
    status: str  # PASS/FAIL/WARNING
    duration: float
    details: Dict[str, Any]


def random_monomial(
    rng: np.random.Generator, low: Fraction, high: Fraction, coefficients: Sequence[int]
) -> SignedMonomial:
    """c * q^e with low < e < high, e a fraction with denominator 2..9"""
    while True:
        den = int(rng.integers(2, 10))
        num = int(rng.integers(int(low * den) - 1, int(high * den) + 2))
        exp = Fraction(num, den)
        if low < exp < high and exp.denominator > 1:
            coeff = int(rng.choice(coefficients))
            return SignedMonomial.q(exp, coeff)


class AcceptanceSuite(LoggerMixin):
    """Acceptance criteria of the series engine, each timed against its budget"""

    def __init__(self, seed: int = 2024, echo: Callable[[str], None] = print):
        self.rng = np.random.default_rng(seed)
        self.echo = echo
        self.test_results: List[AcceptanceResult] = []

    def log_test_result(
        self, test_name: str, status: str, duration: float = 0.0, details: Optional[Dict] = None
    ) -> None:
        """Record a criterion and echo one status line"""
        result = AcceptanceResult(test_name, status, round(duration, 3), details or {})
        self.test_results.append(result)

        status_symbol = "[OK]" if status == "PASS" else "[FAIL]" if status == "FAIL" else "[WARN]"
        self.echo(f"{status_symbol} {test_name:<40} | {status:<7} | {duration:.3f}s")

        if details and status in ("FAIL", "WARNING"):
            for key, value in details.items():
                self.echo(f"    {key}: {value}")

        if status == "FAIL":
            self.logger.error(f"{test_name} failed: {details}")
        else:
            self.logger.info(f"{test_name}: {status} in {duration:.3f}s")

    def _record(
        self,
        test_name: str,
        reports: Sequence[VerificationReport],
        started: float,
        budget: float,
        expect_verified: bool = True,
    ) -> bool:
        duration = time.perf_counter() - started
        failures = [r for r in reports if r.verified != expect_verified]
        details: Dict[str, Any] = {"cases": len(reports)}
        if failures:
            details["failures"] = [r.summary() for r in failures[:5]]
            self.log_test_result(test_name, "FAIL", duration, details)
            return False
        if duration > budget:
            details["budget_seconds"] = budget
            self.log_test_result(test_name, "FAIL", duration, details)
            return False
        self.log_test_result(test_name, "PASS", duration, details)
        return True

    def _guarded(self, test_name: str, check: Callable[[float], bool]) -> bool:
        started = time.perf_counter()
        try:
            return check(started)
        except Exception as e:
            self.log_test_result(
                test_name, "FAIL", time.perf_counter() - started, {"error": str(e)}
            )
            return False

    # criteria

    def test_triple_product(self) -> bool:
        def check(started: float) -> bool:
            reports = []
            for _ in range(25):
                arg = random_monomial(self.rng, Fraction(-3), Fraction(3), [1, -1, 2, -3])
                base = SignedMonomial.q(int(self.rng.integers(1, 4)))
                reports.append(triple_product_check(ThetaSpec(arg, base), 200))
            return self._record("Triple product", reports, started, 5.0)

        return self._guarded("Triple product", check)

    def test_onepsi_corollary(self) -> bool:
        def check(started: float) -> bool:
            reports = []
            for _ in range(10):
                x = random_monomial(self.rng, Fraction(0), Fraction(1), [1, -1, 2])
                y = random_monomial(self.rng, Fraction(0), Fraction(1), [1, -1, 3])
                reports.append(
                    compare(
                        onepsi_corollary_lhs(x, y, 100),
                        onepsi_corollary_rhs(x, y, 100),
                        label=f"1psi1 at x={x}, y={y}",
                        required=100,
                    )
                )
            return self._record("1psi1 double sum", reports, started, 10.0)

        return self._guarded("1psi1 double sum", check)

    def test_master_formula(self) -> bool:
        def check(started: float) -> bool:
            reports = [
                verify_master(MasterParams(n, p), spec, 60)
                for n, p in MASTER_PARAMS
                for spec in MASTER_SPECS
            ]
            reports += [verify_master(mp, spec, 60) for mp, spec in MASTER_EXTRA_CASES]
            return self._record("Master formula matrix", reports, started, 120.0)

        return self._guarded("Master formula matrix", check)

    def test_catalog(self) -> bool:
        all_passed = True
        for name, order, budget in CATALOG_CHECKS:
            test_name = f"Catalog {name}"
            passed = self._guarded(
                test_name,
                lambda started, name=name, order=order, budget=budget, test_name=test_name: (
                    self._record(test_name, [catalog_verify(name, order)], started, budget)
                ),
            )
            all_passed = all_passed and passed
        return all_passed

    def test_appell_expansions(self) -> bool:
        def check(started: float) -> bool:
            reports = []
            for low, high in ((Fraction(0), Fraction(1)), (Fraction(-1), Fraction(0))):
                for _ in range(10):
                    x = random_monomial(self.rng, low, high, [1, -1, 2])
                    reports.append(verify_expansion(x, 60))
            return self._record("Appell-Lerch expansions", reports, started, 10.0)

        return self._guarded("Appell-Lerch expansions", check)

    def test_sign_identities(self) -> bool:
        def check(started: float) -> bool:
            reports = [lemma_sign_ids(n, 10) for n in range(1, 10, 2)]
            return self._record("Sign identities (odd n)", reports, started, 5.0)

        passed = self._guarded("Sign identities (odd n)", check)

        # for even n the first identity breaks at k = n/2; that counterexample is a finding
        def even(started: float) -> bool:
            reports = [lemma_sign_ids(n, 10) for n in range(2, 10, 2)]
            ok = self._record(
                "Sign identities (even n counterexample)",
                reports,
                started,
                5.0,
                expect_verified=False,
            )
            for report in reports:
                self.logger.info(f"Finding: {report.detail}")
            return ok

        return self._guarded("Sign identities (even n counterexample)", even) and passed

    def test_proof_replay(self) -> bool:
        def check(started: float) -> bool:
            reports: List[VerificationReport] = []
            for mp, spec in REPLAY_CASES:
                reports.extend(replay_proof(mp, spec, 30))
            return self._record("Proof replay", reports, started, 120.0)

        return self._guarded("Proof replay", check)

    # reporting

    def generate_report(self) -> Dict[str, Any]:
        """Summary plus every criterion, JSON-ready"""
        total = len(self.test_results)
        passed = len([t for t in self.test_results if t.status == "PASS"])
        failed = len([t for t in self.test_results if t.status == "FAIL"])
        warnings = len([t for t in self.test_results if t.status == "WARNING"])

        return {
            "validation_summary": {
                "timestamp": datetime.now().isoformat(),
                "total_tests": total,
                "passed": passed,
                "failed": failed,
                "warnings": warnings,
                "success_rate": f"{(passed / total * 100):.1f}%" if total > 0 else "0%",
            },
            "detailed_results": [
                {
                    "test_name": t.name,
                    "status": t.status,
                    "duration_seconds": t.duration,
                    "details": t.details,
                }
                for t in self.test_results
            ],
        }

    def run_full_validation(self) -> bool:
        """Run every criterion; True when none failed"""
        self.echo("HeckMort - Acceptance Suite")
        self.echo("=" * 60)

        tests = [
            self.test_triple_product,
            self.test_onepsi_corollary,
            self.test_master_formula,
            self.test_catalog,
            self.test_appell_expansions,
            self.test_sign_identities,
            self.test_proof_replay,
        ]

        all_tests_passed = True
        for test_func in tests:
            if not test_func():
                all_tests_passed = False

        summary = self.generate_report()["validation_summary"]
        self.echo("=" * 60)
        self.echo(
            f"Passed: {summary['passed']}  Failed: {summary['failed']}  "
            f"Warnings: {summary['warnings']}  ({summary['success_rate']})"
        )
        return all_tests_passed


def run_acceptance(report_path: Optional[Path] = None, seed: int = 2024) -> bool:
    """Run the suite and optionally save the JSON report"""
    suite = AcceptanceSuite(seed)
    success = suite.run_full_validation()
    if report_path is not None:
        report_path.parent.mkdir(parents=True, exist_ok=True)
        with open(report_path, "w", encoding="utf-8") as f:
            json.dump(suite.generate_report(), f, indent=2, ensure_ascii=False)
        suite.logger.info(f"Acceptance report saved to {report_path}")
    return success
