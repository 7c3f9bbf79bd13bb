"""
HeckMort - Acceptance suite bookkeeping tests
"""

import time
from fractions import Fraction

from acceptance_suite import AcceptanceSuite, random_monomial


def make_suite():
    lines = []
    return AcceptanceSuite(seed=3, echo=lines.append), lines


def test_status_lines_and_report():
    suite, lines = make_suite()
    suite.log_test_result("first", "PASS", 0.5)
    suite.log_test_result("second", "FAIL", 1.0, {"error": "boom"})
    suite.log_test_result("third", "WARNING", 2.0, {"budget_seconds": 1.0})
    assert lines[0].startswith("[OK] first")
    assert lines[1].startswith("[FAIL] second")
    assert lines[2] == "    error: boom"
    assert lines[3].startswith("[WARN] third")

    summary = suite.generate_report()["validation_summary"]
    assert (summary["passed"], summary["failed"], summary["warnings"]) == (1, 1, 1)
    assert summary["success_rate"] == "33.3%"


def test_sign_identity_criteria_pass():
    suite, lines = make_suite()
    assert suite.test_sign_identities()
    assert [r.status for r in suite.test_results] == ["PASS", "PASS"]
    assert "even n counterexample" in lines[1]


def test_guard_turns_exceptions_into_failures():
    suite, _ = make_suite()

    def broken(started):
        raise RuntimeError("no series")

    assert not suite._guarded("broken", broken)
    assert suite.test_results[0].details == {"error": "no series"}


def test_random_monomials_stay_in_range():
    suite, _ = make_suite()
    for _ in range(50):
        mono = random_monomial(suite.rng, Fraction(-1), Fraction(0), [1, -1])
        assert -1 < mono.exp < 0
        assert mono.exp.denominator > 1
        assert mono.coeff in (1, -1)


def test_budget_overrun_fails_the_criterion():
    suite, lines = make_suite()
    assert not suite._record("slow", [], time.perf_counter() - 10, 1.0)
    result = suite.test_results[0]
    assert result.status == "FAIL"
    assert result.details["budget_seconds"] == 1.0
    assert lines[0].startswith("[FAIL] slow")
    assert suite._record("quick", [], time.perf_counter(), 60.0)
