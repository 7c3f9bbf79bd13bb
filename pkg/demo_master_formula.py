"""
HeckMort - Master Formula Demo
Demo script walking through f_{n,n+p,n} = g_{n,n+p,n} + theta_{n,p} for a few (n, p)
"""

import sys
from fractions import Fraction
from pathlib import Path

# Add src to path
sys.path.insert(0, str(Path(__file__).parent / "src"))

from engine_errors import HeckMortError  # noqa: E402
from hecke import HeckeParams, f_abc  # noqa: E402
from logging_setup import get_logger, setup_logging  # noqa: E402
from master_formula import (  # noqa: E402
    MasterParams,
    Specialization,
    check_windows,
    q_power,
    verify_master,
)
from proof_replay import replay_proof  # noqa: E402

ORDER = 30


def main() -> bool:
    """Demo of the master formula checks at a small order"""
    print("=" * 80)
    print("MASTER FORMULA DEMO")
    print(f"Exact coefficient comparison below q^{ORDER}")
    print("=" * 80)
    print()
    print("This demo will:")
    print("1. Expand f_{1,2,1}(q,q,q) directly from the double sum")
    print("2. Check f = g + theta for three (n, p) pairs")
    print("3. Print the window report of an in-window specialization")
    print("4. Replay the lattice-sum proof stage by stage for (n, p) = (1, 2)")
    print("=" * 80)

    setup_logging()
    logger = get_logger(__name__)

    try:
        q = q_power(1)
        series = f_abc(HeckeParams(1, 2, 1), q, q, 7)
        print(f"f_(1,2,1)(q,q,q) = {series.to_text()}")
        print()

        spec = Specialization(-q_power(Fraction(1, 5)), -q_power(Fraction(2, 7)))
        all_verified = True
        for n, p in ((1, 1), (1, 2), (2, 1)):
            report = verify_master(MasterParams(n, p), spec, ORDER)
            print(report.summary())
            all_verified = all_verified and report.verified
        print()

        mp = MasterParams(1, 2)
        in_window = Specialization(-q, -q)
        print(check_windows(mp, in_window).summary())
        print()

        for report in replay_proof(mp, in_window, ORDER):
            print(report.summary())
            all_verified = all_verified and report.verified

        print("=" * 80)
        print("ALL CHECKS VERIFIED" if all_verified else "SOME CHECKS FAILED")
        print("=" * 80)
        return all_verified

    except HeckMortError as e:
        logger.error(f"Demo error: {e}")
        print(f"Error: {e}")
        return False


if __name__ == "__main__":
    success = main()
    print("Demo completed successfully!" if success else "Demo failed!")
    sys.exit(0 if success else 1)
