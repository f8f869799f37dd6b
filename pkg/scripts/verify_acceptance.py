import os
import sys
from fractions import Fraction

# Add project root to python path
sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), "..")))

from core.logger import configure_logging
from models.balance_model import Balanced
from services.balance_service import check_balance, verify_certificate
from services.generator_service import gen_brickwall, gen_diamond, gen_harmonic
from services.geometry_service import overhang, validate
from services.harness_service import end_to_end


def _line(ok: bool, label: str, detail: str = "") -> bool:
    mark = "✅ PASS" if ok else "❌ FAIL"
    print(f"{mark} {label}{' - ' + detail if detail else ''}")
    return ok


def verify_brickwalls(max_d: int = 8) -> bool:
    print("🔍 Brick-wall stacks...")
    ok = True
    for d in range(1, max_d + 1):
        stack = validate(gen_brickwall(d))
        expected = d * (d - 1) * (2 * d - 1) // 3 + 1
        shape = stack.n == expected and overhang(stack) == Fraction(d, 2)
        report = end_to_end(stack, subject=f"brickwall({d})")
        ok &= _line(shape and report.passed, f"brickwall({d})", f"n={stack.n} overhang={overhang(stack)}")
        if not report.passed:
            print(report.render())
    return ok


def verify_harmonic(max_n: int = 50) -> bool:
    print("\n🔍 Harmonic stacks...")
    failed = []
    for n in range(1, max_n + 1):
        stack = gen_harmonic(n)
        verdict = check_balance(stack)
        if not (isinstance(verdict, Balanced) and verify_certificate(stack, verdict.certificate)):
            failed.append(n)
    return _line(not failed, f"harmonic(1..{max_n}) balanced with verified certificates", f"failed: {failed}" if failed else "")


def verify_diamonds() -> bool:
    print("\n🔍 Diamond stacks...")
    four = gen_diamond(4)
    verdict = check_balance(four)
    ok = _line(isinstance(verdict, Balanced) and verify_certificate(four, verdict.certificate), "diamond(4) balanced")

    five = check_balance(gen_diamond(5))
    print(f"ℹ️  diamond(5): {five.kind} (informative)")
    return ok


def main() -> int:
    configure_logging("WARNING")
    results = [verify_brickwalls(), verify_harmonic(), verify_diamonds()]
    if all(results):
        print("\n✅ All acceptance checks passed.")
        return 0
    print("\n❌ Some acceptance checks failed.")
    return 1


if __name__ == "__main__":
    sys.exit(main())
