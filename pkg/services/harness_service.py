"""
Verification harness: the end-to-end stack pipeline and exact checkers for
the overhang bounds on concrete traces.

Every threshold of the form c * n^(1/3) is compared by cubing and every
(3p)^(3/2)-style factor by squaring. The only rounded quantity is the log2
threshold of ``check_T_m2``, which is rounded down so that a pass stays sound.
"""

from fractions import Fraction
from typing import Optional, Sequence

from core.config import get_settings
from core.exceptions import PreconditionViolated
from core.logger import get_logger
from core.rational import cube_root_lower, format_decimal, log2_lower, to_rational
from models.balance_model import BalanceVerdict
from models.distribution_model import Distribution
from models.move_model import LossyMove, Trace
from models.stack_model import Stack
from schemas import CheckRecord, VerificationReport
from services.balance_service import (
    check_balance,
    check_slice_consistency,
    to_lossy_sequence,
    verify_certificate,
)
from services.geometry_service import most_overhanging, overhang, validate
from services.massmove_service import (
    apply_sequence,
    dominates,
    is_weight_constrained,
    mass_above,
    mass_abs_at_least,
    mass_below,
    moment,
    mu_max,
    mu_max_at_least,
)

logger = get_logger(__name__)

UNBALANCED_SKIP = "unbalanced — bound checks skipped"
IMPROVED_CUBE = Fraction(729, 8)


def _improved(flag: Optional[bool]) -> bool:
    return get_settings().harness.improved_constants if flag is None else flag


def _require(ok: bool, message: str) -> None:
    if not ok:
        raise PreconditionViolated(message)


def _require_unit_moves(trace: Trace) -> None:
    for index, action in enumerate(trace.actions, start=1):
        _require(not isinstance(action, LossyMove), f"step {index} is a lossy move")
        _require(action.width == 1, f"step {index} acts on an interval of width {action.width}")


# --------------------------------------------------------------------------
# Stack bound
# --------------------------------------------------------------------------

def _main_bound_records(stack: Stack, improved: bool) -> list[CheckRecord]:
    d = overhang(stack)
    n = stack.total_weight
    inputs = {"n": n, "overhang": d}
    records = [
        CheckRecord.compared(
            "main_bound", d ** 3, "<=", 216 * n,
            inputs=inputs, detail=f"overhang³ = {d ** 3} ≤ 216·n = {216 * n}",
        )
    ]
    if improved:
        records.append(
            CheckRecord.compared(
                "improved_bound", d ** 3, "<=", IMPROVED_CUBE * n,
                inputs=inputs, informative=True,
                detail=f"overhang³ = {d ** 3} ≤ (729/8)·n = {IMPROVED_CUBE * n} (4.5·n^(1/3), non-normative)",
            )
        )
    return records


def check_main_bound(stack: Stack, *, verdict: Optional[BalanceVerdict] = None, improved: Optional[bool] = None, subject: str = "stack") -> VerificationReport:
    """overhang <= 6 n^(1/3) for a balanced stack, as overhang^3 <= 216 n with n the total weight."""
    canonical = validate(stack)
    report = VerificationReport(subject=subject)
    if verdict is None:
        verdict = check_balance(canonical)
    if not verdict.is_balanced:
        report.add(CheckRecord.skipped("main_bound", UNBALANCED_SKIP))
        return report
    for record in _main_bound_records(canonical, _improved(improved)):
        report.add(record)
    return report


# --------------------------------------------------------------------------
# Trace checks
# --------------------------------------------------------------------------

def lossy_to_weight_constrained(mu0: Distribution, lossy: Sequence[LossyMove]) -> Trace:
    """Replay the lossy moves as plain moves; the unit each would consume stays behind as frozen mass."""
    return apply_sequence(mu0, [move.move for move in lossy])


def check_T_m1(trace: Trace, n, *, subject: str = "trace") -> VerificationReport:
    """The final distribution of a weight-constrained trace has no mass at x >= 6 n^(1/3) - 1.

    Raises:
        PreconditionViolated: n < 1, mass starts right of 0, more than n starts at x <= 0,
            or the trace is not weight-constrained.
    """
    n = to_rational(n)
    mu0 = trace.initial
    _require(n >= 1, f"n = {n} must be >= 1")
    _require(mass_above(mu0, 0) == 0, "initial distribution has mass at x > 0")
    _require(mass_below(mu0, 0) <= n, f"initial mass at x <= 0 exceeds n = {n}")
    _require(is_weight_constrained(trace), "trace is not weight-constrained")

    bound = 216 * n
    beyond = sum(
        (m for x, m in trace.final.points if x + 1 >= 0 and (x + 1) ** 3 >= bound),
        Fraction(0),
    )
    report = VerificationReport(subject=subject)
    report.add(
        CheckRecord.compared(
            "T_m1", beyond, "==", 0,
            inputs={"n": n, "moves": len(trace)},
            detail=f"ν{{x ≥ 6n^(1/3) − 1}} = {beyond} (decided by (x+1)³ ≥ 216·n = {bound})",
        )
    )
    return report


def _mass_past(mu: Distribution, r: Fraction, cube: Fraction) -> Fraction:
    """Mass at x with x - r + 1 > 0 and (x - r + 1)^3 > cube."""
    return sum(
        (m for x, m in mu.points if x - r + 1 > 0 and (x - r + 1) ** 3 > cube),
        Fraction(0),
    )


def check_T_gen(trace: Trace, r, n, *, improved: Optional[bool] = None, subject: str = "trace") -> VerificationReport:
    """A weight-constrained trace with nothing right of r at the start and mu_max{x > r} <= n
    never puts mass at x > r + 6 n^(1/3) - 1.

    Raises:
        PreconditionViolated: n < 1/5, mass starts right of r, mu_max{x > r} exceeds n,
            or the trace is not weight-constrained.
    """
    r = to_rational(r)
    n = to_rational(n)
    _require(n >= Fraction(1, 5), f"n = {n} must be >= 1/5")
    _require(mass_above(trace.initial, r) == 0, f"initial distribution has mass at x > {r}")
    peak = mu_max(trace, r)
    _require(peak <= n, f"mu_max{{x > {r}}} = {peak} exceeds n = {n}")
    _require(is_weight_constrained(trace), "trace is not weight-constrained")

    inputs = {"r": r, "n": n, "moves": len(trace)}
    bound = 216 * n
    beyond = max(_mass_past(mu, r, bound) for mu in trace.distributions)
    report = VerificationReport(subject=subject)
    report.add(
        CheckRecord.compared(
            "T_gen", beyond, "==", 0, inputs=inputs,
            detail=f"mu_max{{x > r + 6n^(1/3) − 1}} = {beyond} (decided by (x − r + 1)³ > 216·n = {bound})",
        )
    )
    if _improved(improved):
        tight = IMPROVED_CUBE * n
        report.add(
            CheckRecord.compared(
                "T_gen_improved", max(_mass_past(mu, r, tight) for mu in trace.distributions), "==", 0,
                inputs=inputs, informative=True,
                detail=f"mu_max{{x > r + 4.5·n^(1/3) − 1}} = 0, decided by (x − r + 1)³ > (729/8)·n = {tight} (non-normative)",
            )
        )
    return report


def m2_threshold(n: int, bits: int) -> Fraction:
    """Dyadic lower bound on 2 n^(1/3) log2(n)."""
    value = Fraction(n)
    return 2 * cube_root_lower(value, bits) * log2_lower(value, bits)


def conjecture_threshold(n: int, c: Fraction, bits: int) -> Fraction:
    """Dyadic lower bound on c n^(1/3) (log2 n)^(2/3) for c >= 0."""
    value = Fraction(n)
    log_value = log2_lower(value, bits)
    return c * cube_root_lower(value, bits) * cube_root_lower(log_value ** 2, bits)


def check_T_m2(trace: Trace, n: int, *, improved: Optional[bool] = None, subject: str = "trace") -> VerificationReport:
    """At most n moves from at most n mass on x <= 0 leave less than one unit at x >= 2 n^(1/3) log2 n.

    Raises:
        PreconditionViolated: n is not an integer >= 2, the trace is longer than n, or the
            initial distribution is out of range.
    """
    _require(isinstance(n, int) and not isinstance(n, bool) and n >= 2, f"n = {n!r} must be an integer >= 2")
    _require(len(trace) <= n, f"trace has {len(trace)} moves, more than n = {n}")
    _require(mass_above(trace.initial, 0) == 0, "initial distribution has mass at x > 0")
    _require(mass_below(trace.initial, 0) <= n, f"initial mass at x <= 0 exceeds n = {n}")

    settings = get_settings().harness
    bits = settings.precision_bits
    threshold = m2_threshold(n, bits)
    beyond = mass_above(trace.final, threshold, strict=False)
    inputs = {"n": n, "moves": len(trace), "precision_bits": bits, "threshold": threshold}

    report = VerificationReport(subject=subject)
    report.add(
        CheckRecord.compared(
            "T_m2", beyond, "<", 1, inputs=inputs,
            detail=f"ν{{x ≥ τ}} = {beyond} < 1 with τ = {format_decimal(threshold, 6)} ≤ 2n^(1/3)·log2(n)",
        )
    )

    if _improved(improved):
        c = to_rational(settings.conjecture_constant)
        tau = conjecture_threshold(n, c, bits)
        report.add(
            CheckRecord.compared(
                "conjectured_bound", mass_above(trace.final, tau, strict=False), "<", 1,
                inputs={"n": n, "c": c, "threshold": tau}, informative=True,
                detail=f"ν{{x ≥ c·n^(1/3)·log2(n)^(2/3)}} < 1 with c = {c} (non-normative)",
            )
        )
    return report


def check_lemma_initial(trace: Trace, d, p, *, subject: str = "trace") -> VerificationReport:
    """Moving mass p from a unit point at 0 out to |x| >= d takes at least (3p)^(3/2) d^3 unit moves.

    Checked as moves^2 >= 27 p^3 d^6.
    """
    d = to_rational(d)
    p = to_rational(p)
    _require(d > 0, f"d = {d} must be > 0")
    _require(0 < p <= 1, f"p = {p} must lie in (0, 1]")
    _require(trace.initial == Distribution.point(0), "initial distribution must be {(0, 1)}")
    _require_unit_moves(trace)
    reached = mass_abs_at_least(trace.final, d)
    _require(reached >= p, f"final mass at |x| >= {d} is {reached} < p = {p}")

    moves = len(trace)
    report = VerificationReport(subject=subject)
    report.add(
        CheckRecord.compared(
            "lemma_initial", Fraction(moves) ** 2, ">=", 27 * p ** 3 * d ** 6,
            inputs={"d": d, "p": p, "moves": moves},
            detail=f"moves² = {moves ** 2} ≥ 27·p³·d⁶ = {27 * p ** 3 * d ** 6}",
        )
    )
    return report


def check_theorem_asym(trace: Trace, r, m, d, p, *, subject: str = "trace") -> VerificationReport:
    """With no mass right of r at the start, mu_max{x > r} <= m and mu_max{x >= r + d} >= p m,
    at least sqrt(3) p^(3/2) (d - 1/2)^3 moves are centered right of r + 1/2.

    Checked as count^2 >= 3 p^3 (d - 1/2)^6.
    """
    r, m, d, p = (to_rational(value) for value in (r, m, d, p))
    _require(d > 1, f"d = {d} must be > 1")
    _require(0 < p < 1, f"p = {p} must lie in (0, 1)")
    _require(m > 0, f"m = {m} must be > 0")
    _require_unit_moves(trace)
    _require(mass_above(trace.initial, r) == 0, f"initial distribution has mass at x > {r}")
    _require(mu_max(trace, r) <= m, f"mu_max{{x > {r}}} exceeds m = {m}")
    _require(mu_max_at_least(trace, r + d) >= p * m, f"mu_max{{x >= {r + d}}} is below p·m = {p * m}")

    count = sum(1 for action in trace.actions if action.center > r + Fraction(1, 2))
    bound = 3 * p ** 3 * (d - Fraction(1, 2)) ** 6
    report = VerificationReport(subject=subject)
    report.add(
        CheckRecord.compared(
            "theorem_asym", Fraction(count) ** 2, ">=", bound,
            inputs={"r": r, "m": m, "d": d, "p": p, "count": count},
            detail=f"moves centered right of r + 1/2: {count}, count² ≥ 3·p³·(d − 1/2)⁶ = {bound}",
        )
    )
    return report


# --------------------------------------------------------------------------
# Pipeline
# --------------------------------------------------------------------------

def _lossy_accounting(trace: Trace) -> bool:
    previous = trace.initial
    for step in trace.steps:
        if moment(step.result, 0) != moment(previous, 0) - 1:
            return False
        if moment(step.result, 1) != moment(previous, 1) - step.action.center:
            return False
        previous = step.result
    return True


def _asym_parameters(trace: Trace, reach: Fraction) -> tuple[Fraction, Fraction, Fraction]:
    """(m, d, p) for the asymmetric check with r = 0 and d = overhang - 1."""
    d = reach - 1
    m = mu_max(trace, 0)
    ratio = mu_max_at_least(trace, d) / m
    return m, d, ratio if ratio < 1 else Fraction(1, 2)


def end_to_end(stack: Stack, *, improved: Optional[bool] = None, subject: str = "stack") -> VerificationReport:
    """Balance, certificate, slices, lossy moves, weight constraints, then the overhang bounds.

    Failures become records; an unbalanced stack violates nothing and skips the bound checks.
    """
    canonical = validate(stack)
    report = VerificationReport(subject=subject)

    verdict = check_balance(canonical)
    if not verdict.is_balanced:
        report.add(
            CheckRecord(
                name="balance", status="informative",
                detail="unbalanced: no admissible force assignment exists",
            )
        )
        report.add(CheckRecord.skipped("bounds", UNBALANCED_SKIP))
        logger.info(f"{subject}: {UNBALANCED_SKIP}")
        return report

    certificate = verdict.certificate
    report.add(CheckRecord.flag("balance", True, f"balanced with {len(certificate.entries)} nonzero forces"))

    certified = verify_certificate(canonical, certificate)
    report.add(CheckRecord.flag("certificate", certified, "every block in force and torque equilibrium"))
    if not certified:
        return report

    problems = check_slice_consistency(canonical, certificate)
    report.add(CheckRecord.flag("slice_consistency", not problems, "; ".join(problems) or "consecutive slices account exactly"))

    k = most_overhanging(canonical)
    reach = overhang(canonical)
    mu0, lossy = to_lossy_sequence(canonical, certificate, k)
    lossy_trace = apply_sequence(mu0, lossy)

    tail = mass_above(lossy_trace.final, reach - 1, strict=False)
    report.add(
        CheckRecord.compared(
            "final_slice", tail, ">=", 1,
            inputs={"k": k, "overhang": reach},
            detail=f"forces under block {k} at x ≥ {reach - 1}: {tail} ≥ 1",
        )
    )
    report.add(
        CheckRecord.flag(
            "lossy_accounting", _lossy_accounting(lossy_trace),
            f"{len(lossy)} lossy moves, each dropping M0 by 1 and M1 by its center",
        )
    )

    trace = lossy_to_weight_constrained(mu0, lossy)
    dominated = all(dominates(plain, lossy_mu) for plain, lossy_mu in zip(trace.distributions, lossy_trace.distributions))
    report.add(CheckRecord.flag("frozen_domination", dominated, "plain-move trace dominates the lossy trace pointwise"))
    constrained = is_weight_constrained(trace)
    report.add(CheckRecord.flag("weight_constrained", constrained, "moves centered right of a never exceed mu_max{x > a}"))

    n = canonical.total_weight
    try:
        report.extend(check_T_m1(trace, n))
    except PreconditionViolated as exc:
        report.add(CheckRecord.flag("T_m1", False, f"precondition violated: {exc}"))
    try:
        report.extend(check_T_gen(trace, 0, n, improved=improved))
    except PreconditionViolated as exc:
        report.add(CheckRecord.flag("T_gen", False, f"precondition violated: {exc}"))

    for record in _main_bound_records(canonical, _improved(improved)):
        report.add(record)

    if reach - 1 > 1:
        m, d, p = _asym_parameters(trace, reach)
        try:
            report.extend(check_theorem_asym(trace, 0, m, d, p))
        except PreconditionViolated as exc:
            report.add(CheckRecord.flag("theorem_asym", False, f"precondition violated: {exc}"))

    logger.info(f"{subject}: {'PASS' if report.passed else 'FAIL'} ({len(report.records)} records)")
    return report
