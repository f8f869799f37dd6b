from fractions import Fraction

import pytest

from core.exceptions import PreconditionViolated
from models.balance_model import Balanced
from models.distribution_model import Distribution
from models.move_model import ExtremeMove, LossyMove, Move, Trace
from models.stack_model import Stack
from schemas import CheckRecord
from services.balance_service import check_balance, to_lossy_sequence
from services.generator_service import gen_brickwall, gen_harmonic, gen_inverted_triangle
from services.geometry_service import most_overhanging, validate
from services.harness_service import (
    check_lemma_initial,
    check_main_bound,
    check_T_gen,
    check_T_m1,
    check_T_m2,
    check_theorem_asym,
    end_to_end,
    lossy_to_weight_constrained,
    m2_threshold,
)
from services.massmove_service import (
    apply_sequence,
    dominates,
    is_weight_constrained,
    mu_max,
    mu_max_at_least,
)

HALF = Fraction(1, 2)
SPLIT = [(-HALF, HALF), (0, -1), (HALF, HALF)]


def _records_recheck(report):
    for record in report.records:
        if record.status in ("pass", "fail"):
            outcome = record.recheck()
            if outcome is not None:
                assert outcome == (record.status == "pass")


def test_main_bound_examples():
    report = check_main_bound(gen_brickwall(6))
    record = report.get("main_bound")
    assert (record.lhs, record.rhs, record.status) == (27, 216 * 111, "pass")

    single = check_main_bound(Stack.of([(-HALF, 0)])).get("main_bound")
    assert (single.lhs, single.rhs) == (Fraction(1, 8), 216)

    harmonic = check_main_bound(gen_harmonic(100)).get("main_bound")
    h100 = sum(Fraction(1, i) for i in range(1, 101))
    assert harmonic.lhs == (h100 / 2) ** 3
    assert harmonic.status == "pass"


def test_main_bound_skips_unbalanced():
    report = check_main_bound(gen_inverted_triangle(3))
    assert report.passed
    assert report.records[0].status == "skipped"


def test_main_bound_counts_point_weights():
    stack = Stack.of([(-HALF, 0)], weights=[(-HALF, 1, 3)])
    record = check_main_bound(stack).get("main_bound")
    assert record.rhs == 216 * 4


def test_improved_constants_are_informative():
    report = check_main_bound(gen_brickwall(4), improved=True)
    improved = report.get("improved_bound")
    assert improved.status == "informative"
    assert improved.rhs == Fraction(729, 8) * 29
    assert report.passed


def test_lossy_to_weight_constrained_examples():
    empty = lossy_to_weight_constrained(Distribution.point(0), [])
    assert empty.distributions == (Distribution.point(0),)

    lossy = [LossyMove(move=Move.on(-HALF, SPLIT))]
    plain = lossy_to_weight_constrained(Distribution.point(0, 2), lossy)
    assert plain.final == Distribution.of([(-HALF, HALF), (0, 1), (HALF, HALF)])


def test_brickwall_two_conversion_dominates():
    stack = validate(gen_brickwall(2))
    verdict = check_balance(stack)
    assert isinstance(verdict, Balanced)
    mu0, lossy = to_lossy_sequence(stack, verdict.certificate, most_overhanging(stack))
    lossy_trace = apply_sequence(mu0, lossy)
    plain = lossy_to_weight_constrained(mu0, lossy)
    assert all(dominates(p, q) for p, q in zip(plain.distributions, lossy_trace.distributions))
    assert is_weight_constrained(plain)


def test_T_m1_trivial_and_planted():
    assert check_T_m1(Trace(initial=Distribution.point(0)), 1).passed

    wide = Move.on(-10, [(-10, HALF), (0, -1), (10, HALF)], b=10, wide=True)
    planted = apply_sequence(Distribution.point(0), [wide])
    report = check_T_m1(planted, 1)
    assert not report.passed
    assert report.get("T_m1").lhs == HALF
    _records_recheck(report)


def test_T_m1_preconditions():
    with pytest.raises(PreconditionViolated):
        check_T_m1(Trace(initial=Distribution.point(1)), 1)
    with pytest.raises(PreconditionViolated):
        check_T_m1(Trace(initial=Distribution.point(0, 2)), 1)
    with pytest.raises(PreconditionViolated):
        check_T_m1(Trace(initial=Distribution.point(0)), HALF)


def test_T_gen_trivial_and_planted():
    assert check_T_gen(Trace(initial=Distribution.point(0)), 0, 1).passed
    assert check_T_gen(Trace(initial=Distribution.point(5)), 5, Fraction(1, 5)).passed

    wide = Move.on(-10, [(-10, HALF), (0, -1), (10, HALF)], b=10, wide=True)
    planted = apply_sequence(Distribution.point(0), [wide])
    report = check_T_gen(planted, 0, 1)
    assert not report.passed
    assert report.get("T_gen").lhs == HALF
    _records_recheck(report)

    # 10 - 3 + 1 = 8 and 8³ = 512 <= 216·(64/27), so x = 10 sits exactly on the bound
    assert check_T_gen(planted, 3, Fraction(64, 27)).passed


def test_T_gen_preconditions():
    with pytest.raises(PreconditionViolated):
        check_T_gen(Trace(initial=Distribution.point(0)), -1, 1)
    with pytest.raises(PreconditionViolated):
        check_T_gen(Trace(initial=Distribution.point(0)), 0, Fraction(1, 6))
    wide = Move.on(-10, [(-10, HALF), (0, -1), (10, HALF)], b=10, wide=True)
    planted = apply_sequence(Distribution.point(0), [wide])
    with pytest.raises(PreconditionViolated):
        check_T_gen(planted, 0, Fraction(1, 4))


@pytest.mark.parametrize("stack", [gen_brickwall(3), gen_brickwall(5), gen_harmonic(10)], ids=["bw3", "bw5", "h10"])
def test_T_gen_on_stack_traces(stack):
    canonical = validate(stack)
    verdict = check_balance(canonical)
    assert isinstance(verdict, Balanced)
    mu0, lossy = to_lossy_sequence(canonical, verdict.certificate, most_overhanging(canonical))
    trace = lossy_to_weight_constrained(mu0, lossy)
    report = check_T_gen(trace, 0, canonical.total_weight, improved=True)
    assert report.get("T_gen").status == "pass"
    assert report.get("T_gen_improved").status == "informative"
    _records_recheck(report)


def test_T_gen_random(random_sequence):
    start = Distribution.point(0, 4)
    for _ in range(300):
        _, moves = random_sequence(start, 8)
        trace = apply_sequence(start, moves)
        if not is_weight_constrained(trace):
            continue
        n = max(mu_max(trace, 0), Fraction(1, 5))
        assert check_T_gen(trace, 0, n).passed


def test_T_m2_threshold_and_examples():
    assert m2_threshold(8, 64) == 12
    assert check_T_m2(Trace(initial=Distribution.point(0, 8)), 8).passed

    push = Move.on(-3, [(-3, HALF), (0, -1), (3, HALF)], b=3, wide=True)
    assert check_T_m2(apply_sequence(Distribution.point(0, 2), [push]), 2).passed

    planted = Move.on(-24, [(-24, 1), (0, -2), (24, 1)], b=24, wide=True)
    report = check_T_m2(apply_sequence(Distribution.point(0, 8), [planted]), 8)
    assert not report.passed
    assert report.get("T_m2").inputs["precision_bits"] == "64"


def test_T_m2_preconditions():
    with pytest.raises(PreconditionViolated):
        check_T_m2(Trace(initial=Distribution.point(0)), 1)
    long = apply_sequence(Distribution.point(0, 2), [Move.on(0)] * 3)
    with pytest.raises(PreconditionViolated):
        check_T_m2(long, 2)


def test_T_m2_precision_from_environment(monkeypatch):
    monkeypatch.setenv("OVERHANG_PRECISION_BITS", "96")
    report = check_T_m2(Trace(initial=Distribution.point(0, 3)), 3)
    assert report.get("T_m2").inputs["precision_bits"] == "96"


def test_T_m2_conjecture_record(monkeypatch):
    monkeypatch.setenv("OVERHANG_IMPROVED_CONSTANTS", "true")
    report = check_T_m2(Trace(initial=Distribution.point(0, 8)), 8)
    assert report.get("conjectured_bound").status == "informative"


def test_lemma_initial_example():
    trace = apply_sequence(Distribution.point(0), [ExtremeMove(a=-HALF, b=HALF)])
    record = check_lemma_initial(trace, HALF, 1).get("lemma_initial")
    assert (record.lhs, record.rhs, record.status) == (1, Fraction(27, 64), "pass")


def test_lemma_initial_preconditions():
    with pytest.raises(PreconditionViolated):
        check_lemma_initial(Trace(initial=Distribution.point(0)), 1, HALF)
    wide = Move.on(-1, [(-1, HALF), (0, -1), (1, HALF)], b=1, wide=True)
    with pytest.raises(PreconditionViolated):
        check_lemma_initial(apply_sequence(Distribution.point(0), [wide]), 1, HALF)


def test_lemma_initial_random(random_sequence):
    for _ in range(200):
        final, moves = random_sequence(Distribution.point(0), 4)
        trace = apply_sequence(Distribution.point(0), moves)
        d = max(abs(x) for x in final.xs)
        if d == 0:
            continue
        p = sum(m for x, m in final.points if abs(x) >= d)
        assert check_lemma_initial(trace, d, p).passed


def test_theorem_asym_precondition():
    trace = apply_sequence(Distribution.point(0), [ExtremeMove(a=-HALF, b=HALF)])
    with pytest.raises(PreconditionViolated):
        check_theorem_asym(trace, 0, 1, 2, HALF)


def test_theorem_asym_random(random_sequence):
    for _ in range(500):
        final, moves = random_sequence(Distribution.point(0, 4), 6)
        trace = apply_sequence(Distribution.point(0, 4), moves)
        m = mu_max(trace, 0)
        d = max(final.xs)
        if m == 0 or d <= 1:
            continue
        ratio = mu_max_at_least(trace, d) / m
        p = ratio if ratio < 1 else HALF
        assert check_theorem_asym(trace, 0, m, d, p).passed


@pytest.mark.parametrize("d", range(1, 7))
def test_end_to_end_brickwalls(d):
    report = end_to_end(gen_brickwall(d))
    assert report.passed, report.render()
    names = {record.name for record in report.records}
    assert {"certificate", "slice_consistency", "final_slice", "lossy_accounting",
            "weight_constrained", "T_m1", "T_gen", "main_bound"} <= names
    if d >= 5:
        assert report.get("theorem_asym").status == "pass"
    _records_recheck(report)


@pytest.mark.parametrize("n", [1, 2, 3, 7, 15, 30])
def test_end_to_end_harmonic(n):
    assert end_to_end(gen_harmonic(n)).passed


def test_end_to_end_unbalanced_triangle():
    report = end_to_end(gen_inverted_triangle(3))
    assert report.passed
    assert report.get("bounds").detail == "unbalanced — bound checks skipped"


def test_end_to_end_loaded_stack():
    stack = Stack.of([(-1, 0), (-HALF, 1)], weights=[(-1, 1, 1)])
    report = end_to_end(stack)
    assert report.passed, report.render()
    assert report.get("T_m1").inputs["n"] == "3"


def test_report_json_round_trip():
    report = end_to_end(gen_brickwall(2), subject="brickwall-2")
    again = type(report).model_validate_json(report.model_dump_json())
    assert again.passed == report.passed
    assert [r.lhs for r in again.records] == [r.lhs for r in report.records]
    assert isinstance(again.records[0], CheckRecord)
