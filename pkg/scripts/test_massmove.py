from fractions import Fraction

import pytest
from pydantic import ValidationError

from core.exceptions import NotApplicable, PreconditionViolated, ZeroMass
from models.distribution_model import Distribution, SignedDistribution
from models.move_model import ExtremeMove, LossyMove, Move, Trace
from services.massmove_service import (
    apply_extreme,
    apply_lossy,
    apply_move,
    apply_sequence,
    center,
    check_extreme_lemma,
    check_spread_lemma,
    extreme_as_move,
    is_weight_constrained,
    mass_above,
    moment,
    mu_max,
    mu_max_at_least,
    restrict,
    spread,
    validate_trace,
    weight_constraint_scan,
)

HALF = Fraction(1, 2)
NU1 = Distribution.of([(-HALF, HALF), (HALF, HALF)])
SPLIT = [(-HALF, HALF), (0, -1), (HALF, HALF)]


def test_distribution_canonical_form():
    mu = Distribution.of([(1, 1), (0, 2), (1, 3)])
    assert mu.points == ((0, 2), (1, 4))
    assert SignedDistribution.of([(0, 1), (0, -1)]).points == ()
    with pytest.raises(ValidationError):
        Distribution.of([(0, -1)])
    with pytest.raises(ValidationError):
        Distribution(points=((1, 1), (0, 1)))


def test_moments():
    assert moment(NU1, 2) == Fraction(1, 4)
    assert moment(Distribution.point(3, 2), 0) == 2
    assert moment(Distribution.of([(-1, 1), (1, 1)]), 1) == 0


def test_center():
    assert center(Distribution.point(0)) == 0
    assert center(Distribution.of([(-1, 1), (2, 1)])) == HALF
    assert center(Distribution.point(5, 3)) == 5
    with pytest.raises(ZeroMass):
        center(Distribution())


def test_spread():
    assert spread(NU1) == Fraction(1, 4)
    assert spread(Distribution.point(0)) == 0
    assert spread(Distribution.of([(0, 1), (1, 1), (3, 1)])) == 6


def test_spread_matches_double_sum(random_distribution):
    for _ in range(50):
        mu = random_distribution()
        pts = mu.points
        direct = sum(
            abs(pts[i][0] - pts[j][0]) * pts[i][1] * pts[j][1]
            for i in range(len(pts)) for j in range(i + 1, len(pts))
        )
        assert spread(mu) == direct


def test_move_invariants():
    with pytest.raises(ValidationError):
        Move.on(0, [(0, 1), (1, -1)])  # torque changes
    with pytest.raises(ValidationError):
        Move.on(0, [(0, 1), (2, 1), (1, -2)])  # support leaves [0, 1]
    with pytest.raises(ValidationError):
        Move.on(0, (), b=2)  # width 2 without the wide flag
    assert Move.on(0, (), b=2, wide=True).width == 2


def test_apply_move():
    assert apply_move(Distribution.point(0), Move.on(-HALF, SPLIT)) == NU1
    shifted = Move.on(1, [(1, HALF), (Fraction(3, 2), -1), (2, HALF)])
    with pytest.raises(NotApplicable):
        apply_move(Distribution.point(0), shifted)
    assert apply_move(NU1, Move.on(5)) == NU1


def test_apply_lossy():
    lossy = LossyMove(move=Move.on(-HALF, SPLIT))
    assert apply_lossy(Distribution.point(0, 2), lossy) == NU1
    with pytest.raises(NotApplicable):
        apply_lossy(Distribution.point(0, HALF), lossy)
    emptied = apply_lossy(Distribution.point(0), LossyMove(move=Move.on(-HALF)))
    assert emptied == Distribution()
    assert moment(emptied, 0) == 0


def test_apply_extreme():
    assert apply_extreme(Distribution.point(0), ExtremeMove(a=-HALF, b=HALF)) == NU1
    assert apply_extreme(Distribution.point(2, 5), ExtremeMove.unit(0)) == Distribution.point(2, 5)
    assert apply_extreme(Distribution.point(Fraction(1, 4)), ExtremeMove.unit(0)) == Distribution.of(
        [(0, Fraction(3, 4)), (1, Fraction(1, 4))]
    )


def test_extreme_clears_interior_and_keeps_moments(random_distribution, random_extreme):
    for _ in range(100):
        mu = random_distribution()
        e = random_extreme()
        image = apply_extreme(mu, e)
        assert restrict(image, e.a, e.b, lo_closed=False, hi_closed=False) == Distribution()
        assert moment(image, 0) == moment(mu, 0)
        assert moment(image, 1) == moment(mu, 1)
        assert apply_move(mu, extreme_as_move(mu, e)) == image


def test_moves_preserve_moments(random_distribution, random_sequence):
    for _ in range(100):
        mu = random_distribution()
        final, _ = random_sequence(mu, 4)
        assert moment(final, 0) == moment(mu, 0)
        assert moment(final, 1) == moment(mu, 1)


def test_apply_sequence_reports_failing_step():
    steps = [Move.on(-HALF, SPLIT), Move.on(-HALF, SPLIT)]
    with pytest.raises(NotApplicable) as info:
        apply_sequence(Distribution.point(0), steps, lines=[4, 5])
    assert info.value.line == 5


def test_validate_trace():
    trace = apply_sequence(Distribution.point(0), [ExtremeMove(a=-HALF, b=HALF)])
    assert validate_trace(trace)
    forged = Trace(initial=trace.initial, steps=(trace.steps[0].model_copy(update={"result": Distribution.point(0)}),))
    assert not validate_trace(forged)


def test_mu_max():
    single = Trace(initial=Distribution.point(0))
    assert mu_max(single, -1) == 1
    assert mu_max(single, 0) == 0
    assert mu_max_at_least(single, 0) == 1
    trace = apply_sequence(Distribution.point(0), [ExtremeMove(a=-HALF, b=HALF)])
    assert mu_max(trace, 0) == HALF


def test_weight_constrained_examples():
    assert is_weight_constrained(Trace(initial=Distribution.point(0)))

    one = apply_sequence(Distribution.point(0), [Move.on(-HALF, SPLIT)])
    assert is_weight_constrained(one)

    # Two moves centered at 1 while at most one unit ever sits right of 1/2.
    mu0 = Distribution.of([(HALF, 1), (-3, 5)])
    idle = Move.on(HALF)
    two = apply_sequence(mu0, [idle, idle])
    scan = weight_constraint_scan(two)
    assert not scan.ok
    assert scan.violation < 1


def test_weight_constraint_rejects_lossy():
    trace = apply_sequence(Distribution.point(0, 2), [LossyMove(move=Move.on(-HALF, SPLIT))])
    with pytest.raises(PreconditionViolated):
        is_weight_constrained(trace)


def test_spread_lemma_examples():
    assert check_spread_lemma(NU1) == (Fraction(1, 16), Fraction(1, 12), True)
    assert check_spread_lemma(Distribution.point(0)) == (0, 0, True)
    assert check_spread_lemma(Distribution.of([(-1, 1), (0, 1), (1, 1)])) == (16, 18, True)


def test_spread_lemma_random(random_distribution):
    for _ in range(1000):
        mu = random_distribution()
        lhs, rhs, ok = check_spread_lemma(mu)
        assert ok
        if len(mu) >= 2 and moment(mu, 2) * moment(mu, 0) > 0:
            assert lhs < rhs


def test_extreme_lemma_examples():
    assert check_extreme_lemma(Distribution.point(0), ExtremeMove(a=-HALF, b=HALF)) == (
        Fraction(1, 4), Fraction(3, 16), True,
    )
    assert check_extreme_lemma(Distribution.point(5), ExtremeMove.unit(0)) == (0, 0, True)
    assert check_extreme_lemma(NU1, ExtremeMove(a=-HALF, b=HALF)) == (0, 0, True)
    with pytest.raises(PreconditionViolated):
        check_extreme_lemma(NU1, ExtremeMove(a=0, b=2))


def test_extreme_lemma_random(random_distribution, random_extreme):
    for _ in range(1000):
        assert check_extreme_lemma(random_distribution(), random_extreme()).ok


def test_mass_above_strictness():
    mu = Distribution.of([(0, 1), (1, 2)])
    assert mass_above(mu, 0) == 2
    assert mass_above(mu, 0, strict=False) == 3
