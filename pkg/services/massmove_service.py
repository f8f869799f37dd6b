"""
Mass-movement calculus: moments, spread, moves (plain, lossy, extreme),
traces, the mu_max / weight-constrained conditions and the splitting order.
"""

from bisect import bisect_left, bisect_right
from fractions import Fraction
from itertools import accumulate
from typing import Iterable, NamedTuple, Optional, Sequence, Union

from core.exceptions import NotApplicable, PreconditionViolated, ZeroMass
from core.logger import get_logger
from models.distribution_model import Distribution, SignedDistribution, coalesce
from models.linear_system_model import Feasible, LinearSystem
from models.move_model import Action, ExtremeMove, LossyMove, Move, Trace, TraceStep
from services.lp_service import solve_feasibility

logger = get_logger(__name__)

ZERO = Fraction(0)
AnyDistribution = Union[Distribution, SignedDistribution]


class InequalityCheck(NamedTuple):
    lhs: Fraction
    rhs: Fraction
    ok: bool


class WeightConstraintScan(NamedTuple):
    """Breakpoint scan behind ``is_weight_constrained``; ``violation`` is the first failing a."""

    ok: bool
    points: tuple[Fraction, ...]
    violation: Optional[Fraction]


# --------------------------------------------------------------------------
# Moments and measures
# --------------------------------------------------------------------------

def moment(mu: AnyDistribution, j: int) -> Fraction:
    if j < 0:
        raise ValueError("moment order must be >= 0")
    return sum((m * x ** j for x, m in mu.points), ZERO)


def center(mu: Distribution) -> Fraction:
    total = moment(mu, 0)
    if total == 0:
        raise ZeroMass("center of mass of a zero-mass distribution")
    return moment(mu, 1) / total


def second_moment_about(mu: AnyDistribution, c) -> Fraction:
    return sum((m * (x - c) ** 2 for x, m in mu.points), ZERO)


def spread(mu: Distribution) -> Fraction:
    """sum_{i<j} |x_i - x_j| m_i m_j via prefix sums over the sorted points."""
    total = ZERO
    mass_before = ZERO
    torque_before = ZERO
    for x, m in mu.points:
        total += m * (x * mass_before - torque_before)
        mass_before += m
        torque_before += m * x
    return total


def restrict(mu: Distribution, lo=None, hi=None, *, lo_closed: bool = True, hi_closed: bool = True) -> Distribution:
    """mu restricted to the interval between lo and hi (None means unbounded)."""

    def inside(x: Fraction) -> bool:
        if lo is not None and (x < lo or (x == lo and not lo_closed)):
            return False
        if hi is not None and (x > hi or (x == hi and not hi_closed)):
            return False
        return True

    return Distribution(points=tuple((x, m) for x, m in mu.points if inside(x)))


def mass_above(mu: AnyDistribution, a, *, strict: bool = True) -> Fraction:
    """mu{x > a}, or mu{x >= a} when ``strict`` is False."""
    xs = [x for x, _ in mu.points]
    start = bisect_right(xs, a) if strict else bisect_left(xs, a)
    return sum((m for _, m in mu.points[start:]), ZERO)


def mass_below(mu: AnyDistribution, a, *, strict: bool = False) -> Fraction:
    """mu{x <= a}, or mu{x < a} when ``strict`` is True."""
    xs = [x for x, _ in mu.points]
    stop = bisect_left(xs, a) if strict else bisect_right(xs, a)
    return sum((m for _, m in mu.points[:stop]), ZERO)


def mass_abs_at_least(mu: AnyDistribution, d) -> Fraction:
    return sum((m for x, m in mu.points if abs(x) >= d), ZERO)


def point_collapse(mu: Distribution) -> Distribution:
    """{(C[mu], M0[mu])}: everything below mu in the splitting order collapses to this."""
    if not mu.points:
        return mu
    return Distribution.point(center(mu), moment(mu, 0))


def add(*parts: AnyDistribution, scale: Sequence[int] = ()) -> SignedDistribution:
    factors = list(scale) or [1] * len(parts)
    return SignedDistribution.of(
        (x, f * m) for f, part in zip(factors, parts) for x, m in part.points
    )


def subtract(left: AnyDistribution, right: AnyDistribution) -> SignedDistribution:
    return add(left, right, scale=(1, -1))


def dominates(upper: AnyDistribution, lower: AnyDistribution) -> bool:
    """upper(x) >= lower(x) at every x."""
    return all(m >= 0 for _, m in subtract(upper, lower).points)


# --------------------------------------------------------------------------
# Moves
# --------------------------------------------------------------------------

def _nonnegative(pairs: Iterable[tuple], what: str, line: Optional[int] = None) -> Distribution:
    merged = coalesce(pairs)
    negative = sorted(x for x, m in merged.items() if m < 0)
    if negative:
        raise NotApplicable(f"{what} leaves negative mass at x = {negative[0]}", line)
    return Distribution(points=tuple(sorted(merged.items())))


def apply_move(mu: Distribution, v: Move) -> Distribution:
    """mu + delta; M0 and M1 are preserved.

    Raises:
        NotApplicable: some mass would become negative.
    """
    return _nonnegative(list(mu.points) + list(v.delta.points), f"move on [{v.a}, {v.b}]")


def apply_lossy(mu: Distribution, v: LossyMove) -> Distribution:
    """mu + delta - {(center, 1)}; M0 drops by 1 and M1 by the center."""
    return _nonnegative(
        list(mu.points) + list(v.lossy_delta.points), f"lossy move on [{v.a}, {v.b}]"
    )


def apply_extreme(mu: Distribution, e: ExtremeMove) -> Distribution:
    """Move all mass in the open interval (a, b) to a and b, keeping its total and centroid."""
    width = e.b - e.a
    moved = []
    to_a = ZERO
    to_b = ZERO
    for x, m in mu.points:
        if e.a < x < e.b:
            to_a += m * (e.b - x) / width
            to_b += m * (x - e.a) / width
        else:
            moved.append((x, m))
    moved.extend([(e.a, to_a), (e.b, to_b)])
    return Distribution.of(moved)


def extreme_as_move(mu: Distribution, e: ExtremeMove) -> Move:
    """The plain move whose effect on mu equals the extreme move e."""
    delta = subtract(apply_extreme(mu, e), mu)
    return Move(a=e.a, b=e.b, delta=delta, wide=e.width != 1)


def apply_step(mu: Distribution, action: Action) -> Distribution:
    if isinstance(action, LossyMove):
        return apply_lossy(mu, action)
    if isinstance(action, ExtremeMove):
        return apply_extreme(mu, action)
    return apply_move(mu, action)


def apply_sequence(mu0: Distribution, actions: Sequence[Action], lines: Optional[Sequence[int]] = None) -> Trace:
    """Apply the actions in order and record every intermediate distribution.

    Raises:
        NotApplicable: with the 1-based step number (or the given source line) of the failing action.
    """
    steps = []
    current = mu0
    for index, action in enumerate(actions):
        try:
            current = apply_step(current, action)
        except NotApplicable as exc:
            line = lines[index] if lines else index + 1
            raise NotApplicable(str(exc), line) from exc
        steps.append(TraceStep(action=action, result=current))
    return Trace(initial=mu0, steps=tuple(steps))


def extreme_sequence(actions: Sequence[Action]) -> list[ExtremeMove]:
    """V-bar: the extreme moves on the same intervals as V."""
    return [ExtremeMove(a=action.a, b=action.b) for action in actions]


def validate_trace(trace: Trace) -> bool:
    """True iff every recorded result equals its action applied to the previous distribution."""
    current = trace.initial
    for step in trace.steps:
        try:
            expected = apply_step(current, step.action)
        except NotApplicable:
            return False
        if expected != step.result:
            return False
        current = step.result
    return True


# --------------------------------------------------------------------------
# mu_max and weight constraints
# --------------------------------------------------------------------------

def mu_max(trace: Trace, a) -> Fraction:
    """max over the trace of mu_i{x > a}."""
    return max(mass_above(mu, a) for mu in trace.distributions)


def mu_max_at_least(trace: Trace, a) -> Fraction:
    """max over the trace of mu_i{x >= a}."""
    return max(mass_above(mu, a, strict=False) for mu in trace.distributions)


def _scan_points(breakpoints: set[Fraction]) -> tuple[Fraction, ...]:
    ordered = sorted(breakpoints)
    if not ordered:
        return (ZERO,)
    points = [ordered[0] - 1]
    for left, right in zip(ordered, ordered[1:]):
        points.extend([left, (left + right) / 2])
    points.extend([ordered[-1], ordered[-1] + 1])
    return tuple(points)


def weight_constraint_scan(trace: Trace) -> WeightConstraintScan:
    """Check #(moves centered in (a, inf)) <= mu_max{x > a} at every breakpoint and between them.

    Both sides are step functions of a whose jumps sit at move centers and at
    trace coordinates, so this finite scan decides the condition for all real a.
    """
    if any(isinstance(action, LossyMove) for action in trace.actions):
        raise PreconditionViolated("weight constraints are defined for plain moves only")

    centers = sorted(action.center for action in trace.actions)
    breakpoints = set(centers)
    for mu in trace.distributions:
        breakpoints.update(mu.xs)
    points = _scan_points(breakpoints)

    best = [ZERO] * len(points)
    for mu in trace.distributions:
        xs = mu.xs
        suffix = list(accumulate(reversed(mu.masses), initial=ZERO))[::-1]
        for k, a in enumerate(points):
            above = suffix[bisect_right(xs, a)]
            if above > best[k]:
                best[k] = above

    for k, a in enumerate(points):
        count = len(centers) - bisect_right(centers, a)
        if count > best[k]:
            logger.debug(f"weight constraint fails at a={a}: {count} moves > mu_max {best[k]}")
            return WeightConstraintScan(False, points, a)
    return WeightConstraintScan(True, points, None)


def is_weight_constrained(trace: Trace) -> bool:
    return weight_constraint_scan(trace).ok


# --------------------------------------------------------------------------
# Splitting order
# --------------------------------------------------------------------------

def is_basic_split(mu: Distribution, mu_prime: Distribution) -> bool:
    """True iff mu_prime replaces one point of mu by points of the same total mass and center."""
    diff = subtract(mu_prime, mu)
    if not diff.points:
        return True
    if moment(diff, 0) != 0 or moment(diff, 1) != 0:
        return False
    negative = [(x, m) for x, m in diff.points if m < 0]
    if len(negative) != 1:
        return False
    x, m = negative[0]
    return -m <= mu.mass_at(x)


def split_system(mu: Distribution, mu_prime: Distribution) -> LinearSystem:
    """Transport plan t_ij >= 0: rows give mass m_i, columns receive m'_j, and row i keeps center x_i."""
    sources = mu.points
    targets = mu_prime.points
    width = len(targets)
    rows: list[tuple[dict[int, Fraction], Fraction]] = []
    for i, (x, m) in enumerate(sources):
        rows.append(({i * width + j: Fraction(1) for j in range(width)}, m))
        rows.append(({i * width + j: xt for j, (xt, _) in enumerate(targets)}, m * x))
    for j, (_, mt) in enumerate(targets):
        rows.append(({i * width + j: Fraction(1) for i in range(len(sources))}, mt))
    return LinearSystem.from_sparse(len(sources) * width, rows)


def is_split_of(mu: Distribution, mu_prime: Distribution) -> bool:
    """Decide mu <= mu_prime (mu_prime reachable from mu by basic splits)."""
    if moment(mu, 0) != moment(mu_prime, 0) or moment(mu, 1) != moment(mu_prime, 1):
        return False
    if not mu.points:
        return not mu_prime.points
    return isinstance(solve_feasibility(split_system(mu, mu_prime)), Feasible)


# --------------------------------------------------------------------------
# Spread and extreme-move inequalities
# --------------------------------------------------------------------------

def check_spread_lemma(mu: Distribution) -> InequalityCheck:
    """S^2 <= M2 M0^3 / 3."""
    lhs = spread(mu) ** 2
    rhs = moment(mu, 2) * moment(mu, 0) ** 3 / 3
    return InequalityCheck(lhs, rhs, lhs <= rhs)


def check_extreme_lemma(mu0: Distribution, e: ExtremeMove) -> InequalityCheck:
    """S[e mu0] - S[mu0] >= 3 (M2[e mu0] - M2[mu0])^2 for a unit-width extreme move."""
    if e.width != 1:
        raise PreconditionViolated(f"extreme move [{e.a}, {e.b}] must have width 1")
    mu1 = apply_extreme(mu0, e)
    gain = spread(mu1) - spread(mu0)
    bound = 3 * (moment(mu1, 2) - moment(mu0, 2)) ** 2
    return InequalityCheck(gain, bound, gain >= bound)
