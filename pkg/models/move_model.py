from __future__ import annotations

from fractions import Fraction
from typing import Annotated, Literal, Union

from pydantic import Field, model_validator

from core.domain import DomainModel
from core.rational import RationalField, to_rational
from models.distribution_model import Distribution, SignedDistribution


class Move(DomainModel):
    """
    Mass redistribution inside [a, b] that keeps total mass and torque.

    Attributes:
        a, b: interval ends; b - a == 1 unless ``wide`` is set
        delta: signed distribution on [a, b] with M0 = M1 = 0
        wide: allows an interval of any positive length
    """

    kind: Literal["move"] = "move"
    a: RationalField
    b: RationalField
    delta: SignedDistribution = SignedDistribution()
    wide: bool = False

    @model_validator(mode="after")
    def _check_invariants(self):
        if self.b <= self.a:
            raise ValueError(f"move interval [{self.a}, {self.b}] is empty")
        if not self.wide and self.b - self.a != 1:
            raise ValueError(f"move interval [{self.a}, {self.b}] must have length 1")
        total = Fraction(0)
        torque = Fraction(0)
        for x, m in self.delta.points:
            if not self.a <= x <= self.b:
                raise ValueError(f"move delta has mass at {x}, outside [{self.a}, {self.b}]")
            total += m
            torque += m * x
        if total != 0 or torque != 0:
            raise ValueError(f"move delta must have M0 = M1 = 0, got M0={total}, M1={torque}")
        return self

    @property
    def center(self) -> Fraction:
        return (self.a + self.b) / 2

    @property
    def width(self) -> Fraction:
        return self.b - self.a

    @classmethod
    def on(cls, a, delta_pairs=(), *, b=None, wide: bool = False) -> "Move":
        """Move on [a, a+1] (or [a, b]) with delta given as (x, m) pairs."""
        a_value = to_rational(a)
        return cls(
            a=a_value,
            b=a_value + 1 if b is None else b,
            delta=SignedDistribution.of(delta_pairs),
            wide=wide,
        )


class LossyMove(DomainModel):
    """A move that also consumes one unit of mass at its center (a block's weight)."""

    kind: Literal["lossy"] = "lossy"
    move: Move

    @property
    def a(self) -> Fraction:
        return self.move.a

    @property
    def b(self) -> Fraction:
        return self.move.b

    @property
    def center(self) -> Fraction:
        return self.move.center

    @property
    def width(self) -> Fraction:
        return self.move.width

    @property
    def lossy_delta(self) -> SignedDistribution:
        return SignedDistribution.of(list(self.move.delta.points) + [(self.center, -1)])


class ExtremeMove(DomainModel):
    """Pushes all mass strictly inside (a, b) to the two endpoints, keeping M0 and M1."""

    kind: Literal["extreme"] = "extreme"
    a: RationalField
    b: RationalField

    @model_validator(mode="after")
    def _ordered(self):
        if not self.a < self.b:
            raise ValueError(f"extreme move needs a < b, got [{self.a}, {self.b}]")
        return self

    @property
    def center(self) -> Fraction:
        return (self.a + self.b) / 2

    @property
    def width(self) -> Fraction:
        return self.b - self.a

    @classmethod
    def unit(cls, a) -> "ExtremeMove":
        a_value = to_rational(a)
        return cls(a=a_value, b=a_value + 1)


class TraceStep(DomainModel):
    """One applied step and the distribution it produced."""

    action: Annotated[Union[Move, LossyMove, ExtremeMove], Field(discriminator="kind")]
    result: Distribution


class Trace(DomainModel):
    """
    Sequence of distributions mu_0, ..., mu_l generated by applying moves.

    Built by ``services.massmove_service.apply_sequence``; each step's result
    is the action applied to the previous distribution.
    """

    initial: Distribution
    steps: tuple[TraceStep, ...] = ()

    @property
    def distributions(self) -> tuple[Distribution, ...]:
        return (self.initial,) + tuple(step.result for step in self.steps)

    @property
    def final(self) -> Distribution:
        return self.steps[-1].result if self.steps else self.initial

    @property
    def actions(self) -> tuple[Union[Move, LossyMove, ExtremeMove], ...]:
        return tuple(step.action for step in self.steps)

    def __len__(self) -> int:
        return len(self.steps)


Action = Union[Move, LossyMove, ExtremeMove]


class MoveScript(DomainModel):
    """
    Parsed move script: an initial distribution and the actions to apply.

    Attributes:
        initial: distribution given between ``init`` and ``end``
        actions: steps in file order
        lines: 1-based source line of each action
    """

    initial: Distribution
    actions: tuple[Annotated[Union[Move, LossyMove, ExtremeMove], Field(discriminator="kind")], ...] = ()
    lines: tuple[int, ...] = ()
