from __future__ import annotations

from collections import defaultdict
from fractions import Fraction
from typing import Iterable, Mapping

from pydantic import model_validator

from core.domain import DomainModel
from core.rational import RationalField, to_rational

Point = tuple[RationalField, RationalField]


def coalesce(pairs: Iterable[tuple]) -> dict[Fraction, Fraction]:
    """Sum masses per coordinate and drop the coordinates whose mass cancels."""
    acc: dict[Fraction, Fraction] = defaultdict(Fraction)
    for x, m in pairs:
        acc[to_rational(x)] += to_rational(m)
    return {x: m for x, m in acc.items() if m != 0}


class SignedDistribution(DomainModel):
    """
    Finite signed point-mass distribution in canonical form.

    Attributes:
        points: (x, m) pairs, x strictly increasing, every m != 0
    """

    points: tuple[Point, ...] = ()

    @model_validator(mode="after")
    def _canonical(self):
        previous = None
        for x, m in self.points:
            if previous is not None and x <= previous:
                raise ValueError("coordinates must be strictly increasing")
            self._check_mass(m)
            previous = x
        return self

    @staticmethod
    def _check_mass(m: Fraction) -> None:
        if m == 0:
            raise ValueError("zero masses are not stored")

    @classmethod
    def of(cls, pairs: Iterable[tuple] | Mapping = ()):
        """Coalesce arbitrary (x, m) pairs into canonical form."""
        if isinstance(pairs, Mapping):
            pairs = pairs.items()
        merged = coalesce(pairs)
        return cls(points=tuple(sorted(merged.items())))

    def __len__(self) -> int:
        return len(self.points)

    @property
    def xs(self) -> tuple[Fraction, ...]:
        return tuple(x for x, _ in self.points)

    @property
    def masses(self) -> tuple[Fraction, ...]:
        return tuple(m for _, m in self.points)

    def as_dict(self) -> dict[Fraction, Fraction]:
        return dict(self.points)

    def mass_at(self, x) -> Fraction:
        return self.as_dict().get(to_rational(x), Fraction(0))

    def __str__(self) -> str:
        if not self.points:
            return "{}"
        return " ".join(f"({x}, {m})" for x, m in self.points)


class Distribution(SignedDistribution):
    """
    Discrete mass distribution: a signed distribution whose masses are all > 0.

    The empty distribution is allowed (a lossy move can consume all mass).
    """

    @staticmethod
    def _check_mass(m: Fraction) -> None:
        if m <= 0:
            raise ValueError("distribution masses must be > 0")

    @classmethod
    def point(cls, x, m=1) -> "Distribution":
        return cls.of([(x, m)])
