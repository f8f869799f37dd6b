from __future__ import annotations

from fractions import Fraction

from pydantic import Field, field_validator

from core.domain import DomainModel
from core.rational import RationalField


class Block(DomainModel):
    """
    Unit-length, unit-weight block.

    Attributes:
        x: left edge; the block occupies [x, x+1] x [y, y+h]
        y: bottom edge
    """

    x: RationalField
    y: RationalField

    @property
    def right(self) -> Fraction:
        return self.x + 1

    @property
    def center(self) -> Fraction:
        return self.x + Fraction(1, 2)

    def __repr__(self) -> str:
        return f"<Block(x={self.x}, y={self.y})>"


class PointWeight(DomainModel):
    """
    Point load of arbitrary mass resting on a block top or on the table.

    Attributes:
        x: position
        y: level of the surface it rests on
        mass: weight, strictly positive
    """

    x: RationalField
    y: RationalField
    mass: RationalField

    @field_validator("mass")
    @classmethod
    def _positive_mass(cls, value: Fraction) -> Fraction:
        if value <= 0:
            raise ValueError("point weight mass must be > 0")
        return value

    def __repr__(self) -> str:
        return f"<PointWeight(x={self.x}, y={self.y}, mass={self.mass})>"


class Stack(DomainModel):
    """
    A stack of blocks on a table whose top-right corner is (0, 0).

    Geometry is not checked here; ``services.geometry_service.validate``
    returns the canonical (y, x)-ordered form or raises.

    Attributes:
        blocks: blocks in any order (canonical order after validation)
        h: common block height, > 0
        weights: point weights (a loaded stack when non-empty)
    """

    blocks: tuple[Block, ...] = ()
    h: RationalField = Fraction(1)
    weights: tuple[PointWeight, ...] = ()

    @field_validator("h")
    @classmethod
    def _positive_height(cls, value: Fraction) -> Fraction:
        if value <= 0:
            raise ValueError("block height must be > 0")
        return value

    @property
    def n(self) -> int:
        return len(self.blocks)

    @property
    def weight_mass(self) -> Fraction:
        return sum((w.mass for w in self.weights), Fraction(0))

    @property
    def total_weight(self) -> Fraction:
        """Blocks count one each; point weights add their mass."""
        return self.n + self.weight_mass

    def block(self, index: int) -> Block:
        """1-based access, matching the B_1..B_n numbering of contacts."""
        if not 1 <= index <= self.n:
            raise IndexError(f"block index {index} out of range 1..{self.n}")
        return self.blocks[index - 1]

    @classmethod
    def of(cls, coords, h=1, weights=()) -> "Stack":
        """Build from ``(x, y)`` pairs and ``(x, y, mass)`` triples."""
        return cls(
            blocks=tuple(Block(x=x, y=y) for x, y in coords),
            h=h,
            weights=tuple(PointWeight(x=x, y=y, mass=m) for x, y, m in weights),
        )

    def __repr__(self) -> str:
        return f"<Stack(n={self.n}, h={self.h}, weights={len(self.weights)})>"


class Contact(DomainModel):
    """
    Contact interval between an upper block and the block (or table) it rests on.

    Attributes:
        upper: index of the resting block, >= 1
        lower: index of the supporting block, 0 for the table
        a, b: interval ends, a <= b (a == b for a point contact)
    """

    upper: int = Field(ge=1)
    lower: int = Field(ge=0)
    a: RationalField
    b: RationalField

    @field_validator("b")
    @classmethod
    def _ordered(cls, value: Fraction, info) -> Fraction:
        a = info.data.get("a")
        if a is not None and value < a:
            raise ValueError("contact interval must satisfy a <= b")
        return value

    @property
    def degenerate(self) -> bool:
        return self.a == self.b

    @property
    def on_table(self) -> bool:
        return self.lower == 0

    def __repr__(self) -> str:
        return f"<Contact({self.upper}/{self.lower}, [{self.a}, {self.b}])>"
