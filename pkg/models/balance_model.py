from __future__ import annotations

from typing import Annotated, Literal, Union

from pydantic import Field, field_validator

from core.domain import DomainModel
from core.rational import RationalField


class ForceEntry(DomainModel):
    """
    Upward point force along one contact interval.

    Attributes:
        contact: index into ``contacts(stack)``
        position: x-coordinate of the force, inside the contact interval
        magnitude: >= 0
    """

    contact: int = Field(ge=0)
    position: RationalField
    magnitude: RationalField

    @field_validator("magnitude")
    @classmethod
    def _nonnegative(cls, value):
        if value < 0:
            raise ValueError("force magnitudes must be >= 0")
        return value


class ForceCertificate(DomainModel):
    """Forces at contact endpoints putting every block in equilibrium."""

    entries: tuple[ForceEntry, ...] = ()


class Balanced(DomainModel):
    kind: Literal["balanced"] = "balanced"
    certificate: ForceCertificate

    @property
    def is_balanced(self) -> bool:
        return True


class Unbalanced(DomainModel):
    """No admissible force assignment exists; ``witness`` is the Farkas certificate."""

    kind: Literal["unbalanced"] = "unbalanced"
    witness: tuple[RationalField, ...]

    @property
    def is_balanced(self) -> bool:
        return False


BalanceVerdict = Annotated[Union[Balanced, Unbalanced], Field(discriminator="kind")]
