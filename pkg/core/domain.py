from pydantic import BaseModel, ConfigDict


class DomainModel(BaseModel):
    """Base class for every immutable domain value (stacks, distributions, moves, systems)."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)
