from __future__ import annotations

from fractions import Fraction
from typing import Annotated, Literal, Sequence, Union

from pydantic import Field, model_validator

from core.domain import DomainModel
from core.exceptions import DimensionMismatch
from core.rational import RationalField, to_rational


class LinearRow(DomainModel):
    """
    One equality row ``sum(c_j * x_j) = rhs``.

    Attributes:
        terms: (column, coefficient) pairs, columns strictly increasing, no zero coefficients
        rhs: right-hand side
    """

    terms: tuple[tuple[int, RationalField], ...] = ()
    rhs: RationalField = Fraction(0)

    @model_validator(mode="after")
    def _sorted_terms(self):
        previous = -1
        for column, coefficient in self.terms:
            if column <= previous:
                raise ValueError("row columns must be strictly increasing")
            if coefficient == 0:
                raise ValueError("zero coefficients are not stored")
            previous = column
        return self

    def dense(self, num_vars: int) -> list[Fraction]:
        values = [Fraction(0)] * num_vars
        for column, coefficient in self.terms:
            values[column] = coefficient
        return values


class LinearSystem(DomainModel):
    """
    Feasibility problem ``A x = b, x >= 0`` over the rationals.

    Rows are stored by their nonzero coefficients; ``dense_rows`` expands
    them to ``num_vars`` entries each.
    """

    num_vars: int = Field(ge=0)
    rows: tuple[LinearRow, ...] = ()

    @model_validator(mode="after")
    def _columns_in_range(self):
        for index, row in enumerate(self.rows):
            if row.terms and row.terms[-1][0] >= self.num_vars:
                raise DimensionMismatch(
                    f"row {index} uses column {row.terms[-1][0]} but the system has {self.num_vars} variables"
                )
        return self

    @classmethod
    def from_dense(cls, rows: Sequence[tuple[Sequence, object]], num_vars: int | None = None) -> "LinearSystem":
        """Build from ``(coefficients, rhs)`` pairs; every row must have the same length."""
        if num_vars is None:
            num_vars = len(rows[0][0]) if rows else 0
        built = []
        for index, (coefficients, rhs) in enumerate(rows):
            if len(coefficients) != num_vars:
                raise DimensionMismatch(
                    f"row {index} has {len(coefficients)} coefficients, expected {num_vars}"
                )
            terms = tuple(
                (j, to_rational(c)) for j, c in enumerate(coefficients) if to_rational(c) != 0
            )
            built.append(LinearRow(terms=terms, rhs=rhs))
        return cls(num_vars=num_vars, rows=tuple(built))

    @classmethod
    def from_sparse(cls, num_vars: int, rows: Sequence[tuple[dict[int, Fraction], Fraction]]) -> "LinearSystem":
        built = tuple(
            LinearRow(terms=tuple(sorted((j, c) for j, c in terms.items() if c != 0)), rhs=rhs)
            for terms, rhs in rows
        )
        return cls(num_vars=num_vars, rows=built)

    @property
    def num_rows(self) -> int:
        return len(self.rows)

    def dense_rows(self) -> list[tuple[list[Fraction], Fraction]]:
        return [(row.dense(self.num_vars), row.rhs) for row in self.rows]


class Feasible(DomainModel):
    """Nonnegative assignment satisfying every row exactly."""

    kind: Literal["feasible"] = "feasible"
    assignment: tuple[RationalField, ...]


class Infeasible(DomainModel):
    """Farkas witness y: (y^T A)_j <= 0 for every column and y^T b > 0."""

    kind: Literal["infeasible"] = "infeasible"
    witness: tuple[RationalField, ...]


FeasibilityResult = Annotated[Union[Feasible, Infeasible], Field(discriminator="kind")]
