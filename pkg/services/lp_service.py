"""
Exact feasibility for ``A x = b, x >= 0`` over the rationals.

Phase-1 simplex with one artificial variable per row. Each tableau row is
kept as a sparse dict of integers scaled by a positive factor and reduced by
its gcd after every pivot, so pivoting never builds a ``Fraction``. The
entering column is the most negative reduced cost; after ``bland_after``
degenerate pivots in a row both choices switch to Bland's rule until the
objective moves again, so degenerate systems (the precariously balanced
stacks) terminate.
"""

from fractions import Fraction
from math import gcd, lcm
from typing import Optional, Sequence

from core.config import get_settings
from core.exceptions import DimensionMismatch, SolverError
from core.logger import get_logger
from models.linear_system_model import Feasible, FeasibilityResult, Infeasible, LinearSystem

logger = get_logger(__name__)

ZERO = Fraction(0)


def _scaled(values: dict[int, Fraction], extra: Fraction = ZERO) -> tuple[dict[int, int], int, int]:
    """(integer entries, integer extra, scale) with every entry multiplied by the common denominator."""
    scale = lcm(extra.denominator, *(v.denominator for v in values.values()))
    ints = {k: v.numerator * (scale // v.denominator) for k, v in values.items()}
    return ints, extra.numerator * (scale // extra.denominator), scale


class PhaseOneTableau:
    """
    Phase-1 tableau minimizing the sum of artificials.

    Columns ``0..n-1`` are the structural variables, ``n..n+m-1`` the
    artificials. Row ``i`` stands for ``rows[i] . x = rhs[i]`` up to a
    positive factor, so the value of its basic variable is
    ``rhs[i] / rows[i][basis[i]]``. The reduced costs ``c_j - y^T A'_j`` of
    the sign-normalized matrix ``A'`` are ``cost[j] / cost_den``.
    """

    def __init__(self, system: LinearSystem, bland_after: int = 50):
        self.n = system.num_vars
        self.m = system.num_rows
        self.signs: list[int] = []
        self.rows: list[dict[int, int]] = []
        self.rhs: list[int] = []
        self.basis: list[int] = []
        self.pivots = 0
        self.bland_after = bland_after
        self.degenerate_streak = 0

        reduced: dict[int, Fraction] = {}
        for i, row in enumerate(system.rows):
            sign = -1 if row.rhs < 0 else 1
            entries = {j: sign * c for j, c in row.terms}
            entries[self.n + i] = Fraction(1)
            ints, rhs, _ = _scaled(entries, sign * row.rhs)
            self.signs.append(sign)
            self.rows.append(ints)
            self.rhs.append(rhs)
            self.basis.append(self.n + i)
            for j, c in row.terms:
                reduced[j] = reduced.get(j, ZERO) - sign * c

        self.cost, _, self.cost_den = _scaled({j: c for j, c in reduced.items() if c})

    @property
    def bland(self) -> bool:
        return self.degenerate_streak >= self.bland_after

    def entering(self) -> Optional[int]:
        """Most negative reduced cost (lowest index on ties), or Bland's lowest index."""
        negative = [(c, j) for j, c in self.cost.items() if c < 0]
        if not negative:
            return None
        if self.bland:
            return min(j for _, j in negative)
        return min(negative)[1]

    def leaving(self, column: int) -> int:
        """Minimum ratio. Ties go to the lowest basic index under Bland, otherwise to artificials first."""
        best = None
        for i, row in enumerate(self.rows):
            coefficient = row.get(column)
            if coefficient is not None and coefficient > 0:
                b = self.basis[i]
                tie = (b,) if self.bland else (b < self.n, b)
                key = (Fraction(self.rhs[i], coefficient), tie, i)
                if best is None or key < best:
                    best = key
        if best is None:
            # The phase-1 objective is bounded below by 0, so this cannot happen.
            raise SolverError(f"phase-1 problem unbounded in column {column}")
        return best[2]

    def pivot(self, r: int, column: int) -> None:
        prow = self.rows[r]
        piv = prow[column]
        prhs = self.rhs[r]

        for i, row in enumerate(self.rows):
            if i == r:
                continue
            factor = row.get(column)
            if factor is None:
                continue
            combined = _combine(row, prow, piv, factor)
            rhs = piv * self.rhs[i] - factor * prhs
            g = gcd(rhs, *combined.values())
            if g > 1:
                combined = {k: v // g for k, v in combined.items()}
                rhs //= g
            self.rows[i] = combined
            self.rhs[i] = rhs

        factor = self.cost.get(column)
        if factor is not None:
            cost = _combine(self.cost, prow, piv, factor)
            den = self.cost_den * piv
            g = gcd(den, *cost.values())
            self.cost = {k: v // g for k, v in cost.items()}
            self.cost_den = den // g

        self.degenerate_streak = self.degenerate_streak + 1 if prhs == 0 else 0
        self.basis[r] = column
        self.pivots += 1

    def run(self, max_pivots: int) -> None:
        while True:
            column = self.entering()
            if column is None:
                return
            if self.pivots >= max_pivots:
                raise SolverError(f"exceeded {max_pivots} pivots")
            r = self.leaving(column)
            logger.debug(f"pivot {self.pivots}: column {column} enters, row {r} (basic {self.basis[r]}) leaves")
            self.pivot(r, column)

    def value(self, i: int) -> Fraction:
        return Fraction(self.rhs[i], self.rows[i][self.basis[i]])

    def infeasibility(self) -> Fraction:
        return sum((self.value(i) for i, b in enumerate(self.basis) if b >= self.n), ZERO)

    def assignment(self) -> list[Fraction]:
        values = [ZERO] * self.n
        for i, b in enumerate(self.basis):
            if b < self.n:
                values[b] = self.value(i)
        return values

    def farkas_witness(self) -> list[Fraction]:
        """Dual of phase 1: y'_i = 1 - (reduced cost of artificial i), mapped back through the row signs."""
        return [
            self.signs[i] * (1 - Fraction(self.cost.get(self.n + i, 0), self.cost_den))
            for i in range(self.m)
        ]


def _combine(row: dict[int, int], prow: dict[int, int], piv: int, factor: int) -> dict[int, int]:
    """``piv * row - factor * prow`` without zero entries; ``piv > 0`` keeps the row's sign."""
    combined = {k: piv * v for k, v in row.items()}
    for k, v in prow.items():
        updated = combined.get(k, 0) - factor * v
        if updated:
            combined[k] = updated
        else:
            combined.pop(k, None)
    return combined


def solve_feasibility(system: LinearSystem) -> FeasibilityResult:
    """Decide ``A x = b, x >= 0`` exactly and return a self-verifying certificate.

    Raises:
        DimensionMismatch: the system is malformed.
        SolverError: the certificate failed its own verification (a solver bug).
    """
    if not isinstance(system, LinearSystem):
        raise DimensionMismatch("solve_feasibility expects a LinearSystem")

    settings = get_settings().solver
    tableau = PhaseOneTableau(system, settings.bland_after)
    tableau.run(settings.max_pivots)

    if tableau.infeasibility() == 0:
        result: FeasibilityResult = Feasible(assignment=tuple(tableau.assignment()))
        ok = verify_feasible(system, result.assignment)
    else:
        result = Infeasible(witness=tuple(tableau.farkas_witness()))
        ok = verify_farkas(system, result.witness)

    logger.debug(
        f"{system.num_rows}x{system.num_vars} system: {result.kind} after {tableau.pivots} pivots"
    )
    if not ok:
        raise SolverError(f"{result.kind} certificate failed verification")
    return result


def verify_feasible(system: LinearSystem, assignment: Sequence[Fraction]) -> bool:
    if len(assignment) != system.num_vars:
        raise DimensionMismatch(
            f"assignment has {len(assignment)} entries, system has {system.num_vars} variables"
        )
    if any(value < 0 for value in assignment):
        return False
    for row in system.rows:
        if sum((c * assignment[j] for j, c in row.terms), ZERO) != row.rhs:
            return False
    return True


def verify_farkas(system: LinearSystem, witness: Sequence[Fraction]) -> bool:
    if len(witness) != system.num_rows:
        raise DimensionMismatch(
            f"witness has {len(witness)} entries, system has {system.num_rows} rows"
        )
    combined: dict[int, Fraction] = {}
    for y, row in zip(witness, system.rows):
        if not y:
            continue
        for j, c in row.terms:
            combined[j] = combined.get(j, ZERO) + y * c
    if any(value > 0 for value in combined.values()):
        return False
    return sum((y * row.rhs for y, row in zip(witness, system.rows)), ZERO) > 0
