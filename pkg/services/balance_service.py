"""
Balance of a stack: the equilibrium LP, force certificates, slice forces and
the conversion of a balanced stack into a sequence of lossy moves.

Forces along a contact interval are represented by two point forces at its
endpoints (one for a point contact); any nonnegative force distribution on
[a, b] has the same total and torque as some such pair.
"""

from collections import defaultdict
from fractions import Fraction
from typing import NamedTuple

from core.exceptions import NotBalanced
from core.logger import get_logger
from models.balance_model import Balanced, BalanceVerdict, ForceCertificate, ForceEntry, Unbalanced
from models.distribution_model import Distribution
from models.linear_system_model import Feasible, LinearSystem
from models.move_model import LossyMove, Move
from models.stack_model import Contact, Stack
from services.geometry_service import contacts, validate, weight_supports
from services.lp_service import solve_feasibility
from services.massmove_service import moment, subtract

logger = get_logger(__name__)

ZERO = Fraction(0)


class ForceSlot(NamedTuple):
    """One LP variable: a force at ``position`` along contact ``contact``."""

    contact: int
    position: Fraction


class EquilibriumLayout(NamedTuple):
    stack: Stack
    contacts: list[Contact]
    slots: list[ForceSlot]
    system: LinearSystem


def _block_loads(stack: Stack) -> tuple[dict[int, Fraction], dict[int, Fraction]]:
    """Point-weight mass and torque carried by each block (the table's share is dropped)."""
    mass: dict[int, Fraction] = defaultdict(Fraction)
    torque: dict[int, Fraction] = defaultdict(Fraction)
    for index, weight in weight_supports(stack):
        if index:
            mass[index] += weight.mass
            torque[index] += weight.mass * weight.x
    return mass, torque


def equilibrium_layout(stack: Stack) -> EquilibriumLayout:
    canonical = validate(stack)
    found = contacts(canonical)
    slots: list[ForceSlot] = []
    for index, contact in enumerate(found):
        slots.append(ForceSlot(index, contact.a))
        if not contact.degenerate:
            slots.append(ForceSlot(index, contact.b))

    force_rows = [defaultdict(Fraction) for _ in range(canonical.n + 1)]
    torque_rows = [defaultdict(Fraction) for _ in range(canonical.n + 1)]
    for column, slot in enumerate(slots):
        contact = found[slot.contact]
        force_rows[contact.upper][column] += 1
        torque_rows[contact.upper][column] += slot.position
        if contact.lower:
            force_rows[contact.lower][column] -= 1
            torque_rows[contact.lower][column] -= slot.position

    mass, torque = _block_loads(canonical)
    rows = []
    for index, block in enumerate(canonical.blocks, start=1):
        rows.append((force_rows[index], 1 + mass[index]))
        rows.append((torque_rows[index], block.center + torque[index]))

    system = LinearSystem.from_sparse(len(slots), rows)
    return EquilibriumLayout(canonical, found, slots, system)


def equilibrium_system(stack: Stack) -> LinearSystem:
    """Force and torque rows for every block (table rows omitted), one variable per force slot."""
    return equilibrium_layout(stack).system


def check_balance(stack: Stack) -> BalanceVerdict:
    layout = equilibrium_layout(stack)
    result = solve_feasibility(layout.system)
    if isinstance(result, Feasible):
        entries = tuple(
            ForceEntry(contact=slot.contact, position=slot.position, magnitude=value)
            for slot, value in zip(layout.slots, result.assignment)
            if value > 0
        )
        verdict: BalanceVerdict = Balanced(certificate=ForceCertificate(entries=entries))
    else:
        verdict = Unbalanced(witness=result.witness)
    logger.info(
        f"{layout.stack.n} blocks, {len(layout.contacts)} contacts: {verdict.kind}"
    )
    return verdict


def verify_certificate(stack: Stack, certificate: ForceCertificate) -> bool:
    """Exact check of force and torque equilibrium for every block.

    Raises:
        IndexError: an entry names a contact that does not exist.
    """
    canonical = validate(stack)
    found = contacts(canonical)
    force: dict[int, Fraction] = defaultdict(Fraction)
    torque: dict[int, Fraction] = defaultdict(Fraction)

    for entry in certificate.entries:
        if entry.contact >= len(found):
            raise IndexError(f"contact {entry.contact} out of range 0..{len(found) - 1}")
        contact = found[entry.contact]
        if entry.magnitude < 0 or not contact.a <= entry.position <= contact.b:
            return False
        force[contact.upper] += entry.magnitude
        torque[contact.upper] += entry.magnitude * entry.position
        if contact.lower:
            force[contact.lower] -= entry.magnitude
            torque[contact.lower] -= entry.magnitude * entry.position

    mass, load_torque = _block_loads(canonical)
    for index, block in enumerate(canonical.blocks, start=1):
        if force[index] != 1 + mass[index]:
            return False
        if torque[index] != block.center + load_torque[index]:
            return False
    return True


def _check_slice_index(stack: Stack, i: int) -> None:
    if not 0 <= i <= stack.n:
        raise IndexError(f"slice index {i} out of range 0..{stack.n}")


def slice_forces(stack: Stack, certificate: ForceCertificate, i: int) -> Distribution:
    """F_i: forces applied by B_0..B_i on B_{i+1}..B_n.

    Only contact forces are counted. A point weight resting on the table
    never loads a contact, so it is missing from F_0 here and appears only in
    ``loaded_slices``; the mass of F_0 is therefore the total weight minus the
    table weights.
    """
    canonical = validate(stack)
    _check_slice_index(canonical, i)
    found = contacts(canonical)
    return Distribution.of(
        (entry.position, entry.magnitude)
        for entry in certificate.entries
        if found[entry.contact].lower <= i < found[entry.contact].upper
    )


def loaded_slices(stack: Stack, certificate: ForceCertificate, i: int) -> Distribution:
    """F_i plus the point weights resting on B_0..B_i, kept as frozen mass."""
    canonical = validate(stack)
    frozen = [(w.x, w.mass) for index, w in weight_supports(canonical) if index <= i]
    forces = slice_forces(canonical, certificate, i)
    return Distribution.of(list(forces.points) + frozen)


def slice_sequence(stack: Stack, certificate: ForceCertificate, upto: int, *, loaded: bool = True) -> list[Distribution]:
    """[G_0, ..., G_upto], built incrementally by crossing one block at a time."""
    canonical = validate(stack)
    _check_slice_index(canonical, upto)
    found = contacts(canonical)
    supports = weight_supports(canonical) if loaded else []

    entering: dict[int, list[tuple[Fraction, Fraction]]] = defaultdict(list)
    leaving: dict[int, list[tuple[Fraction, Fraction]]] = defaultdict(list)
    for entry in certificate.entries:
        contact = found[entry.contact]
        leaving[contact.upper].append((entry.position, entry.magnitude))
        entering[contact.lower].append((entry.position, entry.magnitude))
    for index, weight in supports:
        entering[index].append((weight.x, weight.mass))

    current: dict[Fraction, Fraction] = defaultdict(Fraction)
    sequence = []
    for j in range(upto + 1):
        for x, m in leaving[j]:
            current[x] -= m
        for x, m in entering[j]:
            current[x] += m
        sequence.append(Distribution.of((x, m) for x, m in current.items() if m))
    return sequence


def check_slice_consistency(stack: Stack, certificate: ForceCertificate) -> list[str]:
    """Problems found between consecutive slices; empty when every block accounts exactly."""
    canonical = validate(stack)
    slices = slice_sequence(canonical, certificate, canonical.n, loaded=False)
    mass, torque = _block_loads(canonical)
    problems = []
    for j in range(1, canonical.n + 1):
        block = canonical.block(j)
        before, after = slices[j - 1], slices[j]
        diff = subtract(after, before)
        outside = [x for x, _ in diff.points if not block.x <= x <= block.right]
        if outside:
            problems.append(f"slice {j} changes outside block {j} at x = {outside[0]}")
        if moment(after, 0) != moment(before, 0) - 1 - mass[j]:
            problems.append(f"slice {j}: total force does not drop by the weight of block {j}")
        if moment(after, 1) != moment(before, 1) - block.center - torque[j]:
            problems.append(f"slice {j}: torque does not drop by the moment of block {j}")
    return problems


def to_lossy_sequence(stack: Stack, certificate: ForceCertificate, k: int) -> tuple[Distribution, list[LossyMove]]:
    """mu_0 = G_0 and lossy moves j = 1..k-1 on [x_j, x_j + 1] taking G_{j-1} to G_j.

    For an unloaded stack G_j is the slice F_j; point weights carried by
    B_1..B_j stay in G_j as frozen mass so every step loses exactly one unit.

    Raises:
        NotBalanced: the certificate does not balance the stack.
    """
    canonical = validate(stack)
    if not 1 <= k <= canonical.n:
        raise IndexError(f"block index {k} out of range 1..{canonical.n}")
    if not verify_certificate(canonical, certificate):
        raise NotBalanced("certificate does not put every block in equilibrium")

    slices = slice_sequence(canonical, certificate, k - 1)
    moves = []
    for j in range(1, k):
        block = canonical.block(j)
        delta = list(subtract(slices[j], slices[j - 1]).points) + [(block.center, 1)]
        moves.append(LossyMove(move=Move.on(block.x, delta)))
    logger.debug(f"{len(moves)} lossy moves up to block {k}")
    return slices[0], moves


def expand_certificate(stack: Stack, certificate: ForceCertificate, spread: bool = False) -> ForceCertificate:
    """Re-express each contact's endpoint forces as interior point forces.

    By default a contact's forces collapse to their resultant, a single force
    at the force-weighted center. With ``spread`` the resultant is split into
    two halves placed symmetrically around that center, as far apart as the
    contact allows. Totals and torques per contact are unchanged, so the
    result verifies exactly when the input does.
    """
    canonical = validate(stack)
    found = contacts(canonical)
    total: dict[int, Fraction] = defaultdict(Fraction)
    torque: dict[int, Fraction] = defaultdict(Fraction)
    for entry in certificate.entries:
        total[entry.contact] += entry.magnitude
        torque[entry.contact] += entry.magnitude * entry.position

    entries = []
    for index in sorted(total):
        if total[index] == 0:
            continue
        contact = found[index]
        c = torque[index] / total[index]
        offset = min(c - contact.a, contact.b - c) / 2
        if spread and offset > 0:
            half = total[index] / 2
            entries.append(ForceEntry(contact=index, position=c - offset, magnitude=half))
            entries.append(ForceEntry(contact=index, position=c + offset, magnitude=half))
        else:
            entries.append(ForceEntry(contact=index, position=c, magnitude=total[index]))
    return ForceCertificate(entries=tuple(entries))
