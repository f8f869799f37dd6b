from bisect import bisect_left, bisect_right
from collections import defaultdict
from fractions import Fraction
from typing import Optional

from core.exceptions import DanglingWeightError, EmptyStack, OverlapError
from core.logger import get_logger
from models.stack_model import Block, Contact, PointWeight, Stack

logger = get_logger(__name__)


def canonical_order(blocks) -> tuple[Block, ...]:
    """Bottom to top, then left to right."""
    return tuple(sorted(blocks, key=lambda b: (b.y, b.x)))


def validate(stack: Stack) -> Stack:
    """Return the stack in canonical (y, x) order, or raise.

    Raises:
        OverlapError: two block interiors intersect (index 0 means the table).
        DanglingWeightError: a point weight rests on no block top and not on the table.
    """
    blocks = canonical_order(stack.blocks)
    h = stack.h

    # Sweep upward: only blocks whose bottoms lie within h of each other can overlap.
    for i, lower in enumerate(blocks, start=1):
        if lower.x < 0 and lower.y < 0:
            raise OverlapError(i, 0, f"block at ({lower.x}, {lower.y})")
        for j in range(i, len(blocks)):
            upper = blocks[j]
            if upper.y - lower.y >= h:
                break
            if abs(upper.x - lower.x) < 1:
                raise OverlapError(
                    i, j + 1, f"({lower.x}, {lower.y}) and ({upper.x}, {upper.y})"
                )

    canonical = stack.model_copy(update={"blocks": blocks})
    for weight in stack.weights:
        if support_of(canonical, weight) is None:
            raise DanglingWeightError(
                f"point weight at ({weight.x}, {weight.y}) rests on no block and not on the table"
            )
    return canonical


def support_of(stack: Stack, weight: PointWeight) -> Optional[int]:
    """Index of the block whose top carries the weight (lowest index on ties), 0 for the table."""
    for index, block in enumerate(stack.blocks, start=1):
        if weight.y == block.y + stack.h and block.x <= weight.x <= block.right:
            return index
    if weight.y == 0 and weight.x <= 0:
        return 0
    return None


def weight_supports(stack: Stack) -> list[tuple[int, PointWeight]]:
    """(supporting index, weight) for every point weight of a validated stack."""
    supports = []
    for weight in stack.weights:
        index = support_of(stack, weight)
        if index is None:
            raise DanglingWeightError(f"point weight at ({weight.x}, {weight.y}) is unsupported")
        supports.append((index, weight))
    return supports


def contacts(stack: Stack) -> list[Contact]:
    """Every rests-on pair of a validated stack, ordered by (upper, lower).

    A block touching another only at a corner gets a point contact (a == b);
    blocks side by side on one level never interact because all forces are vertical.
    """
    levels: dict[Fraction, list[tuple[Fraction, int]]] = defaultdict(list)
    for index, block in enumerate(stack.blocks, start=1):
        levels[block.y].append((block.x, index))
    for row in levels.values():
        row.sort()

    found: list[Contact] = []
    for index, block in enumerate(stack.blocks, start=1):
        if block.y == 0 and block.x <= 0:
            found.append(Contact(upper=index, lower=0, a=block.x, b=min(block.right, Fraction(0))))

        below = levels.get(block.y - stack.h)
        if not below:
            continue
        xs = [x for x, _ in below]
        lo = bisect_left(xs, block.x - 1)
        hi = bisect_right(xs, block.x + 1)
        for x, lower in sorted(below[lo:hi], key=lambda item: item[1]):
            a = max(block.x, x)
            b = min(block.right, x + 1)
            found.append(Contact(upper=index, lower=lower, a=a, b=b))

    logger.debug(f"{len(found)} contacts for {stack.n} blocks")
    return found


def overhang(stack: Stack) -> Fraction:
    """max(x_i + 1) over the blocks.

    Raises:
        EmptyStack: the stack has no blocks.
    """
    if not stack.blocks:
        raise EmptyStack("overhang of an empty stack is undefined")
    return max(block.right for block in stack.blocks)


def most_overhanging(stack: Stack) -> int:
    """1-based index of a block achieving the overhang (the lowest such index)."""
    reach = overhang(stack)
    return next(i for i, block in enumerate(stack.blocks, start=1) if block.right == reach)
