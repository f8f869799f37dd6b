"""Generators for the named stack constructions.

Every row built here is contiguous and symmetric about the table edge x = 0,
so a t-row spans [-t/2, t/2].
"""

from fractions import Fraction
from typing import Callable

from core.rational import to_rational
from models.stack_model import Block, Stack


def _check_size(name: str, size: int) -> None:
    if isinstance(size, bool) or not isinstance(size, int) or size < 1:
        raise ValueError(f"{name} must be a positive integer, got {size!r}")


def centered_row(t: int, y: Fraction) -> list[Block]:
    left = Fraction(-t, 2)
    return [Block(x=left + k, y=y) for k in range(t)]


def _rows_to_stack(sizes: list[int], h) -> Stack:
    height = to_rational(h)
    blocks: list[Block] = []
    for level, t in enumerate(sizes):
        blocks.extend(centered_row(t, level * height))
    return Stack(blocks=tuple(blocks), h=height)


def gen_harmonic(n: int, h=1) -> Stack:
    """n blocks, one per level; block k from the bottom ends at sum_{i=n-k+1}^{n} 1/(2i)."""
    _check_size("n", n)
    height = to_rational(h)
    blocks = []
    right = Fraction(0)
    for k in range(1, n + 1):
        right += Fraction(1, 2 * (n - k + 1))
        blocks.append(Block(x=right - 1, y=(k - 1) * height))
    return Stack(blocks=tuple(blocks), h=height)


def brickwall_row_sizes(d: int) -> list[int]:
    """Row sizes of the d-stack, bottom to top: a 1-row, then an r-slab for r = 2..d.

    An r-slab is 2r-3 rows alternating r-rows and (r-1)-rows, starting and ending with an r-row.
    """
    _check_size("d", d)
    sizes = [1]
    for r in range(2, d + 1):
        sizes.extend(r if s % 2 == 0 else r - 1 for s in range(2 * r - 3))
    return sizes


def gen_brickwall(d: int, h=1) -> Stack:
    """The parabolic d-stack: d(d-1)(2d-1)/3 + 1 blocks, overhang d/2."""
    return _rows_to_stack(brickwall_row_sizes(d), h)


def brickwall_block_count(d: int) -> int:
    return d * (d - 1) * (2 * d - 1) // 3 + 1


def gen_inverted_triangle(r: int, h=1) -> Stack:
    _check_size("r", r)
    return _rows_to_stack(list(range(1, r + 1)), h)


def gen_diamond(d: int, h=1) -> Stack:
    """Rows 1, 2, ..., d, ..., 2, 1 (2d-1 rows)."""
    _check_size("d", d)
    return _rows_to_stack(list(range(1, d + 1)) + list(range(d - 1, 0, -1)), h)


GENERATORS: dict[str, Callable[..., Stack]] = {
    "harmonic": gen_harmonic,
    "brickwall": gen_brickwall,
    "triangle": gen_inverted_triangle,
    "diamond": gen_diamond,
}
