"""Exact rational plumbing shared by every model and service.

``fractions.Fraction`` already keeps numerator/denominator in lowest terms
with a positive denominator, so it is used directly as the rational type.
"""

from decimal import Decimal
from fractions import Fraction
from typing import Annotated, Any

from pydantic import BeforeValidator, PlainSerializer

Rational = Fraction

_MINUS_SIGNS = str.maketrans({"−": "-", "–": "-"})


def parse_rational(text: str) -> Fraction:
    """Parse ``p/q``, an integer, or a decimal such as ``0.125`` exactly."""
    cleaned = text.strip().translate(_MINUS_SIGNS)
    if not cleaned:
        raise ValueError("empty rational")
    try:
        return Fraction(cleaned)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a rational number: {text!r}") from exc


def to_rational(value: Any) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, Decimal):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    if isinstance(value, float):
        raise TypeError(f"floats are not accepted as exact rationals: {value!r}")
    raise TypeError(f"cannot convert {type(value).__name__} to a rational")


def format_rational(value: Fraction) -> str:
    return str(value)


def format_decimal(value: Fraction, digits: int = 6) -> str:
    """Fixed-point text with exactly ``digits`` decimals, rounding half away from zero.

    Done in integer arithmetic so the text never depends on float formatting.
    """
    scale = 10 ** digits
    scaled = abs(value) * scale
    units = int(scaled)
    if scaled - units >= Fraction(1, 2):
        units += 1
    sign = "-" if value < 0 and units else ""
    whole, frac = divmod(units, scale)
    return f"{sign}{whole}.{frac:0{digits}d}" if digits else f"{sign}{whole}"


def integer_cube_root(n: int) -> int:
    """Largest integer r with r**3 <= n, for n >= 0."""
    if n < 0:
        raise ValueError("negative argument")
    if n < 2:
        return n
    r = 1 << ((n.bit_length() + 2) // 3)
    while True:
        nxt = (2 * r + n // (r * r)) // 3
        if nxt >= r:
            break
        r = nxt
    while r ** 3 > n:
        r -= 1
    while (r + 1) ** 3 <= n:
        r += 1
    return r


def cube_root_lower(value: Fraction, bits: int) -> Fraction:
    """Dyadic lower bound on value**(1/3) with ``bits`` fractional bits (value >= 0)."""
    if value < 0:
        raise ValueError("negative argument")
    scaled = (value.numerator << (3 * bits)) // value.denominator
    return Fraction(integer_cube_root(scaled), 1 << bits)


def log2_lower(value: Fraction, bits: int) -> Fraction:
    """Dyadic lower bound on log2(value) with ``bits`` fractional bits (value >= 1).

    Bits come from repeated squaring of a fixed-point working value that is
    always floored, so the working value never exceeds the exact one and every
    emitted bit can only be too small, never too large.
    """
    if value < 1:
        raise ValueError("log2_lower needs value >= 1")
    exponent = int(value).bit_length() - 1
    guard = bits + 16
    one = 1 << guard
    # Fixed-point floor of value / 2**exponent, which lies in [1, 2).
    y = (value.numerator << guard) // (value.denominator << exponent)
    result = exponent << bits
    for k in range(bits - 1, -1, -1):
        y = (y * y) >> guard
        if y >= 2 * one:
            y >>= 1
            result |= 1 << k
    return Fraction(result, 1 << bits)


def _validate_rational(value: Any) -> Fraction:
    try:
        return to_rational(value)
    except TypeError as exc:
        raise ValueError(str(exc)) from exc


RationalField = Annotated[
    Fraction,
    BeforeValidator(_validate_rational),
    PlainSerializer(format_rational, return_type=str),
]
