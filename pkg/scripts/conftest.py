import random
from fractions import Fraction

import pytest

from core.config import get_settings
from models.distribution_model import Distribution
from models.move_model import ExtremeMove, Move


@pytest.fixture(autouse=True)
def fresh_settings():
    """Settings are cached; tests that patch the environment need a fresh copy."""
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.fixture
def rng():
    return random.Random(20240607)


def _rational(rng: random.Random, lo: int, hi: int, den: int = 8) -> Fraction:
    return Fraction(rng.randint(lo * den, hi * den), den)


@pytest.fixture
def random_distribution(rng):
    """Factory: k random points on [-span, span] with masses in (0, 2]."""

    def make(k: int = None, span: int = 3) -> Distribution:
        k = k or rng.randint(1, 5)
        pairs = [(_rational(rng, -span, span), Fraction(rng.randint(1, 16), 8)) for _ in range(k)]
        return Distribution.of(pairs)

    return make


@pytest.fixture
def random_move(rng):
    """Factory: a unit move applicable to mu that splits part of one point's mass.

    A point x strictly inside [a, a+1] gives up a fraction q of its mass to
    a <= u < x < v <= a+1, keeping the torque.
    """

    def make(mu: Distribution) -> Move:
        x, m = rng.choice(mu.points)
        a = x - Fraction(rng.randint(1, 7), 8)
        b = a + 1
        q = m * Fraction(rng.randint(1, 4), 4)
        u = x - (x - a) * Fraction(rng.randint(1, 4), 4)
        v = x + (b - x) * Fraction(rng.randint(1, 4), 4)
        # q units at x become w_u at u and w_v at v with w_u + w_v = q and w_u u + w_v v = q x.
        w_v = q * (x - u) / (v - u)
        w_u = q - w_v
        return Move.on(a, [(x, -q), (u, w_u), (v, w_v)])

    return make


@pytest.fixture
def random_sequence(random_move):
    """Factory: (final mu, moves) for ``length`` random moves applied from mu."""
    from services.massmove_service import apply_move

    def make(mu: Distribution, length: int = 3):
        moves = []
        current = mu
        for _ in range(length):
            move = random_move(current)
            moves.append(move)
            current = apply_move(current, move)
        return current, moves

    return make


@pytest.fixture
def random_extreme(rng):
    def make() -> ExtremeMove:
        return ExtremeMove.unit(_rational(rng, -3, 2))

    return make
