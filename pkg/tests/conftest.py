import random
from fractions import Fraction

import pytest

from omegacalc.omega import OmegaNumber


def random_omega(
    rng: random.Random,
    min_exp: int = -3,
    max_exp: int = 5,
    nonzero: bool = False,
) -> OmegaNumber:
    """Random exact value with small rational coefficients."""
    terms = {}
    for e in range(min_exp, max_exp + 1):
        if rng.random() < 0.45:
            num = rng.randint(-10, 10)
            den = rng.randint(1, 6)
            if num:
                terms[e] = Fraction(num, den)
    x = OmegaNumber.from_terms(terms)
    if nonzero and x.is_zero():
        return OmegaNumber.from_terms({rng.randint(min_exp, max_exp): rng.randint(1, 9)})
    return x


@pytest.fixture
def rng() -> random.Random:
    return random.Random(0xC0FFEE)
