import random

import pytest
from gkmcobordism.coeff_series import QQ

from gkmcobordism.coeff_series import LazardCoefficient, TruncatedSeries
from gkmcobordism.torus_ring import Character


def random_coefficient(rng, max_gen=3, max_exp=2):
    """A small random polynomial in the m-generators."""
    terms = {}
    for _ in range(rng.randint(0, 2)):
        mono = tuple(
            sorted(
                (k, rng.randint(1, max_exp))
                for k in rng.sample(range(1, max_gen + 1), rng.randint(1, 2))
            )
        )
        q = QQ(rng.randint(-4, 4), rng.randint(1, 3))
        if q:
            terms[mono] = q
    base = LazardCoefficient(terms)
    return base + LazardCoefficient.rational(QQ(rng.randint(-4, 4), rng.randint(1, 3)))


def random_series(rng, rank, order, terms=4, min_degree=0, rational_only=False):
    out = TruncatedSeries.zero(rank, order)
    for _ in range(terms):
        exps = [0] * rank
        total = rng.randint(min_degree, order)
        for _ in range(total):
            exps[rng.randrange(rank)] += 1
        coeff = (
            LazardCoefficient.rational(QQ(rng.randint(-4, 4), rng.randint(1, 3)))
            if rational_only
            else random_coefficient(rng)
        )
        out = out + TruncatedSeries.monomial(tuple(exps), coeff, rank, order)
    return out


def random_character(rng, rank, max_denominator=2):
    while True:
        coords = tuple(
            QQ(rng.randint(-3, 3), rng.choice([1, max_denominator])) for _ in range(rank)
        )
        ch = Character(coords)
        if not ch.is_zero():
            return ch


@pytest.fixture
def rng():
    return random.Random(20240811)
