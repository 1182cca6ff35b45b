# tests/conftest.py
import random
from fractions import Fraction
from typing import Callable, Dict, Optional

import pytest

from semiinv.polycore import Monomial, Poly, Var, parse_poly
from semiinv.ubasis import partitions

# A degree-4 semi-invariant of J_4 equal to (p2^3 - p1*p2*p3 + p3^2) / a0^2.
QUARTIC_TEXT = (
    "-3*a2^2*a1^2 + 6*a3*a1^3 + 8*a2^3*a0 - 18*a3*a2*a1*a0 + 9*a3^2*a0^2"
    " + 3*a2*a1^3 - 6*a2^2*a1*a0 - 9*a3*a1^2*a0 + 18*a3*a2*a0^2"
    " - 5*a2*a1^2*a0 + 8*a2^2*a0^2 + 3*a3*a1*a0^2 + 2*a2*a1*a0^2"
)


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20240917)


@pytest.fixture
def quartic() -> Poly:
    return parse_poly(QUARTIC_TEXT)


@pytest.fixture
def quartic_top(quartic: Poly) -> Poly:
    """The weight-6 part of the quartic: a U-invariant."""
    return quartic.filter_terms(lambda m: m.weight == 6)


def _random_coeff(rng: random.Random) -> Fraction:
    num = 0
    while num == 0:
        num = rng.randint(-9, 9)
    return Fraction(num, rng.randint(1, 4))


@pytest.fixture
def random_poly(rng: random.Random) -> Callable[..., Poly]:
    """Factory for small random single-block polynomials."""

    def make(
        max_slot: int = 4,
        max_degree: int = 3,
        n_terms: int = 5,
        degree: Optional[int] = None,
        block: int = 1,
    ) -> Poly:
        terms: Dict[Monomial, Fraction] = {}
        for _ in range(n_terms):
            d = degree if degree is not None else rng.randint(0, max_degree)
            exps: Dict[Var, int] = {}
            for _ in range(d):
                var = Var(block, rng.randint(0, max_slot))
                exps[var] = exps.get(var, 0) + 1
            mono = Monomial.from_dict(exps)
            terms[mono] = terms.get(mono, Fraction(0)) + _random_coeff(rng)
        return Poly(terms)

    return make


@pytest.fixture
def random_isobaric(rng: random.Random) -> Callable[[int, int, int], Poly]:
    """Factory for random homogeneous isobaric polynomials with slots <= max_slot."""

    def make(d: int, g: int, max_slot: int) -> Poly:
        shapes = [h for h in partitions(g, d) if h[0] <= max_slot]
        if not shapes:
            return Poly.zero()
        terms: Dict[Monomial, Fraction] = {}
        for h in shapes:
            if rng.random() < 0.3:
                continue
            exps: Dict[Var, int] = {}
            for slot in h:
                exps[Var(1, slot)] = exps.get(Var(1, slot), 0) + 1
            terms[Monomial.from_dict(exps)] = _random_coeff(rng)
        if not terms:
            h = shapes[0]
            exps = {}
            for slot in h:
                exps[Var(1, slot)] = exps.get(Var(1, slot), 0) + 1
            terms[Monomial.from_dict(exps)] = Fraction(1)
        return Poly(terms)

    return make
