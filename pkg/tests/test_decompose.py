# tests/test_decompose.py
import random
from fractions import Fraction
from itertools import product

import pytest

from semiinv.config import settings
from semiinv.decompose import (
    Representation,
    decompose,
    expand,
    membership_oracle,
    u_decompose,
    u_family,
)
from semiinv.exceptions import (
    MultiBlockUnsupported,
    NoSolution,
    NotDivisible,
    NotSemiInvariant,
    NotUInvariant,
    SlotOutOfRange,
)
from semiinv.forms import basis_for, mixed_pair, p_form
from semiinv.jordan import JordanSpec, Multiplier
from semiinv.polycore import Poly, a, multidegree_components
from semiinv.ubasis import u_poly

QUARTIC_NUMERATOR = {(0, 3, 0): 1, (1, 1, 1): -1, (0, 0, 2): 1}


def _product(family, index):
    result = Poly.const(1)
    for form, e in zip(family.forms, index):
        result = result * form.poly**e
    return result


def _family_degrees(family):
    return [next(iter(multidegree_components(f.poly, family.spec.k))) for f in family.forms]


def _indices_of_degree(family, target):
    degrees = _family_degrees(family)
    bounds = [min(t // x for t, x in zip(target, deg) if x) for deg in degrees]
    found = []
    for index in product(*(range(b + 1) for b in bounds)):
        total = tuple(
            sum(e * deg[j] for e, deg in zip(index, degrees)) for j in range(len(target))
        )
        if total == tuple(target):
            found.append(index)
    return found


def _random_numerator(rng, family, target, a0_positions):
    """Random combination of products; at least one term avoids every a0 form."""
    indices = _indices_of_degree(family, target)
    free = [i for i in indices if all(i[pos] == 0 for pos in a0_positions)]
    assert free
    chosen = rng.choice(free)
    numerator = {chosen: Fraction(rng.randint(1, 9), rng.randint(1, 3))}
    for index in indices:
        if index != chosen and rng.random() < 0.4:
            numerator[index] = numerator.get(index, Fraction(0)) + rng.randint(-5, 5)
    return {i: c for i, c in numerator.items() if c}


def _a0_positions(family):
    return [pos for pos, f in enumerate(family.forms) if f.lead_slot == 0 and not f.is_mixed]


def test_quartic_over_j4(quartic):
    rep = decompose(JordanSpec.single(4), quartic)
    assert rep.numerator == QUARTIC_NUMERATOR
    assert rep.denom_exps == (2,)
    assert rep.family.labels == ["p1", "p2", "p3"]
    assert expand(rep) == quartic


def test_quartic_times_a0(quartic):
    rep = decompose(JordanSpec.single(4), quartic * a(0))
    assert rep.numerator == QUARTIC_NUMERATOR
    assert rep.denom_exps == (1,)


def test_polynomial_in_the_basis():
    p2 = p_form(2).poly
    rep = decompose(JordanSpec.single(3), p2**2)
    assert rep.numerator == {(0, 2): 1}
    assert rep.denom_exps == (0,)
    assert rep.describe_term((0, 2)) == "p2^2"


def test_diagonal_matrix():
    spec = JordanSpec.parse("1:L1,1:L2")
    rep = decompose(spec, a(0, 1) * a(0, 2))
    assert rep.numerator == {(1, 1): 1}
    assert rep.denom_exps == (0, 0)


def test_two_blocks_with_denominator():
    spec = JordanSpec.parse("3:L1,2:L2")
    r = mixed_pair(1, 2)
    p2 = p_form(2, block=1).poly
    p = (r**2 + p2 * a(0, 2) ** 2).divide_monomial(a(0, 1).items()[0][0])
    assert p is not None
    rep = decompose(spec, p)
    assert rep.numerator == {(0, 0, 0, 2): 1, (0, 1, 2, 0): 1}
    assert rep.denom_exps == (1, 0)
    assert rep.satisfies_multipliers(Multiplier(exponents=(1, 2)))
    assert expand(rep) == p


def test_decompose_rejects_non_semi_invariants():
    with pytest.raises(NotSemiInvariant):
        decompose(JordanSpec.single(3), a(1))


def test_minimality_is_confirmed_by_the_oracle(quartic, monkeypatch):
    monkeypatch.setattr(settings, "verify_minimal_denominator", True)
    rep = decompose(JordanSpec.single(4), quartic)
    assert rep.denom_exps == (2,)


def test_membership_oracle(quartic):
    spec = JordanSpec.single(4)
    assert membership_oracle(spec, quartic, [2]) == QUARTIC_NUMERATOR
    with pytest.raises(NoSolution):
        membership_oracle(spec, quartic, [0])
    assert membership_oracle(JordanSpec.single(3), a(0) * p_form(2).poly, [0]) == {(1, 1): 1}
    with pytest.raises(ValueError):
        membership_oracle(spec, quartic, [1, 1])


def test_expand_checks_divisibility():
    family = basis_for(JordanSpec.single(3))
    rep = Representation(family, {(0, 1): Fraction(1)}, (1,))
    with pytest.raises(NotDivisible):
        expand(rep)


def _sweep(spec, base, base_rep, n_cases, degree_choices, rng):
    family = basis_for(spec)
    base_den = base_rep[1]
    a0_positions = [
        pos for pos in _a0_positions(family) if base_den[family.forms[pos].block - 1]
    ]
    for _ in range(n_cases):
        target = rng.choice(degree_choices)
        extra = _random_numerator(rng, family, target, a0_positions)
        factor = sum((_product(family, i) * c for i, c in extra.items()), Poly.zero())
        p = base * factor
        rep = decompose(spec, p)
        expected = {}
        for i, c in base_rep[0].items():
            for j, d in extra.items():
                key = tuple(x + y for x, y in zip(i, j))
                expected[key] = expected.get(key, Fraction(0)) + c * d
        expected = {k: v for k, v in expected.items() if v}
        assert rep.denom_exps == base_den
        assert rep.numerator == expected
        assert expand(rep) == p


@pytest.mark.slow
def test_round_trip_single_block_j5(quartic):
    rng = random.Random(5)
    numerator = {(0, 3, 0, 0): 1, (1, 1, 1, 0): -1, (0, 0, 2, 0): 1}
    _sweep(JordanSpec.single(5), quartic, (numerator, (2,)), 17, [(2,), (3,)], rng)


@pytest.mark.slow
def test_round_trip_single_block_j6(quartic):
    rng = random.Random(6)
    numerator = {(0, 3, 0, 0, 0): 1, (1, 1, 1, 0, 0): -1, (0, 0, 2, 0, 0): 1}
    _sweep(JordanSpec.single(6), quartic, (numerator, (2,)), 17, [(2,), (3,)], rng)


@pytest.mark.slow
def test_round_trip_two_blocks():
    rng = random.Random(32)
    spec = JordanSpec.parse("3:L1,2:L2")
    r = mixed_pair(1, 2)
    p2 = p_form(2, block=1).poly
    base = (r**2 + p2 * a(0, 2) ** 2).divide_monomial(a(0, 1).items()[0][0])
    numerator = {(0, 0, 0, 2): 1, (0, 1, 2, 0): 1}
    _sweep(spec, base, (numerator, (1, 0)), 17, [(1, 1), (2, 0), (0, 2), (2, 1)], rng)


def test_polynomial_numerators_have_no_denominator(rng):
    spec = JordanSpec.single(5)
    family = basis_for(spec)
    for _ in range(10):
        numerator = _random_numerator(rng, family, (3,), _a0_positions(family))
        p = sum((_product(family, i) * c for i, c in numerator.items()), Poly.zero())
        rep = decompose(spec, p)
        assert rep.denom_exps == (0,)
        assert rep.numerator == numerator


def test_u_family():
    family = u_family(3)
    assert family.labels == ["q1", "q2", "q3"]
    assert family.polys[0] == a(0)


def test_u_decompose(quartic_top):
    rep = u_decompose(a(0) ** 3, 2)
    assert rep.numerator == {(3, 0): 1}
    q2 = a(1) ** 2 - a(0) * a(2) * 2
    rep = u_decompose(q2**2, 2)
    assert rep.numerator == {(0, 2): 1}
    assert rep.denom_exps == (0,)
    for n in (3, 4):
        rep = u_decompose(quartic_top, n)
        assert expand(rep) == quartic_top
    u = u_poly((0, 0, 2, 0))
    assert expand(u_decompose(u, u.max_slot())) == u


def test_u_decompose_rejects():
    with pytest.raises(NotUInvariant):
        u_decompose(a(1), 2)
    with pytest.raises(SlotOutOfRange):
        u_decompose(a(0) * a(4), 2)
    with pytest.raises(MultiBlockUnsupported):
        u_decompose(a(0, 2), 2)
