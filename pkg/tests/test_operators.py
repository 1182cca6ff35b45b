# tests/test_operators.py
from fractions import Fraction
from math import factorial

import pytest
from sympy.functions.combinatorial.numbers import stirling

from semiinv.exceptions import (
    InverseFailed,
    MultiBlockUnsupported,
    NilpotencyViolated,
    NotHomogeneous,
    NotIsobaric,
    SlotOutOfRange,
)
from semiinv.jordan import JordanSpec, unipotent_action
from semiinv.operators import (
    D,
    EXP_D,
    L,
    W,
    Operator,
    OperatorKind,
    apply,
    commutator,
    d_inverse_stirling,
    d_inverse_ubasis,
    delta,
    iterate,
    stirling_series,
    stirling_tables,
)
from semiinv.polycore import LinearMap, Poly, Var, a, substitute_linear

SAMPLES = 100


def _isobaric_samples(rng, random_isobaric, max_slot, max_weight=None, count=SAMPLES):
    """Nonzero random homogeneous isobaric polynomials of degree 1..3 with their grading."""
    samples = []
    while len(samples) < count:
        d = rng.randint(1, 3)
        top = max_slot * d if max_weight is None else max_weight
        g = rng.randint(0, top)
        p = random_isobaric(d, g, max_slot)
        if not p.is_zero():
            samples.append((d, g, p))
    return samples


def test_generators():
    assert apply(D, a(3)) == a(2)
    assert apply(D, a(0)) == 0
    assert apply(L, a(2)) == a(3) * 3
    assert apply(delta(4), a(1)) == a(2) * 6
    assert apply(delta(4), a(4)) == 0
    assert str(delta(4)) == "Delta(4)"
    assert str(EXP_D) == "expD"


def test_documented_values():
    p2 = a(1) ** 2 * -1 + a(0) * a(2) * 2 + a(0) * a(1)
    assert apply(D, p2) == a(0) ** 2
    p3 = (
        -a(1) ** 3
        + a(2) * a(1) * a(0) * 3
        - a(3) * a(0) ** 2 * 3
        - a(2) * a(0) ** 2 * 2
        + a(1) ** 2 * a(0)
    )
    assert apply(D, p3) == 0
    assert apply(W, a(2) * a(0) + a(1)) == a(2) * a(0) * 2 + a(1)
    assert apply(L, a(0) ** 2) == a(1) * a(0) * 2


def test_delta_needs_parameter():
    with pytest.raises(ValueError):
        Operator(OperatorKind.DELTA)
    with pytest.raises(SlotOutOfRange):
        apply(delta(2), a(3))


def test_multi_block_rejected():
    with pytest.raises(MultiBlockUnsupported) as exc_info:
        apply(D, a(1, 2))
    assert exc_info.value.witness["variable"] == "a1_2"


def test_d_is_a_derivation(random_poly):
    for _ in range(SAMPLES):
        p, q = random_poly(), random_poly()
        assert apply(D, p * q) == apply(D, p) * q + p * apply(D, q)


def test_d_is_nilpotent(random_poly):
    for _ in range(SAMPLES):
        p = random_poly()
        assert iterate(D, p, p.top_weight() + 1) == 0


def test_generator_commutator():
    for i in range(6):
        assert commutator(D, L, a(i)) == a(i)


def test_commutator_is_euler_operator(random_poly):
    for _ in range(SAMPLES):
        p = random_poly(degree=3)
        assert commutator(D, L, p) == p * 3
    assert commutator(D, L, a(0) ** 2) == a(0) ** 2 * 2


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_d_delta_commutator(rng, random_isobaric, n):
    for d, g, A in _isobaric_samples(rng, random_isobaric, n):
        assert commutator(D, delta(n), A) == A * (n * d - 2 * g)


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_d_power_delta_commutator(rng, random_isobaric, k):
    n = 4
    for d, g, A in _isobaric_samples(rng, random_isobaric, n):
        lhs = iterate(D, apply(delta(n), A), k) - apply(delta(n), iterate(D, A, k))
        assert lhs == iterate(D, A, k - 1) * (k * (n * d - 2 * g + k - 1))


def test_exp_d_matches_substitution(random_poly):
    exp_map = LinearMap.from_pairs(
        {
            Var(1, s): [(Var(1, t), Fraction(1, factorial(s - t))) for t in range(s + 1)]
            for s in range(5)
        }
    )
    for _ in range(SAMPLES):
        p = random_poly()
        assert apply(EXP_D, p) == substitute_linear(p, exp_map)


def test_exp_d_fixes_exactly_the_kernel():
    q2 = a(1) ** 2 - a(0) * a(2) * 2
    assert apply(D, q2) == 0
    assert apply(EXP_D, q2) == q2
    assert apply(EXP_D, a(1)) == a(1) + a(0)


def test_d_commutes_with_unipotent_action(random_poly):
    spec = JordanSpec.single(5)
    for _ in range(SAMPLES):
        p = random_poly(max_slot=4)
        assert apply(D, unipotent_action(spec, p)) == unipotent_action(spec, apply(D, p))


def test_stirling_tables_match_sympy():
    for n in range(0, 12):
        for k in range(0, n + 1):
            assert stirling_tables.first(n, k) == int(stirling(n, k, kind=1))
            assert stirling_tables.second(n, k) == int(stirling(n, k, kind=2))
    assert stirling_tables.first(3, 5) == 0


def test_d_inverse_ubasis_examples():
    assert d_inverse_ubasis(a(0) * a(1), 2) == a(0) * a(2)
    assert d_inverse_ubasis(a(0) ** 2, 2) == a(0) * a(1)
    q2 = a(1) ** 2 - a(0) * a(2) * 2
    assert apply(D, d_inverse_ubasis(q2, 2)) == q2
    assert d_inverse_ubasis(Poly.zero(), 3) == 0


def test_d_inverse_ubasis_random(rng, random_isobaric):
    for d, g, p in _isobaric_samples(rng, random_isobaric, 6, max_weight=6):
        assert apply(D, d_inverse_ubasis(p, d)) == p


def test_d_inverse_ubasis_rejects_inhomogeneous_input():
    with pytest.raises(NotHomogeneous):
        d_inverse_ubasis(a(0) + a(0) * a(1), 2)
    with pytest.raises(NotHomogeneous):
        d_inverse_ubasis(a(0) * a(1), 3)
    with pytest.raises(NotIsobaric):
        d_inverse_ubasis(a(0) * a(1) + a(0) ** 2, 2)


def test_d_inverse_stirling_examples():
    assert d_inverse_stirling(a(0), 1) == a(1)
    assert d_inverse_stirling(Poly.zero(), 1) == 0
    assert d_inverse_stirling(a(0) ** 2, 1) == a(0) * a(1)
    assert d_inverse_stirling(a(0) * a(1), 2) == (a(1) ** 2 + a(0) * a(2) * 2) * Fraction(1, 4)


def test_d_inverse_stirling_random(rng, random_isobaric, random_poly):
    for d, g, p in _isobaric_samples(rng, random_isobaric, 5, max_weight=5):
        assert apply(D, d_inverse_stirling(p, g + 1)) == p
    for _ in range(SAMPLES):
        p = random_poly(degree=2)
        if p.is_zero():
            continue
        assert apply(D, d_inverse_stirling(p, p.top_weight() + 1)) == p


def test_d_inverse_stirling_failures():
    with pytest.raises(NilpotencyViolated):
        d_inverse_stirling(a(1), 1)
    with pytest.raises(NilpotencyViolated):
        d_inverse_stirling(a(0), 0)
    with pytest.raises(InverseFailed):
        d_inverse_stirling(a(0) + 1, 1)


def test_unscaled_series_fails_beyond_linear_forms():
    assert stirling_series(a(0), 1, 1) == a(1)
    unscaled = stirling_series(a(0) ** 2, 1, 1)
    assert unscaled == a(0) * a(1) * 2
    assert apply(D, unscaled) == a(0) ** 2 * 2
