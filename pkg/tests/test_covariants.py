# tests/test_covariants.py
import pytest

from semiinv.covariants import (
    Covariant,
    check_covariant,
    covariant_from_source,
    is_invariant_form,
)
from semiinv.exceptions import (
    MultiBlockUnsupported,
    NegativeOrder,
    NotHomogeneous,
    NotUInvariant,
    SlotOutOfRange,
)
from semiinv.polycore import a
from semiinv.ubasis import u_invariant_basis, u_poly


def test_quadratic_invariant_has_order_zero():
    q2 = a(1) ** 2 - a(0) * a(2) * 2
    c = covariant_from_source(q2, 2)
    assert c.m == 0
    assert c.coeffs == (q2,)
    assert check_covariant(c).passed
    assert is_invariant_form(q2, 2)


def test_binary_form_itself():
    n = 3
    c = covariant_from_source(a(0), n)
    assert c.m == 3
    assert c.coeffs == (a(0), a(1) * 3, a(2) * 6, a(3) * 6)
    assert check_covariant(c).passed
    assert c.term_label(0) == "X1^3"
    assert c.term_label(1) == "X1^2*X2"
    assert c.term_label(3) == "X2^3"


def test_cubic_source():
    source = u_poly((0, 0, 1))
    c = covariant_from_source(source, 3)
    assert c.m == 3
    assert c.source == source
    assert check_covariant(c).passed


@pytest.mark.slow
def test_sources_of_admissible_weight_give_covariants():
    checked = 0
    for n in range(1, 5):
        for d in range(1, 5):
            for g in range(0, 7):
                if n * d - 2 * g < 0:
                    continue
                for _, source in u_invariant_basis(d, g):
                    if source.max_slot() > n:
                        continue
                    report = check_covariant(covariant_from_source(source, n))
                    assert report.passed, (n, d, g, report.violations)
                    checked += 1
    assert checked > 10


def test_mutated_coefficient_is_caught():
    c = covariant_from_source(a(0), 3)
    coeffs = list(c.coeffs)
    coeffs[2] = coeffs[2] + a(0) * a(2)
    broken = Covariant(c.n, c.m, tuple(coeffs))
    report = check_covariant(broken)
    assert not report.passed
    assert {v.condition for v in report.violations} >= {"degree", "D"}


def test_wrong_order_is_caught():
    c = covariant_from_source(a(0), 2)
    report = check_covariant(Covariant(c.n, c.m + 1, c.coeffs))
    assert [v.condition for v in report.violations] == ["order"]


def test_source_checks():
    with pytest.raises(NotUInvariant):
        covariant_from_source(a(1), 2)
    with pytest.raises(NegativeOrder):
        covariant_from_source(u_poly((0, 2)), 1)
    with pytest.raises(SlotOutOfRange):
        covariant_from_source(u_poly((0, 0, 1)), 2)
    with pytest.raises(NotHomogeneous):
        covariant_from_source(a(0) * 0, 2)
    with pytest.raises(MultiBlockUnsupported):
        covariant_from_source(a(0, 2), 2)


def test_invariant_form_predicate():
    assert not is_invariant_form(a(0) * a(2), 2)
    assert not is_invariant_form(a(1) ** 2 - a(0) * a(2) * 2, 1)
    assert not is_invariant_form(a(0) * 0, 2)
    assert not is_invariant_form(a(0), 1)
