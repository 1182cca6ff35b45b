"""
Differential operators on single-block polynomials.

D lowers weight (a_i -> a_{i-1}), L and Delta_n raise it, W multiplies each
isobaric component by its weight and ExpD is the finite sum of D-iterates
divided by factorials. Two right inverses of D are provided: one through the
U basis (exact shift of the first index) and one through the Stirling-number
operator series, rescaled per homogeneous degree.

Commutator facts the tests rely on:

- (DL - LD) a_i = a_i on generators, and (DL - LD) p = d * p on a homogeneous
  p of degree d. The commutator is the Euler operator, not the identity.
- (D Delta_n - Delta_n D) A = (n d - 2 g) A for A homogeneous of degree d,
  isobaric of weight g, with all slots at most n.
"""

import logging
import threading
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from math import factorial
from typing import Callable, Dict, List, Optional

from .exceptions import (
    InverseFailed,
    MultiBlockUnsupported,
    NilpotencyViolated,
    NotHomogeneous,
    NotIsobaric,
    SlotOutOfRange,
)
from .polycore import Monomial, Poly, Var, grade

logger = logging.getLogger(__name__)


class OperatorKind(Enum):
    """Operators understood by :func:`apply`."""

    D = "D"
    L = "L"
    W = "W"
    DELTA = "Delta"
    EXP_D = "expD"


@dataclass(frozen=True)
class Operator:
    """An operator kind together with its parameter (only Delta uses ``n``)."""

    kind: OperatorKind
    n: Optional[int] = None

    def __post_init__(self) -> None:
        if self.kind is OperatorKind.DELTA:
            if self.n is None or self.n < 0:
                raise ValueError("Delta needs a non-negative parameter n")

    def __str__(self) -> str:
        if self.kind is OperatorKind.DELTA:
            return f"Delta({self.n})"
        return self.kind.value


D = Operator(OperatorKind.D)
L = Operator(OperatorKind.L)
W = Operator(OperatorKind.W)
EXP_D = Operator(OperatorKind.EXP_D)


def delta(n: int) -> Operator:
    return Operator(OperatorKind.DELTA, n)


def derive(p: Poly, rule: Callable[[Var], Poly]) -> Poly:
    """Apply the derivation whose value on each generator is ``rule(var)``."""
    total: Dict[Monomial, Fraction] = {}
    images: Dict[Var, Poly] = {}
    for mono, coeff in p.terms.items():
        for var, exp in mono.exps:
            if var not in images:
                images[var] = rule(var)
            image = images[var]
            if image.is_zero():
                continue
            lowered = mono.divide(Monomial.of(var))
            assert lowered is not None
            factor = coeff * exp
            for m2, c2 in image.terms.items():
                key = lowered * m2
                total[key] = total.get(key, Fraction(0)) + factor * c2
    return Poly(total)


def _lower(var: Var) -> Poly:
    if var.slot == 0:
        return Poly.zero()
    return Poly.var(var.slot - 1, var.block)


def _raise(var: Var) -> Poly:
    return Poly.var(var.slot + 1, var.block) * (var.slot + 1)


def _delta_rule(n: int) -> Callable[[Var], Poly]:
    def rule(var: Var) -> Poly:
        i = var.slot
        if i >= n:
            return Poly.zero()
        return Poly.var(i + 1, var.block) * ((n - i) * (i + 1))

    return rule


def _require_single_block(p: Poly, op: Operator) -> None:
    foreign = sorted(v for v in p.variables() if v.block != 1)
    if foreign:
        raise MultiBlockUnsupported(
            f"{op} acts on single-block polynomials only",
            witness={"variable": str(foreign[0]), "block": str(foreign[0].block)},
        )


def apply(op: Operator, p: Poly) -> Poly:
    """Apply ``op`` to a single-block polynomial."""
    _require_single_block(p, op)
    kind = op.kind
    if kind is OperatorKind.D:
        return derive(p, _lower)
    if kind is OperatorKind.L:
        return derive(p, _raise)
    if kind is OperatorKind.W:
        return p.map_terms(lambda mono, coeff: coeff * mono.weight)
    if kind is OperatorKind.DELTA:
        assert op.n is not None
        top = p.max_slot()
        if top > op.n:
            raise SlotOutOfRange(
                f"Delta({op.n}) needs slots <= {op.n}",
                witness={"max_slot": str(top), "n": str(op.n)},
            )
        return derive(p, _delta_rule(op.n))
    if kind is OperatorKind.EXP_D:
        return exp_d(p)
    raise ValueError(f"unsupported operator {op}")


def iterate(op: Operator, p: Poly, k: int) -> Poly:
    """``op`` applied ``k`` times."""
    for _ in range(k):
        if p.is_zero():
            break
        p = apply(op, p)
    return p


def exp_d(p: Poly) -> Poly:
    """Sum of D^k p / k! until the iterates vanish."""
    total = p
    term = p
    k = 0
    while True:
        k += 1
        term = apply(D, term)
        if term.is_zero():
            break
        total = total + term * Fraction(1, factorial(k))
    return total


def commutator(first: Operator, second: Operator, p: Poly) -> Poly:
    """(first second - second first) p."""
    return apply(first, apply(second, p)) - apply(second, apply(first, p))


class StirlingTables:
    """
    Unsigned Stirling numbers of the first kind [n, k] and Stirling numbers of
    the second kind S2(n, k), grown on demand.

    Rows are only ever appended, under a lock; readers of existing rows never
    observe a partially built table.
    """

    def __init__(self) -> None:
        self._first: List[List[int]] = [[1]]
        self._second: List[List[int]] = [[1]]
        self._lock = threading.Lock()

    def _grow(self, n: int) -> None:
        if n < len(self._first):
            return
        with self._lock:
            while len(self._first) <= n:
                r = len(self._first)
                prev_first = self._first[r - 1]
                prev_second = self._second[r - 1]
                first_row = [0] * (r + 1)
                second_row = [0] * (r + 1)
                for k in range(1, r + 1):
                    up = prev_first[k] if k < r else 0
                    first_row[k] = (r - 1) * up + prev_first[k - 1]
                    up2 = prev_second[k] if k < r else 0
                    second_row[k] = k * up2 + prev_second[k - 1]
                self._first.append(first_row)
                self._second.append(second_row)

    def first(self, n: int, k: int) -> int:
        if n < 0 or k < 0 or k > n:
            return 0
        self._grow(n)
        return self._first[n][k]

    def second(self, n: int, k: int) -> int:
        if n < 0 or k < 0 or k > n:
            return 0
        self._grow(n)
        return self._second[n][k]


stirling_tables = StirlingTables()


def _check_homogeneous_isobaric(p: Poly, d: Optional[int] = None) -> None:
    report = grade(p)
    if not report.is_homogeneous or (d is not None and report.degree != d):
        raise NotHomogeneous(
            "expected a homogeneous polynomial"
            + (f" of degree {d}" if d is not None else ""),
            witness={"degrees": ",".join(map(str, report.degrees))},
        )
    if not report.is_isobaric:
        raise NotIsobaric(
            "expected an isobaric polynomial",
            witness={"weights": ",".join(map(str, report.weights))},
        )


def _confirm_inverse(p: Poly, q: Poly, method: str) -> Poly:
    image = apply(D, q)
    if image != p:
        raise InverseFailed(
            f"{method}: D applied to the candidate does not return the input",
            witness={"input": str(p), "candidate": str(q), "image": str(image)},
        )
    return q


def d_inverse_ubasis(p: Poly, d: int) -> Poly:
    """
    Right inverse of D that maps U_{k1,...,kd} to U_{k1+1,...,kd}.

    Args:
        p: Homogeneous isobaric single-block polynomial of degree ``d``.
        d: The degree of ``p``.

    Returns:
        q with D q = p.
    """
    from .ubasis import express_in_u, u_poly

    if p.is_zero():
        return p
    _require_single_block(p, D)
    _check_homogeneous_isobaric(p, d)
    q = Poly.zero()
    for idx, coeff in express_in_u(p).items():
        shifted = (idx[0] + 1,) + tuple(idx[1:])
        q = q + u_poly(shifted) * coeff
    return _confirm_inverse(p, q, "d_inverse_ubasis")


def stirling_series(p: Poly, m: int, degree: int) -> Poly:
    """
    (1/m!) sum_{i=1..m} (-1)^(i+1) [m+1, i+1] degree^(-i) (LD)^(i-1) L p.

    With ``degree`` equal to the degree of a homogeneous ``p`` this is a right
    inverse of D on the kernel of D^m. With ``degree`` = 1 it is the unscaled
    series, which is a right inverse only on linear forms.
    """
    total = Poly.zero()
    term = apply(L, p)
    for i in range(1, m + 1):
        coeff = Fraction(
            (-1) ** (i + 1) * stirling_tables.first(m + 1, i + 1),
            degree**i,
        )
        total = total + term * coeff
        if i < m:
            term = apply(L, apply(D, term))
    return total * Fraction(1, factorial(m))


def d_inverse_stirling(p: Poly, m: int) -> Poly:
    """
    Right inverse of D built from Stirling numbers of the first kind.

    The series is evaluated separately on every homogeneous degree component
    with L replaced by L/d; the result is confirmed against D before it is
    returned.

    Raises:
        NilpotencyViolated: D^m p is not zero.
        InverseFailed: p has a nonzero constant part, or the confirmation fails.
    """
    if p.is_zero():
        return p
    _require_single_block(p, D)
    residue = iterate(D, p, max(m, 0))
    if m < 1 or not residue.is_zero():
        raise NilpotencyViolated(
            f"D^{m} does not annihilate the input",
            witness={"m": str(m), "residue": str(residue)},
        )
    q = Poly.zero()
    for d in sorted(p.degrees()):
        part = p.filter_terms(lambda mono, d=d: mono.degree == d)
        if d == 0:
            raise InverseFailed(
                "constants are not in the image of D",
                witness={"constant": str(part)},
            )
        q = q + stirling_series(part, m, d)
    logger.debug(f"Stirling inverse of order {m} on degrees {sorted(p.degrees())}")
    return _confirm_inverse(p, q, "d_inverse_stirling")
