"""
J-completions of U-invariants.

A J-completion of a U-invariant q0 of weight w adds terms of weight < w so
that the result is invariant under a_s -> a_s + a_{s-1}. Three methods:

- ``stroh``: explicit signed sum of U_{i,l} below U_{0,k}
- ``iterate``: subtract D^{-1} of the lowest non-vanishing defect, weight by
  weight, using the U-basis right inverse
- ``subst``: substitute a -> S a with S the Stirling change of basis that
  conjugates the unipotent Jordan block to exp of its nilpotent part

Completions are not unique; methods may disagree below the top weight.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import comb, factorial, prod
from typing import Optional, Sequence, Tuple

import sympy

from .exceptions import (
    MultiBlockUnsupported,
    NotHomogeneous,
    NotIsobaric,
    NotUInvariant,
    SlotOutOfRange,
)
from .jordan import JordanSpec, unipotent_action
from .operators import D, apply, d_inverse_ubasis, stirling_tables
from .polycore import LinearMap, Poly, Var, grade, substitute_linear, weight_component
from .ubasis import UIndex, express_in_u, u_poly

logger = logging.getLogger(__name__)


class CompletionMethod(Enum):
    STROH = "stroh"
    ITERATE = "iterate"
    SUBST = "subst"


def _require_u_invariant(q0: Poly) -> Tuple[int, int]:
    foreign = sorted(v for v in q0.variables() if v.block != 1)
    if foreign:
        raise MultiBlockUnsupported(
            "completions are single-block", witness={"variable": str(foreign[0])}
        )
    report = grade(q0)
    if not report.is_homogeneous:
        raise NotHomogeneous(
            "the polynomial to complete must be homogeneous",
            witness={"degrees": ",".join(map(str, report.degrees))},
        )
    if not report.is_isobaric:
        raise NotIsobaric(
            "the polynomial to complete must be isobaric",
            witness={"weights": ",".join(map(str, report.weights))},
        )
    image = apply(D, q0)
    if not image.is_zero():
        raise NotUInvariant(
            "D does not annihilate the polynomial", witness={"D(p)": str(image)}
        )
    return report.degree or 0, report.weight or 0


def shift_action(p: Poly) -> Poly:
    """p(Ja) for a single Jordan block large enough to hold every slot of p."""
    if p.max_slot() < 0:
        return p
    return unipotent_action(JordanSpec.single(p.max_slot() + 1), p)


def is_j_invariant(p: Poly) -> bool:
    return shift_action(p) == p


def complete_stroh(idx: Sequence[int]) -> Poly:
    """
    U_{0,k_2..k_d} + sum_{i=1..K} sum_l (-1)^i i! / prod (k_j - l_j)! U_{i,l},
    with K = k_2 + ... + k_d and l running over 0 <= l_j <= k_j, sum l = K - i.
    """
    idx = tuple(idx)
    if not idx or idx[0] != 0:
        raise NotUInvariant(
            "only indices with k1 = 0 are U-invariant",
            witness={"index": ",".join(map(str, idx))},
        )
    tail = idx[1:]
    total = sum(tail)
    result = u_poly(idx)
    for l in product(*(range(k + 1) for k in tail)):
        i = total - sum(l)
        if i < 1:
            continue
        coeff = Fraction(
            (-1) ** i * factorial(i), prod(factorial(k - x) for k, x in zip(tail, l))
        )
        result = result + u_poly((i,) + tuple(l)) * coeff
    return result


def complete_stroh_poly(q0: Poly) -> Poly:
    """Complete an arbitrary U-invariant through its U-basis expansion."""
    if q0.is_zero():
        return q0
    _require_u_invariant(q0)
    result = Poly.zero()
    for idx, coeff in express_in_u(q0).items():
        result = result + complete_stroh(idx) * coeff
    return result


def complete_iterative(q0: Poly) -> Poly:
    """
    q_i = q_{i-1} - D^{-1}([q_{i-1}(Ja) - q_{i-1}(a)]_{w-1-i}) for i = 1..w-1.
    """
    if q0.is_zero():
        return q0
    d, w = _require_u_invariant(q0)
    q = q0
    for i in range(1, w):
        defect = weight_component(shift_action(q) - q, w - 1 - i)
        if defect.is_zero():
            continue
        q = q - d_inverse_ubasis(defect, d)
        logger.debug(f"iterative completion: weight {w - 1 - i} defect removed")
    return q


@dataclass(frozen=True)
class SMatrix:
    """Lower unitriangular change of basis; row s is the image of a_s."""

    n: int
    entries: Tuple[Tuple[Fraction, ...], ...]

    def __getitem__(self, pos: Tuple[int, int]) -> Fraction:
        return self.entries[pos[0]][pos[1]]

    def as_linear_map(self, block: int = 1) -> LinearMap:
        """a_s -> sum_t S[s][t] a_t."""
        return LinearMap.from_pairs(
            {
                Var(block, s): [(Var(block, t), self.entries[s][t]) for t in range(s + 1)]
                for s in range(self.n)
            }
        )

    def to_sympy(self) -> sympy.Matrix:
        return sympy.Matrix(
            self.n,
            self.n,
            lambda s, t: sympy.Rational(
                self.entries[s][t].numerator, self.entries[s][t].denominator
            ),
        )


def stirling_S_second_kind(n: int) -> Tuple[Tuple[Fraction, ...], ...]:
    """S[s][t] = t!/s! S2(s, t)."""
    return tuple(
        tuple(
            Fraction(factorial(t) * stirling_tables.second(s, t), factorial(s))
            for t in range(n)
        )
        for s in range(n)
    )


def stirling_S_inclusion_exclusion(n: int) -> Tuple[Tuple[Fraction, ...], ...]:
    """S[s][t] = (1/s!) sum_{k=0..t} (-1)^k C(t, k) (t - k)^s."""
    return tuple(
        tuple(
            Fraction(
                sum((-1) ** k * comb(t, k) * (t - k) ** s for k in range(t + 1)),
                factorial(s),
            )
            for t in range(n)
        )
        for s in range(n)
    )


@lru_cache(maxsize=None)
def stirling_S(n: int) -> SMatrix:
    if n < 1:
        raise ValueError(f"matrix size must be >= 1, got {n}")
    entries = stirling_S_second_kind(n)
    if entries != stirling_S_inclusion_exclusion(n):
        raise ArithmeticError(f"the two closed forms of S disagree for n={n}")
    return SMatrix(n, entries)


def exp_nilpotent(n: int) -> sympy.Matrix:
    """exp(J - I) for the unipotent n x n Jordan block with ones below the diagonal."""
    return sympy.Matrix(
        n, n, lambda s, t: sympy.Rational(1, factorial(s - t)) if s >= t else 0
    )


def unipotent_jordan(n: int) -> sympy.Matrix:
    return sympy.Matrix(n, n, lambda s, t: 1 if s == t or s == t + 1 else 0)


def complete_substitution(q0: Poly, block_size: Optional[int] = None) -> Poly:
    """q0(S a) with S = stirling_S(n); n defaults to one more than the top slot."""
    if q0.is_zero():
        return q0
    _require_u_invariant(q0)
    n = q0.max_slot() + 1 if block_size is None else block_size
    if n <= q0.max_slot():
        raise SlotOutOfRange(
            f"block size {n} is too small for slot {q0.max_slot()}",
            witness={"block_size": str(n), "max_slot": str(q0.max_slot())},
        )
    return substitute_linear(q0, stirling_S(max(n, 1)).as_linear_map())


def complete(q0: Poly, method: CompletionMethod, block_size: Optional[int] = None) -> Poly:
    if method is CompletionMethod.STROH:
        return complete_stroh_poly(q0)
    if method is CompletionMethod.ITERATE:
        return complete_iterative(q0)
    return complete_substitution(q0, block_size)


@dataclass(frozen=True)
class CompletionReport:
    invariant: bool
    top_matches: bool
    lower_weights_only: bool

    @property
    def valid(self) -> bool:
        return self.invariant and self.top_matches and self.lower_weights_only


def check_completion(q0: Poly, completed: Poly) -> CompletionReport:
    """Contract of a completion: J-invariant, same top part, additions strictly lower."""
    if q0.is_zero():
        return CompletionReport(completed.is_zero(), completed.is_zero(), completed.is_zero())
    w = q0.top_weight()
    extra = completed - q0
    return CompletionReport(
        invariant=is_j_invariant(completed),
        top_matches=weight_component(completed, w) == q0,
        lower_weights_only=all(m.weight < w for m in extra.terms),
    )
