"""
Canonical semi-invariant forms of Jordan blocks.

p_n is the degree-2 (even n) or degree-3 (odd n) semi-invariant of J_n whose
only term in the top slot is 2 a0 a_n (even) or -n a0^2 a_n (odd). Together
with the mixed quadratics coupling neighbouring blocks they form the basis
family of a Jordan matrix. The module also builds g_n, the U-invariant parts
q_n, the Kraft-Procesi invariants C_k and the Jacobian rank certificate.
"""

import logging
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import sympy

from .config import settings
from .exceptions import BlockTooSmall, OddUnsupported
from .jordan import JordanSpec, Multiplier, multiplier_of
from .polycore import (
    Poly,
    Var,
    a,
    move_to_block,
    shift_slots,
    weight_component,
)

logger = logging.getLogger(__name__)


def binom(n: int, k: int) -> int:
    """Binomial coefficient, zero when k < 0 or n < k."""
    if k < 0 or n < k:
        return 0
    return comb(n, k)


@dataclass(frozen=True)
class BasisForm:
    """
    A semi-invariant together with its multiplier and the shape of its unique
    top-slot term c * a0^r * a_{lead_slot}. For a mixed form the coefficient of
    the lead variable is a_{0,partner} instead of a power of a_{0,block}.
    """

    poly: Poly
    multiplier: Multiplier
    lead_slot: int
    lead_coeff: Fraction
    lead_a0_power: int
    block: int
    label: str
    partner: Optional[int] = None

    @property
    def is_mixed(self) -> bool:
        return self.partner is not None

    @property
    def lead_var(self) -> Var:
        return Var(self.block, self.lead_slot)


def _even_form(n: int) -> Poly:
    m = n // 2
    p = Poly.zero()
    for i in range(m + 1):
        for j in range(m, 2 * m - i + 1):
            coeff = binom(m - i, j - m) + binom(m - i - 1, j - m - 1)
            if coeff:
                p = p + a(i) * a(j) * ((-1) ** i * coeff)
    return p


@lru_cache(maxsize=None)
def _p_poly(n: int) -> Poly:
    if n == 0:
        return a(0) ** 2
    if n == 1:
        return a(0)
    if n % 2 == 0:
        return _even_form(n)
    return a(1) * _p_poly(n - 1) + a(0) * g_form(n)


@lru_cache(maxsize=None)
def g_form(n: int) -> Poly:
    """The quadratic g_n with p_n = a1 p_{n-1} + a0 g_n, for odd n >= 3."""
    if n < 3 or n % 2 == 0:
        raise ValueError(f"g_n is defined for odd n >= 3, got {n}")
    m = (n + 1) // 2
    g = Poly.zero()
    for i in range(m):
        for j in range(m, 2 * m - i):
            coeff = (-1) ** (i + 1) * (j - i) * binom(m - i - 1, j - m)
            if coeff:
                g = g + a(i) * a(j) * coeff
    return g


def _lead_shape(poly: Poly, block: int) -> Tuple[int, Fraction, int]:
    slot = poly.max_slot(block)
    top = Var(block, slot)
    a0 = Var(block, 0)
    lead_terms = [(m, c) for m, c in poly.terms.items() if m.exponent(top)]
    if len(lead_terms) != 1:
        raise ValueError(f"expected a single term in {top}, found {len(lead_terms)}")
    mono, coeff = lead_terms[0]
    power = mono.exponent(a0) - (1 if slot == 0 else 0)
    return slot, coeff, power


def _block_form(n: int, block: int, spec: Optional[JordanSpec]) -> BasisForm:
    poly = move_to_block(_p_poly(n), block)
    slot, coeff, power = _lead_shape(poly, block)
    k = spec.k if spec is not None else block
    multidegree = [0] * k
    multidegree[block - 1] = next(iter(poly.degrees()))
    mult = (
        multiplier_of(spec, multidegree)
        if spec is not None
        else Multiplier(exponents=tuple(multidegree))
    )
    label = f"p{n}" if k == 1 else f"p{n}_{block}"
    return BasisForm(poly, mult, slot, coeff, power, block, label)


def p_form(n: int, block: int = 1) -> BasisForm:
    """
    The canonical form p_n of J_{n+1}, optionally re-indexed onto ``block``.

    p_0 = a0^2 and p_1 = a0; even n uses the closed double sum, odd n the
    decomposition a1 p_{n-1} + a0 g_n.
    """
    if n < 0:
        raise ValueError(f"n must be non-negative, got {n}")
    return _block_form(n, block, None)


def _q_vector(n: int) -> Tuple[int, ...]:
    # coefficients of the positional linear form q_n(x_1, ..., x_n)
    if n == 2:
        return (1, 2)
    inner = _q_vector(n - 2)
    vec = [0] * n
    for pos, c in enumerate(inner):
        vec[pos + 1] += c
        vec[pos + 2] += c
    return tuple(vec)


def p_form_recursive(n: int) -> Poly:
    """
    Even p_n from p_n(a_0..a_n) = -p_{n-2}(a_1..a_{n-1}) + a0 q_n(a_1..a_n),
    with q_2 = x_1 + 2 x_2 and q_n(x) = q_{n-2}(x_2..x_{n-1}) + q_{n-2}(x_3..x_n).
    """
    if n < 2 or n % 2:
        raise OddUnsupported(
            "the recursive construction covers even n >= 2", witness={"n": str(n)}
        )
    previous = a(0) ** 2 if n == 2 else p_form_recursive(n - 2)
    linear = Poly.zero()
    for pos, c in enumerate(_q_vector(n), start=1):
        linear = linear + a(pos) * c
    return -shift_slots(previous, 1) + a(0) * linear


def q_form(n: int) -> Poly:
    """U-invariant part of p_n: a0 for n = 1, the weight-n part of p_n otherwise."""
    if n == 1:
        return a(0)
    return weight_component(p_form(n).poly, n)


def mixed_pair(i: int, j: int) -> Poly:
    """a_{0,i} a_{1,j} - a_{1,i} a_{0,j}."""
    return a(0, i) * a(1, j) - a(1, i) * a(0, j)


def _mixed_basis_form(spec: JordanSpec, i: int, j: int) -> BasisForm:
    multidegree = [0] * spec.k
    multidegree[i - 1] += 1
    multidegree[j - 1] += 1
    return BasisForm(
        poly=mixed_pair(i, j),
        multiplier=multiplier_of(spec, multidegree),
        lead_slot=1,
        lead_coeff=Fraction(1),
        lead_a0_power=1,
        block=j,
        label=f"r{i}_{j}",
        partner=i,
    )


def mixed_form(spec: JordanSpec, i: int) -> BasisForm:
    """The quadratic coupling blocks i and i+1, both of size greater than one."""
    if not 1 <= i < spec.k:
        raise BlockTooSmall(
            f"blocks {i} and {i + 1} do not both exist in {spec}",
            witness={"block": str(i), "jordan": str(spec)},
        )
    for block in (i, i + 1):
        if spec.size_of(block) < 2:
            raise BlockTooSmall(
                f"block {block} has size {spec.size_of(block)}",
                witness={"block": str(block), "size": str(spec.size_of(block))},
            )
    return _mixed_basis_form(spec, i, i + 1)


@dataclass(frozen=True)
class BasisFamily:
    """Ordered basis forms: per-block forms first, then the mixed forms."""

    spec: JordanSpec
    forms: Tuple[BasisForm, ...]

    @property
    def polys(self) -> List[Poly]:
        return [f.poly for f in self.forms]

    @property
    def multipliers(self) -> List[Multiplier]:
        return [f.multiplier for f in self.forms]

    @property
    def labels(self) -> List[str]:
        return [f.label for f in self.forms]

    def __len__(self) -> int:
        return len(self.forms)

    def index_of(self, label: str) -> int:
        return self.labels.index(label)


def basis_for(spec: JordanSpec) -> BasisFamily:
    """
    Basis forms of a Jordan matrix: a_{0,j}, p_2, ..., p_{n_j - 1} on every
    block, then one mixed form per pair of neighbouring blocks of size > 1.
    """
    forms: List[BasisForm] = []
    for j, n_j in enumerate(spec.sizes, start=1):
        for n in range(1, max(n_j, 2)):
            forms.append(_block_form(n, j, spec))
    large = [j for j, n_j in enumerate(spec.sizes, start=1) if n_j > 1]
    for i, j in zip(large, large[1:]):
        forms.append(_mixed_basis_form(spec, i, j))
    logger.debug(f"basis for {spec}: {len(forms)} forms")
    return BasisFamily(spec, tuple(forms))


def kraft_procesi(k: int) -> Poly:
    """
    C_k from (-1)^k C_k = (1-k) a1^k / k! + sum_{j=2..k} (-1)^j/(k-j)! a0^(j-1) a1^(k-j) a_j.
    """
    if k < 2:
        raise ValueError(f"C_k is defined for k >= 2, got {k}")
    total = a(1) ** k * Fraction(1 - k, factorial(k))
    for j in range(2, k + 1):
        total = total + a(0) ** (j - 1) * a(1) ** (k - j) * a(j) * Fraction(
            (-1) ** j, factorial(k - j)
        )
    return total * (-1) ** k


def random_point(
    variables: Sequence[Var], seed: Optional[int] = None
) -> Dict[Var, Fraction]:
    """Seeded random positive rationals for each variable."""
    rng = random.Random(settings.random_seed if seed is None else seed)
    bound = settings.sample_range
    return {
        v: Fraction(rng.randint(1, bound), rng.randint(1, bound)) for v in sorted(variables)
    }


def jacobian_rank(forms: Sequence[Poly], point: Mapping[Var, Fraction]) -> int:
    """Rank over the rationals of the Jacobian of ``forms`` evaluated at ``point``."""
    variables = sorted(set().union(*(f.variables() for f in forms))) if forms else []
    missing = [str(v) for v in variables if v not in point]
    if missing:
        raise ValueError(f"point has no value for {', '.join(missing)}")
    if not variables:
        return 0
    rows = []
    for f in forms:
        row = []
        for v in variables:
            value = f.derivative(v).evaluate(point)
            row.append(sympy.Rational(value.numerator, value.denominator))
        rows.append(row)
    return int(sympy.Matrix(rows).rank())
