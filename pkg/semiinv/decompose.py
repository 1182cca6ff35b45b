"""
Representation of semi-invariants in a basis family with a0-power denominators.

Every semi-invariant p of a Jordan matrix can be written uniquely as

    p = sum_I c_I P_1^{I_1} ... P_{n-1}^{I_{n-1}} / prod_j a_{0,j}^{m_j}

once the exponents m_j are minimal. The elimination below removes, block by
block from the right, the highest remaining slot variable: with a block form
whose only top-slot term is c a0^r a_s, or at slot 1 with the mixed form
against the previous block of size > 1. Denominators are canonicalized
afterwards: m_j can be lowered exactly when every numerator term contains the
form a_{0,j}, since the basis forms are algebraically independent.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Type

import sympy

from .config import settings
from .exceptions import (
    MultiBlockUnsupported,
    NoSolution,
    NotDivisible,
    NotSemiInvariant,
    NotUInvariant,
    SemiInvariantError,
    SlotOutOfRange,
)
from .forms import BasisFamily, BasisForm, basis_for, q_form
from .jordan import JordanSpec, Multiplier, check_semi_invariant, check_variables
from .operators import D, apply
from .polycore import Monomial, Poly, Var, a, multidegree_components

logger = logging.getLogger(__name__)

MultiIndex = Tuple[int, ...]


@dataclass(frozen=True)
class Representation:
    """Numerator coefficients over multi-indices of ``family`` and per-block denominators."""

    family: BasisFamily
    numerator: Mapping[MultiIndex, Fraction]
    denom_exps: Tuple[int, ...]

    def items(self) -> List[Tuple[MultiIndex, Fraction]]:
        return sorted(self.numerator.items(), reverse=True)

    def describe_term(self, index: MultiIndex) -> str:
        factors = []
        for label, e in zip(self.family.labels, index):
            if e:
                factors.append(label if e == 1 else f"{label}^{e}")
        return "*".join(factors) if factors else "1"

    def denominator(self) -> Monomial:
        return Monomial.from_dict(
            {Var(j, 0): m for j, m in enumerate(self.denom_exps, start=1) if m}
        )

    def satisfies_multipliers(self, alpha: Multiplier) -> bool:
        """
        Every term obeys prod mu_i^{I_i} = alpha * prod lambda_j^{m_j}.
        """
        spec = self.family.spec
        for index in self.numerator:
            lhs: Optional[Multiplier] = None
            for form, e in zip(self.family.forms, index):
                if e:
                    lhs = form.multiplier**e if lhs is None else lhs * form.multiplier**e
            if alpha.exponents is not None:
                expected = tuple(x + y for x, y in zip(alpha.exponents, self.denom_exps))
                got = lhs.exponents if lhs is not None else (0,) * len(expected)
                if got != expected:
                    return False
            else:
                assert alpha.value is not None
                expected_value = alpha.value
                for j, m in enumerate(self.denom_exps, start=1):
                    expected_value *= Fraction(spec.eigenvalue(j)) ** m
                got_value = lhs.value if lhs is not None else Fraction(1)
                if got_value != expected_value:
                    return False
        return True


# ----- formal arithmetic on (numerator, denominator) pairs ---------------


@dataclass
class _Rep:
    numerator: Dict[MultiIndex, Fraction]
    den: List[int]


class _Eliminator:
    """Runs the slot elimination for one basis family."""

    def __init__(
        self,
        family: BasisFamily,
        sizes: Sequence[int],
        error: Type[SemiInvariantError],
    ):
        self.family = family
        self.sizes = tuple(sizes)
        self.error = error
        self.width = len(family.forms)
        self._a0_index: Dict[int, int] = {}
        self._block_index: Dict[Tuple[int, int], int] = {}
        self._mixed_index: Dict[int, Tuple[int, int]] = {}
        for pos, form in enumerate(family.forms):
            if form.is_mixed:
                assert form.partner is not None
                self._mixed_index[form.block] = (pos, form.partner)
            elif form.lead_slot == 0:
                self._a0_index[form.block] = pos
            else:
                self._block_index[(form.block, form.lead_slot)] = pos

    # formal helpers
    def _unit(self, pos: int, e: int) -> MultiIndex:
        index = [0] * self.width
        index[pos] = e
        return tuple(index)

    def _shift(self, index: MultiIndex, pos: int, e: int) -> MultiIndex:
        shifted = list(index)
        shifted[pos] += e
        return tuple(shifted)

    def _raise_denominator(self, rep: _Rep, block: int, target: int) -> _Rep:
        extra = target - rep.den[block - 1]
        if extra <= 0:
            return rep
        pos = self._a0_index[block]
        numerator = {self._shift(i, pos, extra): c for i, c in rep.numerator.items()}
        den = list(rep.den)
        den[block - 1] = target
        return _Rep(numerator, den)

    def _add(self, x: _Rep, y: _Rep) -> _Rep:
        for block in range(1, len(self.sizes) + 1):
            top = max(x.den[block - 1], y.den[block - 1])
            x = self._raise_denominator(x, block, top)
            y = self._raise_denominator(y, block, top)
        total = dict(x.numerator)
        for index, c in y.numerator.items():
            total[index] = total.get(index, Fraction(0)) + c
        return _Rep({i: c for i, c in total.items() if c}, list(x.den))

    def zero(self) -> _Rep:
        return _Rep({}, [0] * len(self.sizes))

    # elimination
    def run(self, p: Poly, shape: Tuple[int, ...]) -> _Rep:
        if p.is_zero():
            return self.zero()
        block = next(
            (k for k in range(len(shape), 0, -1) if shape[k - 1] >= 2), None
        )
        if block is None:
            return self._base(p)
        slot = shape[block - 1] - 1
        var = Var(block, slot)
        lowered = shape[: block - 1] + (slot,) + shape[block:]
        m = p.degree_in(var)
        if m == 0:
            return self.run(p, lowered)

        if slot >= 2:
            pos = self._block_index[(block, slot)]
            form = self.family.forms[pos]
            scalar = form.lead_coeff
            lead = a(0, block) ** form.lead_a0_power * scalar
            den_block, den_step = block, form.lead_a0_power
        else:
            if block not in self._mixed_index:
                raise self.error(
                    f"the polynomial depends on {var}, which no basis form can absorb",
                    witness={"variable": str(var)},
                )
            pos, partner = self._mixed_index[block]
            form = self.family.forms[pos]
            scalar = Fraction(1)
            lead = a(0, partner)
            den_block, den_step = partner, 1

        h = p.coefficient_of_power(var, m)
        # q has degree < m in var
        q = lead**m * p - h * form.poly**m
        rep_h = self.run(h, lowered)
        rep_q = self.run(q, shape)
        lifted = _Rep(
            {self._shift(i, pos, m): c for i, c in rep_h.numerator.items()},
            list(rep_h.den),
        )
        combined = self._add(rep_q, lifted)
        factor = Fraction(1) / scalar**m
        den = list(combined.den)
        den[den_block - 1] += den_step * m
        return _Rep({i: c * factor for i, c in combined.numerator.items()}, den)

    def _base(self, p: Poly) -> _Rep:
        numerator: Dict[MultiIndex, Fraction] = {}
        for mono, coeff in p.terms.items():
            index = [0] * self.width
            for var, e in mono.exps:
                if var.slot != 0 or var.block not in self._a0_index:
                    raise self.error(
                        f"unexpected variable {var} after elimination",
                        witness={"variable": str(var)},
                    )
                index[self._a0_index[var.block]] += e
            numerator[tuple(index)] = coeff
        return _Rep(numerator, [0] * len(self.sizes))

    def canonical(self, rep: _Rep) -> _Rep:
        """Lower every m_j while all numerator terms contain a_{0,j}."""
        numerator = dict(rep.numerator)
        den = list(rep.den)
        for block in range(1, len(self.sizes) + 1):
            if not den[block - 1] or not numerator:
                continue
            pos = self._a0_index[block]
            common = min(min(i[pos] for i in numerator), den[block - 1])
            if common:
                numerator = {self._shift(i, pos, -common): c for i, c in numerator.items()}
                den[block - 1] -= common
        if not numerator:
            den = [0] * len(self.sizes)
        return _Rep(numerator, den)


def _a0_form_index(family: BasisFamily, block: int) -> int:
    for pos, form in enumerate(family.forms):
        if not form.is_mixed and form.block == block and form.lead_slot == 0:
            return pos
    raise ValueError(f"family has no a0 form for block {block}")


def decompose(spec: JordanSpec, p: Poly) -> Representation:
    """
    Write a semi-invariant in the basis family of ``spec`` with minimal
    a0-power denominators.

    Raises:
        NotSemiInvariant: ``p`` is not a semi-invariant of the matrix.
    """
    check_semi_invariant(spec, p)
    family = basis_for(spec)
    eliminator = _Eliminator(family, spec.sizes, NotSemiInvariant)
    rep = eliminator.canonical(eliminator.run(p, spec.sizes))
    result = Representation(family, rep.numerator, tuple(rep.den))
    logger.debug(
        f"decomposed into {len(result.numerator)} terms over denominators {result.denom_exps}"
    )
    if settings.verify_minimal_denominator:
        _confirm_minimal(spec, p, result)
    return result


def _confirm_minimal(spec: JordanSpec, p: Poly, rep: Representation) -> None:
    for j, m in enumerate(rep.denom_exps):
        if not m:
            continue
        smaller = list(rep.denom_exps)
        smaller[j] -= 1
        try:
            membership_oracle(spec, p, smaller)
        except NoSolution:
            continue
        raise ArithmeticError(
            f"denominator exponent of block {j + 1} is not minimal: {rep.denom_exps}"
        )


def _power_table(family: BasisFamily) -> List[List[Poly]]:
    return [[Poly.const(1)] for _ in family.forms]


def _basis_product(
    family: BasisFamily, index: MultiIndex, cache: List[List[Poly]]
) -> Poly:
    product = Poly.const(1)
    for pos, e in enumerate(index):
        powers = cache[pos]
        while len(powers) <= e:
            powers.append(powers[-1] * family.forms[pos].poly)
        if e:
            product = product * powers[e]
    return product


def expand(rep: Representation) -> Poly:
    """
    The polynomial a Representation stands for.

    Raises:
        NotDivisible: the numerator is not divisible by the denominator.
    """
    cache = _power_table(rep.family)
    numerator = Poly.zero()
    for index, c in rep.numerator.items():
        numerator = numerator + _basis_product(rep.family, index, cache) * c
    denominator = rep.denominator()
    quotient = numerator.divide_monomial(denominator)
    if quotient is None:
        raise NotDivisible(
            "the numerator is not divisible by the denominator",
            witness={"denominator": str(denominator)},
        )
    return quotient


def _indices_for(
    family: BasisFamily, targets: Sequence[Tuple[int, ...]]
) -> List[MultiIndex]:
    k = family.spec.k
    degrees = [
        next(iter(multidegree_components(f.poly, k))) for f in family.forms
    ]
    found: List[MultiIndex] = []

    def extend(pos: int, remaining: Tuple[int, ...], prefix: List[int]) -> None:
        if pos == len(degrees):
            if not any(remaining):
                found.append(tuple(prefix))
            return
        deg = degrees[pos]
        e = 0
        while all(r >= 0 for r in remaining):
            prefix.append(e)
            extend(pos + 1, remaining, prefix)
            prefix.pop()
            remaining = tuple(r - x for r, x in zip(remaining, deg))
            e += 1

    for target in targets:
        extend(0, tuple(target), [])
    return sorted(set(found), reverse=True)


def membership_oracle(
    spec: JordanSpec, p: Poly, denom_exps: Sequence[int]
) -> Dict[MultiIndex, Fraction]:
    """
    Solve p * prod a_{0,j}^{m_j} = sum c_I P^I by exact linear algebra over
    all multi-indices of matching multidegree.

    Raises:
        NoSolution: the denominators are too small.
    """
    if len(denom_exps) != spec.k:
        raise ValueError(f"expected {spec.k} denominator exponents, got {len(denom_exps)}")
    check_variables(spec, p)
    family = basis_for(spec)
    shift = Poly.monomial({Var(j, 0): m for j, m in enumerate(denom_exps, start=1) if m})
    target = p * shift
    indices = _indices_for(family, list(multidegree_components(target, spec.k)))
    cache = _power_table(family)
    columns = [_basis_product(family, index, cache) for index in indices]
    monomials = sorted(
        set(target.terms).union(*(c.terms for c in columns)), key=Monomial.sort_key
    )
    if not indices:
        raise NoSolution(
            "no basis product has the required multidegree",
            witness={"denom_exps": ",".join(map(str, denom_exps))},
        )

    def rational(x: Fraction) -> sympy.Rational:
        return sympy.Rational(x.numerator, x.denominator)

    matrix = sympy.Matrix(
        [[rational(col.coefficient(m)) for col in columns] for m in monomials]
    )
    rhs = sympy.Matrix([rational(target.coefficient(m)) for m in monomials])
    try:
        solution, params = matrix.gauss_jordan_solve(rhs)
    except ValueError as exc:
        raise NoSolution(
            "the linear system has no solution",
            witness={"denom_exps": ",".join(map(str, denom_exps))},
        ) from exc
    if params.shape[0]:
        raise ArithmeticError("basis products are linearly dependent")
    result: Dict[MultiIndex, Fraction] = {}
    for index, value in zip(indices, solution):
        if value != 0:
            result[index] = Fraction(int(value.p), int(value.q))
    logger.debug(f"membership system {matrix.shape} solved with {len(result)} terms")
    return result


def u_family(n: int) -> BasisFamily:
    """q_1 = a0 and q_k = weight-k part of p_k for k = 2..n."""
    spec = JordanSpec.single(n + 1)
    forms = []
    for k in range(1, n + 1):
        poly = q_form(k)
        slot = k if k > 1 else 0
        top = [(m, c) for m, c in poly.terms.items() if m.exponent(Var(1, slot))]
        mono, coeff = top[0]
        power = mono.exponent(Var(1, 0)) - (1 if slot == 0 else 0)
        forms.append(
            BasisForm(
                poly=poly,
                multiplier=Multiplier(exponents=(next(iter(poly.degrees())),)),
                lead_slot=slot,
                lead_coeff=coeff,
                lead_a0_power=power,
                block=1,
                label=f"q{k}",
            )
        )
    return BasisFamily(spec, tuple(forms))


def u_decompose(p: Poly, n: int) -> Representation:
    """
    Write a U-invariant as P(q_1, ..., q_n) / a0^m.

    Raises:
        NotUInvariant: D p is not zero or elimination meets a variable it
            cannot absorb.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    foreign = sorted(v for v in p.variables() if v.block != 1)
    if foreign:
        raise MultiBlockUnsupported(
            "U-invariants are single-block", witness={"variable": str(foreign[0])}
        )
    if p.max_slot() > n:
        raise SlotOutOfRange(
            f"slots must not exceed {n}",
            witness={"max_slot": str(p.max_slot()), "n": str(n)},
        )
    image = apply(D, p)
    if not image.is_zero():
        raise NotUInvariant("D does not annihilate the polynomial", witness={"D(p)": str(image)})
    family = u_family(n)
    eliminator = _Eliminator(family, (n + 1,), NotUInvariant)
    rep = eliminator.canonical(eliminator.run(p, (n + 1,)))
    return Representation(family, rep.numerator, tuple(rep.den))
