"""
Covariants of the binary n-ic built from their sources.

A covariant C = sum_i C_i X1^(m-i) X2^i of degree d and weight g has order
m = n d - 2 g. It is determined by its source C_0, a U-invariant, through
C_i = Delta_n^i C_0 / i!. Covariance under GL_2 reduces to the diagonal
scaling (degree and weight bookkeeping) plus the two unipotent generators:

    D C = X2 dC/dX1   <=>   D C_i = (m - i + 1) C_{i-1}
    Delta_n C = X1 dC/dX2   <=>   Delta_n C_i = (i + 1) C_{i+1}
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Tuple

from .exceptions import (
    MultiBlockUnsupported,
    NegativeOrder,
    NotHomogeneous,
    NotIsobaric,
    NotUInvariant,
    SemiInvariantError,
    SlotOutOfRange,
)
from .operators import D, apply, delta
from .polycore import Poly, grade

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Covariant:
    """Coefficients C_0..C_m of a covariant of the binary form of degree n."""

    n: int
    m: int
    coeffs: Tuple[Poly, ...]

    @property
    def source(self) -> Poly:
        return self.coeffs[0]

    def term_label(self, i: int) -> str:
        parts = []
        for name, e in (("X1", self.m - i), ("X2", i)):
            if e:
                parts.append(name if e == 1 else f"{name}^{e}")
        return "*".join(parts) if parts else "1"


def _check_source(c0: Poly, n: int) -> Tuple[int, int]:
    if c0.is_zero():
        raise NotHomogeneous("the zero polynomial has no degree", witness={"source": "0"})
    foreign = sorted(v for v in c0.variables() if v.block != 1)
    if foreign:
        raise MultiBlockUnsupported(
            "sources are single-block polynomials", witness={"variable": str(foreign[0])}
        )
    report = grade(c0)
    if not report.is_homogeneous:
        raise NotHomogeneous(
            "the source must be homogeneous",
            witness={"degrees": ",".join(map(str, report.degrees))},
        )
    if not report.is_isobaric:
        raise NotIsobaric(
            "the source must be isobaric",
            witness={"weights": ",".join(map(str, report.weights))},
        )
    image = apply(D, c0)
    if not image.is_zero():
        raise NotUInvariant(
            "the source is not annihilated by D", witness={"D(source)": str(image)}
        )
    assert report.degree is not None and report.weight is not None
    return report.degree, report.weight


def covariant_from_source(c0: Poly, n: int) -> Covariant:
    """
    Build C_0..C_m with C_i = Delta_n^i C_0 / i! and m = n d - 2 g.

    Raises:
        NotUInvariant: D c0 is not zero.
        NegativeOrder: n d - 2 g < 0.
    """
    d, g = _check_source(c0, n)
    m = n * d - 2 * g
    if m < 0:
        raise NegativeOrder(
            f"order n*d - 2*g = {m} is negative",
            witness={"n": str(n), "degree": str(d), "weight": str(g)},
        )
    if c0.max_slot() > n:
        raise SlotOutOfRange(
            f"the binary form of degree {n} has coefficients a0..a{n}",
            witness={"max_slot": str(c0.max_slot()), "n": str(n)},
        )
    op = delta(n)
    coeffs = [c0]
    for i in range(1, m + 1):
        coeffs.append(apply(op, coeffs[-1]) * Fraction(1, i))
    logger.debug(f"covariant of order {m} built from a degree {d}, weight {g} source")
    return Covariant(n, m, tuple(coeffs))


@dataclass(frozen=True)
class Violation:
    condition: str
    index: int
    detail: str


@dataclass
class CovariantReport:
    """Violations found by :func:`check_covariant`; empty means the covariant passes."""

    violations: List[Violation] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations

    def add(self, condition: str, index: int, detail: str) -> None:
        self.violations.append(Violation(condition, index, detail))


def check_covariant(c: Covariant) -> CovariantReport:
    """Check the degree, weight, order and both operator conditions coefficient-wise."""
    report = CovariantReport()
    if len(c.coeffs) != c.m + 1:
        report.add("order", 0, f"{len(c.coeffs)} coefficients for order {c.m}")
        return report

    source = grade(c.source)
    d, g = source.degree, source.weight
    if d is None or g is None or c.source.is_zero():
        report.add("degree", 0, "the source is not homogeneous and isobaric")
        return report
    if c.n * d - 2 * g != c.m:
        report.add("order", 0, f"n*d - 2*g = {c.n * d - 2 * g}, order is {c.m}")

    for i, coeff in enumerate(c.coeffs):
        info = grade(coeff)
        if coeff.is_zero():
            report.add("degree", i, "coefficient is zero")
            continue
        if info.degree != d:
            report.add("degree", i, f"degrees {info.degrees}, expected {d}")
        if info.weight != g + i:
            report.add("weight", i, f"weights {info.weights}, expected {g + i}")

    for i, coeff in enumerate(c.coeffs):
        expected = c.coeffs[i - 1] * (c.m - i + 1) if i else Poly.zero()
        if apply(D, coeff) != expected:
            report.add("D", i, f"D(C_{i}) != {c.m - i + 1}*C_{i - 1}" if i else "D(C_0) != 0")

    op = delta(c.n)
    for i, coeff in enumerate(c.coeffs):
        expected = c.coeffs[i + 1] * (i + 1) if i < c.m else Poly.zero()
        try:
            image = apply(op, coeff)
        except SemiInvariantError as exc:
            report.add("Delta", i, exc.message)
            continue
        if image != expected:
            detail = f"Delta(C_{i}) != {i + 1}*C_{i + 1}" if i < c.m else f"Delta(C_{i}) != 0"
            report.add("Delta", i, detail)
    return report


def is_invariant_form(p: Poly, n: int) -> bool:
    """True when p is a nonzero homogeneous isobaric polynomial killed by D and Delta_n."""
    if p.is_zero() or p.blocks() - {1} or p.max_slot() > n:
        return False
    info = grade(p)
    if not (info.is_homogeneous and info.is_isobaric):
        return False
    return apply(D, p).is_zero() and apply(delta(n), p).is_zero()
