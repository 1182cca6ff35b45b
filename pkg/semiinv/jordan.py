"""
Jordan matrices and the semi-invariance test.

A JordanSpec lists the blocks of A = diag(J_{n_1,l_1}, ..., J_{n_k,l_k}) where
each multiplicative block has its eigenvalue on the diagonal and on the first
subdiagonal, so that a_{s,j} -> l_j (a_{s,j} + a_{s-1,j}). Semi-invariance is
decided structurally: A is the product of the diagonal scaling and the
unipotent part N, so a polynomial is semi-invariant exactly when its
multidegree components are N-invariant and carry a common multiplier.
"""

import logging
import re
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .exceptions import (
    GenericModeUnsupported,
    JordanSpecError,
    NotSemiInvariant,
    VariableOutOfSpec,
)
from .polycore import LinearMap, Poly, Var, multidegree_components, substitute_linear

logger = logging.getLogger(__name__)

Eigenvalue = Union[str, Fraction]

_TAG = re.compile(r"^[A-Za-z][A-Za-z0-9_]*$")
_RATIONAL = re.compile(r"^-?\d+(?:/\d+)?$")


@dataclass(frozen=True)
class JordanBlock:
    """One multiplicative Jordan block: size and eigenvalue (tag or rational)."""

    size: int
    eigenvalue: Eigenvalue

    def __post_init__(self) -> None:
        if self.size < 1:
            raise JordanSpecError(f"block size must be >= 1, got {self.size}")
        if isinstance(self.eigenvalue, Fraction) and self.eigenvalue == 0:
            raise JordanSpecError("numeric eigenvalues must be nonzero")

    @property
    def is_generic(self) -> bool:
        return isinstance(self.eigenvalue, str)

    def __str__(self) -> str:
        return f"{self.size}:{self.eigenvalue}"


@dataclass(frozen=True)
class JordanSpec:
    """Ordered Jordan blocks; all eigenvalues are tags or all are rationals."""

    blocks: Tuple[JordanBlock, ...]

    def __post_init__(self) -> None:
        if not self.blocks:
            raise JordanSpecError("a Jordan specification needs at least one block")
        modes = {b.is_generic for b in self.blocks}
        if len(modes) > 1:
            raise JordanSpecError("eigenvalues must be all symbolic or all numeric")

    @classmethod
    def parse(cls, text: str) -> "JordanSpec":
        """
        Parse ``"4:L1,3:L2,1:L3"`` (symbolic) or ``"4:2,3:1/3"`` (numeric).

        A bare tag such as ``"4:L"`` is allowed for a single block.
        """
        blocks: List[JordanBlock] = []
        for chunk in text.split(","):
            chunk = chunk.strip()
            if not chunk:
                raise JordanSpecError(f"empty block in {text!r}")
            size_text, sep, value_text = chunk.partition(":")
            if not sep or not size_text.strip().isdigit():
                raise JordanSpecError(f"expected <size>:<eigenvalue>, got {chunk!r}")
            value_text = value_text.strip()
            eigenvalue: Eigenvalue
            if _TAG.match(value_text):
                eigenvalue = value_text
            elif _RATIONAL.match(value_text):
                num, _, den = value_text.partition("/")
                if den and int(den) == 0:
                    raise JordanSpecError(f"zero denominator in {chunk!r}")
                eigenvalue = Fraction(int(num), int(den) if den else 1)
            else:
                raise JordanSpecError(f"bad eigenvalue {value_text!r} in {chunk!r}")
            blocks.append(JordanBlock(int(size_text), eigenvalue))
        return cls(tuple(blocks))

    @classmethod
    def single(cls, size: int, eigenvalue: Eigenvalue = "L") -> "JordanSpec":
        return cls((JordanBlock(size, eigenvalue),))

    @classmethod
    def of_sizes(cls, sizes: Sequence[int]) -> "JordanSpec":
        """Generic spec with tags L1, L2, ... for the given block sizes."""
        return cls(tuple(JordanBlock(n, f"L{j}") for j, n in enumerate(sizes, start=1)))

    @property
    def k(self) -> int:
        return len(self.blocks)

    @property
    def sizes(self) -> Tuple[int, ...]:
        return tuple(b.size for b in self.blocks)

    @property
    def total_size(self) -> int:
        return sum(self.sizes)

    @property
    def l(self) -> int:
        """Number of blocks of size greater than one."""
        return sum(1 for n in self.sizes if n > 1)

    @property
    def is_generic(self) -> bool:
        return self.blocks[0].is_generic

    def size_of(self, block: int) -> int:
        return self.blocks[block - 1].size

    def eigenvalue(self, block: int) -> Eigenvalue:
        return self.blocks[block - 1].eigenvalue

    def variables(self) -> List[Var]:
        return [
            Var(j, s) for j, b in enumerate(self.blocks, start=1) for s in range(b.size)
        ]

    def __str__(self) -> str:
        return ",".join(str(b) for b in self.blocks)


@dataclass(frozen=True)
class Multiplier:
    """
    The multiplier of a semi-invariant: an exponent vector over the block
    eigenvalues in generic mode, an exact value in numeric mode.
    """

    exponents: Optional[Tuple[int, ...]] = None
    value: Optional[Fraction] = None

    def __post_init__(self) -> None:
        if (self.exponents is None) == (self.value is None):
            raise ValueError("a multiplier is either an exponent vector or a value")

    def __mul__(self, other: "Multiplier") -> "Multiplier":
        if self.exponents is not None and other.exponents is not None:
            if len(self.exponents) != len(other.exponents):
                raise ValueError("exponent vectors of different length")
            return Multiplier(
                exponents=tuple(x + y for x, y in zip(self.exponents, other.exponents))
            )
        if self.value is not None and other.value is not None:
            return Multiplier(value=self.value * other.value)
        raise ValueError("cannot combine generic and numeric multipliers")

    def __pow__(self, k: int) -> "Multiplier":
        if self.exponents is not None:
            return Multiplier(exponents=tuple(k * e for e in self.exponents))
        assert self.value is not None
        return Multiplier(value=self.value**k)

    def describe(self, spec: JordanSpec) -> str:
        """Human-readable form, e.g. ``L1^2*L2`` or ``4/9``."""
        if self.value is not None:
            return str(self.value)
        assert self.exponents is not None
        factors = []
        for j, e in enumerate(self.exponents, start=1):
            if e:
                tag = str(spec.eigenvalue(j))
                factors.append(tag if e == 1 else f"{tag}^{e}")
        return "*".join(factors) if factors else "1"


def multiplier_of(spec: JordanSpec, multidegree: Sequence[int]) -> Multiplier:
    """Multiplier of a multihomogeneous semi-invariant of the given multidegree."""
    if len(multidegree) != spec.k:
        raise ValueError(f"multidegree {tuple(multidegree)} does not match {spec.k} blocks")
    if spec.is_generic:
        return Multiplier(exponents=tuple(multidegree))
    value = Fraction(1)
    for block, d in zip(spec.blocks, multidegree):
        value *= Fraction(block.eigenvalue) ** d
    return Multiplier(value=value)


def check_variables(spec: JordanSpec, p: Poly) -> None:
    for var in sorted(p.variables()):
        if var.block > spec.k or var.slot >= spec.size_of(var.block):
            raise VariableOutOfSpec(
                f"variable {var} lies outside the Jordan specification {spec}",
                witness={"variable": str(var), "jordan": str(spec)},
            )


def unipotent_map(spec: JordanSpec) -> LinearMap:
    """a_{s,j} -> a_{s,j} + a_{s-1,j} for every block."""
    return LinearMap.from_pairs(
        {
            Var(j, s): [(Var(j, s), 1), (Var(j, s - 1), 1)]
            for j, b in enumerate(spec.blocks, start=1)
            for s in range(1, b.size)
        }
    )


def unipotent_action(spec: JordanSpec, p: Poly) -> Poly:
    """p(Na) for the unipotent part N of the Jordan matrix."""
    check_variables(spec, p)
    return substitute_linear(p, unipotent_map(spec))


def _require_numeric(spec: JordanSpec, what: str) -> None:
    if spec.is_generic:
        raise GenericModeUnsupported(
            f"{what} needs numeric eigenvalues", witness={"jordan": str(spec)}
        )


def multiplicative_action(spec: JordanSpec, p: Poly) -> Poly:
    """p(Aa) for numeric eigenvalues: a_{s,j} -> l_j (a_{s,j} + a_{s-1,j})."""
    _require_numeric(spec, "the multiplicative action")
    check_variables(spec, p)
    pairs = {}
    for j, b in enumerate(spec.blocks, start=1):
        lam = Fraction(b.eigenvalue)
        for s in range(b.size):
            image = [(Var(j, s), lam)]
            if s:
                image.append((Var(j, s - 1), lam))
            pairs[Var(j, s)] = image
    return substitute_linear(p, LinearMap.from_pairs(pairs))


def additive_action(spec: JordanSpec, p: Poly) -> Poly:
    """p(J'a) for the additive form: a_{s,j} -> l_j a_{s,j} + a_{s-1,j}."""
    _require_numeric(spec, "the additive action")
    check_variables(spec, p)
    pairs = {}
    for j, b in enumerate(spec.blocks, start=1):
        lam = Fraction(b.eigenvalue)
        for s in range(b.size):
            image = [(Var(j, s), lam)]
            if s:
                image.append((Var(j, s - 1), Fraction(1)))
            pairs[Var(j, s)] = image
    return substitute_linear(p, LinearMap.from_pairs(pairs))


def check_semi_invariant(spec: JordanSpec, p: Poly) -> Multiplier:
    """
    Decide whether ``p`` is a semi-invariant of the Jordan matrix.

    Returns:
        The multiplier (exponent vector in generic mode, value in numeric mode).

    Raises:
        NotSemiInvariant: with a witness naming the offending component.
        VariableOutOfSpec: a variable does not belong to the matrix.
    """
    if p.is_zero():
        raise NotSemiInvariant(
            "the zero polynomial has no multiplier", witness={"reason": "zero polynomial"}
        )
    check_variables(spec, p)
    components = multidegree_components(p, spec.k)

    if spec.is_generic and len(components) > 1:
        found = list(components)
        raise NotSemiInvariant(
            "generic eigenvalues need a single multidegree",
            witness={
                "multidegree_a": ",".join(map(str, found[0])),
                "multidegree_b": ",".join(map(str, found[1])),
            },
        )

    n_map = unipotent_map(spec)
    for md, part in components.items():
        moved = substitute_linear(part, n_map) - part
        if not moved.is_zero():
            first_mono, first_coeff = moved.items()[0]
            logger.debug(f"component {md} moves under N")
            raise NotSemiInvariant(
                "a multidegree component is not invariant under the unipotent part",
                witness={
                    "multidegree": ",".join(map(str, md)),
                    "moved_term": str(Poly({first_mono: first_coeff})),
                },
            )

    multipliers: Dict[Tuple[int, ...], Multiplier] = {
        md: multiplier_of(spec, md) for md in components
    }
    if spec.is_generic:
        return next(iter(multipliers.values()))

    values = list(multipliers.items())
    md0, first = values[0]
    for md, mult in values[1:]:
        if mult.value != first.value:
            raise NotSemiInvariant(
                "multidegree components carry different multipliers",
                witness={
                    "multidegree_a": ",".join(map(str, md0)),
                    "value_a": str(first.value),
                    "multidegree_b": ",".join(map(str, md)),
                    "value_b": str(mult.value),
                },
            )
    return first


class TransferDirection(Enum):
    TO_ADDITIVE = "toAdditive"
    TO_MULTIPLICATIVE = "toMultiplicative"


def additive_transfer(
    spec: JordanSpec, p: Poly, direction: TransferDirection
) -> Poly:
    """
    Move a semi-invariant between the multiplicative and additive forms by
    a_{s,j} -> l_j^s a_{s,j} (toward additive) or l_j^-s a_{s,j} (back).
    """
    _require_numeric(spec, "additive transfer")
    check_variables(spec, p)
    sign = 1 if direction is TransferDirection.TO_ADDITIVE else -1
    pairs = {}
    for j, b in enumerate(spec.blocks, start=1):
        lam = Fraction(b.eigenvalue)
        for s in range(1, b.size):
            pairs[Var(j, s)] = [(Var(j, s), lam ** (sign * s))]
    return substitute_linear(p, LinearMap.from_pairs(pairs))
