"""
Exact sparse polynomial arithmetic over the rationals.

Variables are doubly indexed a_{s,b} (slot s, block b). Coefficients are
``fractions.Fraction``; no floating point is used anywhere. Besides ring
arithmetic this module provides the degree / weight / multidegree gradings,
linear substitution, and the text and JSON codecs used by the command line.
"""

import logging
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import (
    Callable,
    Dict,
    Iterable,
    Iterator,
    List,
    Mapping,
    Optional,
    Sequence,
    Set,
    Tuple,
    Union,
)

from .exceptions import PolyParseError

logger = logging.getLogger(__name__)

Scalar = Union[int, Fraction]


@dataclass(frozen=True, order=True)
class Var:
    """The variable a_{slot,block}; single-block code uses block 1."""

    block: int
    slot: int

    def __post_init__(self) -> None:
        if self.block < 1:
            raise ValueError(f"block index must be >= 1, got {self.block}")
        if self.slot < 0:
            raise ValueError(f"slot index must be >= 0, got {self.slot}")

    def __str__(self) -> str:
        if self.block == 1:
            return f"a{self.slot}"
        return f"a{self.slot}_{self.block}"


def _print_key(var: Var) -> Tuple[int, int]:
    return (var.block, -var.slot)


@dataclass(frozen=True)
class Monomial:
    """Product of variable powers; ``exps`` is sorted and holds no zero exponent."""

    exps: Tuple[Tuple[Var, int], ...] = ()

    @classmethod
    def from_dict(cls, exps: Mapping[Var, int]) -> "Monomial":
        items = []
        for var, exp in exps.items():
            if exp < 0:
                raise ValueError(f"negative exponent {exp} for {var}")
            if exp:
                items.append((var, exp))
        items.sort(key=lambda item: _print_key(item[0]))
        return cls(tuple(items))

    @classmethod
    def of(cls, var: Var, exp: int = 1) -> "Monomial":
        return cls.from_dict({var: exp})

    def as_dict(self) -> Dict[Var, int]:
        return dict(self.exps)

    def exponent(self, var: Var) -> int:
        for v, e in self.exps:
            if v == var:
                return e
        return 0

    @property
    def degree(self) -> int:
        return sum(e for _, e in self.exps)

    @property
    def weight(self) -> int:
        return sum(v.slot * e for v, e in self.exps)

    def multidegree(self, n_blocks: int) -> Tuple[int, ...]:
        degs = [0] * n_blocks
        for v, e in self.exps:
            degs[v.block - 1] += e
        return tuple(degs)

    def variables(self) -> Tuple[Var, ...]:
        return tuple(v for v, _ in self.exps)

    def __mul__(self, other: "Monomial") -> "Monomial":
        merged = self.as_dict()
        for v, e in other.exps:
            merged[v] = merged.get(v, 0) + e
        return Monomial.from_dict(merged)

    def divide(self, other: "Monomial") -> Optional["Monomial"]:
        """Exact quotient, or None when ``other`` does not divide ``self``."""
        remaining = self.as_dict()
        for v, e in other.exps:
            have = remaining.get(v, 0)
            if have < e:
                return None
            remaining[v] = have - e
        return Monomial.from_dict(remaining)

    def sort_key(self) -> Tuple[int, Tuple[Tuple[int, int, int], ...]]:
        """Graded-lex key: higher degree first, then larger leading variables."""
        return (
            -self.degree,
            tuple((v.block, -v.slot, -e) for v, e in self.exps),
        )

    def __str__(self) -> str:
        if not self.exps:
            return "1"
        parts = []
        for v, e in self.exps:
            parts.append(str(v) if e == 1 else f"{v}^{e}")
        return "*".join(parts)


ONE_MONOMIAL = Monomial()


class Poly:
    """
    Sparse polynomial with exact rational coefficients.

    Instances are immutable by convention: every operation returns a new Poly
    and the term map is never exposed for mutation.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Optional[Mapping[Monomial, Scalar]] = None):
        clean: Dict[Monomial, Fraction] = {}
        if terms:
            for mono, coeff in terms.items():
                c = Fraction(coeff)
                if c:
                    clean[mono] = c
        self._terms = clean

    # ----- constructors -------------------------------------------------
    @classmethod
    def zero(cls) -> "Poly":
        return cls()

    @classmethod
    def const(cls, c: Scalar) -> "Poly":
        return cls({ONE_MONOMIAL: c})

    @classmethod
    def var(cls, slot: int, block: int = 1) -> "Poly":
        return cls({Monomial.of(Var(block, slot)): 1})

    @classmethod
    def monomial(cls, exps: Mapping[Var, int], coeff: Scalar = 1) -> "Poly":
        return cls({Monomial.from_dict(exps): coeff})

    @classmethod
    def _trusted(cls, terms: Dict[Monomial, Fraction]) -> "Poly":
        poly = cls.__new__(cls)
        poly._terms = {m: c for m, c in terms.items() if c}
        return poly

    # ----- inspection ---------------------------------------------------
    @property
    def terms(self) -> Mapping[Monomial, Fraction]:
        return dict(self._terms)

    def items(self) -> List[Tuple[Monomial, Fraction]]:
        """Terms in canonical print order."""
        return sorted(self._terms.items(), key=lambda item: item[0].sort_key())

    def coefficient(self, mono: Monomial) -> Fraction:
        return self._terms.get(mono, Fraction(0))

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def __iter__(self) -> Iterator[Tuple[Monomial, Fraction]]:
        return iter(self.items())

    def variables(self) -> Set[Var]:
        found: Set[Var] = set()
        for mono in self._terms:
            found.update(mono.variables())
        return found

    def blocks(self) -> Set[int]:
        return {v.block for v in self.variables()}

    def max_slot(self, block: Optional[int] = None) -> int:
        """Highest slot present (in ``block`` if given); -1 for a constant."""
        slots = [v.slot for v in self.variables() if block is None or v.block == block]
        return max(slots) if slots else -1

    def n_blocks(self) -> int:
        return max(self.blocks(), default=1)

    def weights(self) -> Set[int]:
        return {m.weight for m in self._terms}

    def degrees(self) -> Set[int]:
        return {m.degree for m in self._terms}

    def top_weight(self) -> int:
        return max(self.weights(), default=-1)

    def degree_in(self, var: Var) -> int:
        return max((m.exponent(var) for m in self._terms), default=0)

    # ----- arithmetic ---------------------------------------------------
    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Poly.const(other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def __neg__(self) -> "Poly":
        return Poly._trusted({m: -c for m, c in self._terms.items()})

    def __add__(self, other: Union["Poly", Scalar]) -> "Poly":
        other = _coerce(other)
        merged = dict(self._terms)
        for mono, coeff in other._terms.items():
            merged[mono] = merged.get(mono, Fraction(0)) + coeff
        return Poly._trusted(merged)

    __radd__ = __add__

    def __sub__(self, other: Union["Poly", Scalar]) -> "Poly":
        return self + (-_coerce(other))

    def __rsub__(self, other: Union["Poly", Scalar]) -> "Poly":
        return _coerce(other) - self

    def __mul__(self, other: Union["Poly", Scalar]) -> "Poly":
        if isinstance(other, (int, Fraction)):
            c = Fraction(other)
            return Poly._trusted({m: c * v for m, v in self._terms.items()})
        if not isinstance(other, Poly):
            return NotImplemented
        product: Dict[Monomial, Fraction] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                mono = m1 * m2
                product[mono] = product.get(mono, Fraction(0)) + c1 * c2
        return Poly._trusted(product)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Poly":
        if k < 0:
            raise ValueError("negative powers are not polynomials")
        result = Poly.const(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def map_terms(self, fn: Callable[[Monomial, Fraction], Fraction]) -> "Poly":
        return Poly._trusted({m: fn(m, c) for m, c in self._terms.items()})

    def filter_terms(self, keep: Callable[[Monomial], bool]) -> "Poly":
        return Poly._trusted({m: c for m, c in self._terms.items() if keep(m)})

    def divide_monomial(self, mono: Monomial) -> Optional["Poly"]:
        """Exact quotient by a monomial, or None if some term is not divisible."""
        quotient: Dict[Monomial, Fraction] = {}
        for m, c in self._terms.items():
            q = m.divide(mono)
            if q is None:
                return None
            quotient[q] = c
        return Poly._trusted(quotient)

    def derivative(self, var: Var) -> "Poly":
        result: Dict[Monomial, Fraction] = {}
        for mono, coeff in self._terms.items():
            e = mono.exponent(var)
            if e:
                lowered = mono.divide(Monomial.of(var))
                assert lowered is not None
                result[lowered] = result.get(lowered, Fraction(0)) + coeff * e
        return Poly._trusted(result)

    def evaluate(self, point: Mapping[Var, Scalar]) -> Fraction:
        total = Fraction(0)
        for mono, coeff in self._terms.items():
            value = coeff
            for v, e in mono.exps:
                value *= Fraction(point[v]) ** e
            total += value
        return total

    def coefficient_of_power(self, var: Var, k: int) -> "Poly":
        """The polynomial h with self = sum_k h_k var^k, for the given k."""
        result: Dict[Monomial, Fraction] = {}
        for mono, coeff in self._terms.items():
            if mono.exponent(var) == k:
                rest = mono.as_dict()
                rest.pop(var, None)
                result[Monomial.from_dict(rest)] = coeff
        return Poly._trusted(result)

    # ----- printing -----------------------------------------------------
    def __str__(self) -> str:
        return format_poly(self)

    def __repr__(self) -> str:
        return f"Poly({format_poly(self)!r})"


def _coerce(value: Union[Poly, Scalar]) -> Poly:
    if isinstance(value, Poly):
        return value
    return Poly.const(value)


def arith(p: Poly, q: Poly, op: str) -> Poly:
    """Ring operation ``op`` in {"add", "sub", "mul"}."""
    if op == "add":
        return p + q
    if op == "sub":
        return p - q
    if op == "mul":
        return p * q
    raise ValueError(f"unknown operation {op!r}")


# ----- gradings --------------------------------------------------------


@dataclass(frozen=True)
class TermGrade:
    monomial: Monomial
    degree: int
    weight: int
    multidegree: Tuple[int, ...]


@dataclass(frozen=True)
class GradingReport:
    terms: Tuple[TermGrade, ...]
    degrees: Tuple[int, ...]
    weights: Tuple[int, ...]
    multidegrees: Tuple[Tuple[int, ...], ...]

    @property
    def is_homogeneous(self) -> bool:
        return len(self.degrees) <= 1

    @property
    def is_isobaric(self) -> bool:
        return len(self.weights) <= 1

    @property
    def is_multihomogeneous(self) -> bool:
        return len(self.multidegrees) <= 1

    @property
    def degree(self) -> Optional[int]:
        return self.degrees[0] if self.is_homogeneous and self.degrees else None

    @property
    def weight(self) -> Optional[int]:
        return self.weights[0] if self.is_isobaric and self.weights else None

    @property
    def multidegree(self) -> Optional[Tuple[int, ...]]:
        if self.is_multihomogeneous and self.multidegrees:
            return self.multidegrees[0]
        return None


def grade(p: Poly, n_blocks: Optional[int] = None) -> GradingReport:
    """Degree, weight and multidegree of every term plus the aggregated flags."""
    width = n_blocks if n_blocks is not None else p.n_blocks()
    rows = tuple(
        TermGrade(m, m.degree, m.weight, m.multidegree(width)) for m, _ in p.items()
    )
    return GradingReport(
        terms=rows,
        degrees=tuple(sorted({r.degree for r in rows})),
        weights=tuple(sorted({r.weight for r in rows})),
        multidegrees=tuple(sorted({r.multidegree for r in rows})),
    )


def weight_component(p: Poly, w: int) -> Poly:
    if w < 0:
        raise ValueError("weight must be non-negative")
    return p.filter_terms(lambda m: m.weight == w)


def weight_components(p: Poly) -> Dict[int, Poly]:
    return {w: weight_component(p, w) for w in sorted(p.weights())}


def multidegree_components(p: Poly, n_blocks: int) -> Dict[Tuple[int, ...], Poly]:
    buckets: Dict[Tuple[int, ...], Dict[Monomial, Fraction]] = {}
    for mono, coeff in p.terms.items():
        buckets.setdefault(mono.multidegree(n_blocks), {})[mono] = coeff
    return {md: Poly._trusted(terms) for md, terms in sorted(buckets.items())}


# ----- linear substitution ---------------------------------------------

LinearForm = Tuple[Tuple[Var, Fraction], ...]


@dataclass(frozen=True)
class LinearMap:
    """
    Variable substitution v -> sum c_i w_i. Unmapped variables are fixed;
    an empty image sends the variable to zero.
    """

    assignments: Mapping[Var, LinearForm] = field(default_factory=dict)

    @classmethod
    def from_pairs(
        cls, assignments: Mapping[Var, Iterable[Tuple[Var, Scalar]]]
    ) -> "LinearMap":
        cleaned: Dict[Var, LinearForm] = {}
        for var, image in assignments.items():
            combined: Dict[Var, Fraction] = {}
            for target, c in image:
                combined[target] = combined.get(target, Fraction(0)) + Fraction(c)
            cleaned[var] = tuple(sorted((t, c) for t, c in combined.items() if c))
        return cls(cleaned)

    @classmethod
    def identity(cls) -> "LinearMap":
        return cls({})

    def image(self, var: Var) -> LinearForm:
        if var in self.assignments:
            return self.assignments[var]
        return ((var, Fraction(1)),)

    def image_poly(self, var: Var) -> Poly:
        return Poly._trusted(
            {Monomial.of(t): c for t, c in self.image(var)}
        )

    def compose(self, inner: "LinearMap") -> "LinearMap":
        """The map applying ``inner`` first and then ``self``."""
        result: Dict[Var, List[Tuple[Var, Fraction]]] = {}
        for var in set(inner.assignments) | set(self.assignments):
            terms: List[Tuple[Var, Fraction]] = []
            for mid, c in inner.image(var):
                for target, d in self.image(mid):
                    terms.append((target, c * d))
            result[var] = terms
        return LinearMap.from_pairs(result)


def substitute_linear(p: Poly, m: LinearMap) -> Poly:
    """Replace every variable by its image under ``m`` and expand."""
    power_cache: Dict[Tuple[Var, int], Poly] = {}

    def power(var: Var, e: int) -> Poly:
        key = (var, e)
        if key not in power_cache:
            power_cache[key] = m.image_poly(var) ** e
        return power_cache[key]

    total: Dict[Monomial, Fraction] = {}
    for mono, coeff in p.terms.items():
        term = Poly.const(coeff)
        for var, e in mono.exps:
            term = term * power(var, e)
            if term.is_zero():
                break
        for m2, c2 in term.terms.items():
            total[m2] = total.get(m2, Fraction(0)) + c2
    return Poly._trusted(total)


# ----- text codec ------------------------------------------------------

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<var>a\d+(?:_\d+)?)|(?P<op>[-+*^]))"
)


def _tokenize(text: str) -> List[Tuple[str, str]]:
    tokens: List[Tuple[str, str]] = []
    pos = 0
    stripped = text.rstrip()
    while pos < len(stripped):
        match = _TOKEN.match(stripped, pos)
        if not match or match.end() == pos:
            raise PolyParseError(f"unexpected character at offset {pos} in {text!r}")
        kind = match.lastgroup
        assert kind is not None
        tokens.append((kind, match.group(kind)))
        pos = match.end()
    return tokens


def _parse_number(token: str) -> Fraction:
    if "/" in token:
        num, den = token.split("/")
        if int(den) == 0:
            raise PolyParseError(f"zero denominator in {token!r}")
        return Fraction(int(num), int(den))
    return Fraction(int(token))


def _parse_var(token: str) -> Var:
    body = token[1:]
    if "_" in body:
        slot, block = body.split("_")
        if int(block) < 1:
            raise PolyParseError(f"block index must be >= 1 in {token!r}")
        return Var(int(block), int(slot))
    return Var(1, int(body))


def parse_poly(text: str) -> Poly:
    """Parse the text grammar, e.g. ``-3*a2^2*a1^2 + 6*a3*a1^3`` or ``a0_1*a1_2``."""
    tokens = _tokenize(text)
    if not tokens:
        raise PolyParseError("empty polynomial")
    terms: Dict[Monomial, Fraction] = {}
    i = 0
    first = True
    while i < len(tokens):
        sign = Fraction(1)
        if tokens[i] == ("op", "+") or tokens[i] == ("op", "-"):
            sign = Fraction(-1) if tokens[i][1] == "-" else Fraction(1)
            i += 1
        elif not first:
            raise PolyParseError(f"expected '+' or '-' before term in {text!r}")
        first = False

        coeff = sign
        exps: Dict[Var, int] = {}
        expect_factor = True
        while i < len(tokens):
            kind, value = tokens[i]
            if expect_factor:
                if kind == "num":
                    coeff *= _parse_number(value)
                    i += 1
                elif kind == "var":
                    var = _parse_var(value)
                    i += 1
                    exp = 1
                    if i < len(tokens) and tokens[i] == ("op", "^"):
                        nxt = tokens[i + 1] if i + 1 < len(tokens) else ("", "")
                        if nxt[0] != "num" or "/" in nxt[1]:
                            raise PolyParseError(f"bad exponent after {value!r} in {text!r}")
                        exp = int(nxt[1])
                        i += 2
                    exps[var] = exps.get(var, 0) + exp
                else:
                    raise PolyParseError(f"expected a factor, found {value!r} in {text!r}")
                expect_factor = False
            elif kind == "op" and value == "*":
                expect_factor = True
                i += 1
            else:
                break
        if expect_factor:
            raise PolyParseError(f"dangling operator in {text!r}")
        mono = Monomial.from_dict(exps)
        terms[mono] = terms.get(mono, Fraction(0)) + coeff
    return Poly(terms)


def _format_fraction(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_poly(p: Poly) -> str:
    """Canonical text form: graded-lex term order, explicit signs."""
    if p.is_zero():
        return "0"
    pieces: List[str] = []
    for index, (mono, coeff) in enumerate(p.items()):
        negative = coeff < 0
        magnitude = -coeff if negative else coeff
        if mono == ONE_MONOMIAL:
            body = _format_fraction(magnitude)
        elif magnitude == 1:
            body = str(mono)
        else:
            body = f"{_format_fraction(magnitude)}*{mono}"
        if index == 0:
            pieces.append(f"-{body}" if negative else body)
        else:
            pieces.append(f" - {body}" if negative else f" + {body}")
    return "".join(pieces)


# ----- JSON codec ------------------------------------------------------


def poly_to_json(p: Poly) -> Dict[str, list]:
    return {
        "terms": [
            {
                "c": _format_fraction(coeff),
                "m": [{"b": v.block, "s": v.slot, "e": e} for v, e in mono.exps],
            }
            for mono, coeff in p.items()
        ]
    }


def poly_from_json(data: Mapping[str, Sequence[Mapping[str, object]]]) -> Poly:
    try:
        terms: Dict[Monomial, Fraction] = {}
        for entry in data["terms"]:
            coeff = _parse_number(str(entry["c"]).lstrip("-"))
            if str(entry["c"]).startswith("-"):
                coeff = -coeff
            exps: Dict[Var, int] = {}
            for factor in entry["m"]:  # type: ignore[union-attr]
                var = Var(int(factor["b"]), int(factor["s"]))  # type: ignore[index]
                exps[var] = exps.get(var, 0) + int(factor["e"])  # type: ignore[index]
            mono = Monomial.from_dict(exps)
            terms[mono] = terms.get(mono, Fraction(0)) + coeff
    except (KeyError, TypeError, ValueError) as exc:
        raise PolyParseError(f"malformed polynomial JSON: {exc}") from exc
    return Poly(terms)


# ----- shorthands used throughout the package --------------------------


def a(slot: int, block: int = 1) -> Poly:
    """The variable a_{slot,block} as a polynomial."""
    return Poly.var(slot, block)


def shift_slots(p: Poly, offset: int, block: int = 1) -> Poly:
    """Rename a_{s} -> a_{s+offset} inside ``block``."""
    renamed: Dict[Monomial, Fraction] = {}
    for mono, coeff in p.terms.items():
        exps: Dict[Var, int] = {}
        for v, e in mono.exps:
            target = Var(v.block, v.slot + offset) if v.block == block else v
            exps[target] = exps.get(target, 0) + e
        renamed[Monomial.from_dict(exps)] = coeff
    return Poly._trusted(renamed)


def move_to_block(p: Poly, block: int) -> Poly:
    """Re-index a single-block polynomial onto ``block``."""
    moved: Dict[Monomial, Fraction] = {}
    for mono, coeff in p.terms.items():
        moved[Monomial.from_dict({Var(block, v.slot): e for v, e in mono.exps})] = coeff
    return Poly._trusted(moved)
