"""
Stroh's U basis of the homogeneous isobaric polynomials K[a]_{d,g}.

Collecting the weight-g part of prod_{i=1..d} (a0 + a1 x_i + a2 x_i^2 + ...)
against the elementary symmetric products e_1^{k_1} ... e_d^{k_d} defines
U_{k_1,...,k_d}. Writing e^k = sum_h beta[k][h] m_h in the monomial symmetric
basis, U_k = sum_h alpha[h][k] a_{h_1} ... a_{h_d} with alpha the inverse of
beta. The polynomials in the roots are never built: beta counts 0/1 matrices
with prescribed row and column sums.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Dict, List, Sequence, Tuple

import sympy

from .exceptions import MultiBlockUnsupported, NotHomogeneous, NotIsobaric
from .polycore import Monomial, Poly, Var, grade

logger = logging.getLogger(__name__)

UIndex = Tuple[int, ...]
Partition = Tuple[int, ...]


def index_weight(idx: Sequence[int]) -> int:
    return sum(i * k for i, k in enumerate(idx, start=1))


def partitions(g: int, d: int) -> List[Partition]:
    """Partitions of ``g`` into at most ``d`` parts, padded with zeros to length d."""
    result: List[Partition] = []

    def extend(remaining: int, largest: int, prefix: List[int]) -> None:
        if remaining == 0:
            result.append(tuple(prefix) + (0,) * (d - len(prefix)))
            return
        if len(prefix) == d:
            return
        for part in range(min(remaining, largest), 0, -1):
            prefix.append(part)
            extend(remaining - part, part, prefix)
            prefix.pop()

    extend(g, g, [])
    return result


def e_product_indices(d: int, g: int) -> List[UIndex]:
    """
    All (k_1, ..., k_d) with sum i k_i = g, ordered lexicographically on
    (k_d, ..., k_1), largest first.
    """
    found: List[UIndex] = []

    def extend(part: int, remaining: int, tail: Tuple[int, ...]) -> None:
        if part == 1:
            found.append((remaining,) + tail)
            return
        for k in range(remaining // part, -1, -1):
            extend(part - 1, remaining - k * part, (k,) + tail)

    if d < 1:
        raise ValueError(f"degree must be >= 1, got {d}")
    extend(d, g, ())
    return found


@lru_cache(maxsize=None)
def _count_matrices(row_sizes: Tuple[int, ...], demands: Tuple[int, ...]) -> int:
    # number of 0/1 matrices with the given row sums and column sums
    if not row_sizes:
        return 1 if not any(demands) else 0
    size, rest = row_sizes[0], row_sizes[1:]
    open_columns = [c for c, need in enumerate(demands) if need > 0]
    if len(open_columns) < size:
        return 0
    total = 0
    for chosen in combinations(open_columns, size):
        updated = list(demands)
        for c in chosen:
            updated[c] -= 1
        total += _count_matrices(rest, tuple(sorted(updated, reverse=True)))
    return total


def _row_sizes(idx: UIndex) -> Tuple[int, ...]:
    sizes: List[int] = []
    for part, k in enumerate(idx, start=1):
        sizes.extend([part] * k)
    return tuple(sorted(sizes, reverse=True))


@dataclass(frozen=True)
class SymTransition:
    """
    The m <-> e change of basis for degree ``d`` and weight ``g``.

    ``beta[r][c]`` is the coefficient of m_{partitions[c]} in e^{indices[r]};
    ``alpha`` is its inverse, read as alpha[h][k].
    """

    d: int
    g: int
    indices: Tuple[UIndex, ...]
    partitions: Tuple[Partition, ...]
    beta: Tuple[Tuple[int, ...], ...]
    alpha: Tuple[Tuple[Fraction, ...], ...]

    def index_position(self, idx: UIndex) -> int:
        return self.indices.index(idx)


@lru_cache(maxsize=None)
def sym_transition(d: int, g: int) -> SymTransition:
    indices = tuple(e_product_indices(d, g))
    parts = tuple(partitions(g, d))
    beta = tuple(
        tuple(_count_matrices(_row_sizes(k), h) for h in parts) for k in indices
    )
    inverse = sympy.Matrix(beta).inv()
    alpha = tuple(
        tuple(
            Fraction(int(inverse[r, c].p), int(inverse[r, c].q))
            for c in range(len(indices))
        )
        for r in range(len(parts))
    )
    logger.debug(f"m/e transition built for d={d}, g={g} ({len(indices)} x {len(parts)})")
    return SymTransition(d, g, indices, parts, beta, alpha)


def _partition_monomial(h: Partition) -> Monomial:
    exps: Dict[Var, int] = {}
    for slot in h:
        var = Var(1, slot)
        exps[var] = exps.get(var, 0) + 1
    return Monomial.from_dict(exps)


def _monomial_partition(mono: Monomial, d: int) -> Partition:
    slots: List[int] = []
    for var, e in mono.exps:
        slots.extend([var.slot] * e)
    slots.sort(reverse=True)
    return tuple(slots) + (0,) * (d - len(slots))


@lru_cache(maxsize=None)
def u_poly(idx: UIndex) -> Poly:
    """U_{k_1,...,k_d}; zero when an entry is negative."""
    idx = tuple(idx)
    if not idx:
        raise ValueError("a U index needs at least one entry")
    if any(k < 0 for k in idx):
        return Poly.zero()
    table = sym_transition(len(idx), index_weight(idx))
    col = table.index_position(idx)
    return Poly(
        {
            _partition_monomial(h): table.alpha[row][col]
            for row, h in enumerate(table.partitions)
        }
    )


def u_invariant_basis(d: int, g: int) -> List[Tuple[UIndex, Poly]]:
    """The U-invariants U_{0,k_2,...,k_d} of degree d and weight g."""
    return [(idx, u_poly(idx)) for idx in e_product_indices(d, g) if idx[0] == 0]


def dim_u(d: int, g: int) -> int:
    """Coefficient of x^g in 1 / ((1 - x^2)(1 - x^3) ... (1 - x^d))."""
    if d < 1 or g < 0:
        raise ValueError(f"need d >= 1 and g >= 0, got d={d}, g={g}")
    series = [1] + [0] * g
    for part in range(2, d + 1):
        for s in range(part, g + 1):
            series[s] += series[s - part]
    return series[g]


def express_in_u(p: Poly) -> Dict[UIndex, Fraction]:
    """
    Coefficients c_k with p = sum c_k U_k, for a homogeneous isobaric
    single-block polynomial. Computed as c_k = sum_h beta[k][h] P_h where P_h
    is the coefficient of a_{h_1} ... a_{h_d} in p.
    """
    if p.is_zero():
        return {}
    foreign = sorted(v for v in p.variables() if v.block != 1)
    if foreign:
        raise MultiBlockUnsupported(
            "the U basis is a single-block construction",
            witness={"variable": str(foreign[0])},
        )
    report = grade(p)
    if not report.is_homogeneous or not report.degree:
        raise NotHomogeneous(
            "expected a homogeneous polynomial of positive degree",
            witness={"degrees": ",".join(map(str, report.degrees))},
        )
    if not report.is_isobaric:
        raise NotIsobaric(
            "expected an isobaric polynomial",
            witness={"weights": ",".join(map(str, report.weights))},
        )
    d, g = report.degree, report.weight
    assert d is not None and g is not None
    table = sym_transition(d, g)
    coords = [p.coefficient(_partition_monomial(h)) for h in table.partitions]
    result: Dict[UIndex, Fraction] = {}
    for row, idx in enumerate(table.indices):
        c = sum(
            (b * x for b, x in zip(table.beta[row], coords) if b and x), Fraction(0)
        )
        if c:
            result[idx] = c
    return result


def from_u(coefficients: Dict[UIndex, Fraction]) -> Poly:
    """sum c_k U_k."""
    total = Poly.zero()
    for idx, c in coefficients.items():
        total = total + u_poly(idx) * c
    return total


@dataclass(frozen=True)
class RecursionCheck:
    """Both sides of one U recursion, evaluated exactly."""

    name: str
    index: UIndex
    lhs: Poly
    rhs: Poly

    @property
    def holds(self) -> bool:
        return self.lhs == self.rhs


def _unit(d: int, i: int) -> List[int]:
    vec = [0] * d
    vec[i] = 1
    return vec


def trailing_one_rhs(k: UIndex) -> Poly:
    """
    Right-hand side for U_{k,1} with len(k) >= 2:

    a1 U_{k + e_d} - a0 sum_{i=1..d} j_i U_j, where j = k + e_d + e_i - e_{i-1}.
    """
    d = len(k)
    if d < 2:
        raise ValueError("the trailing-one recursion needs at least two entries")
    base = [x + y for x, y in zip(k, _unit(d, d - 1))]
    a0, a1 = Poly.var(0), Poly.var(1)
    inner = Poly.zero()
    for i in range(d):
        j = list(base)
        j[i] += 1
        if i:
            j[i - 1] -= 1
        if j[i] and min(j) >= 0:
            inner = inner + u_poly(tuple(j)) * j[i]
    return a1 * u_poly(tuple(base)) - a0 * inner


def u_recursion_check(idx: UIndex) -> List[RecursionCheck]:
    """
    Evaluate U_{k,0} = a0 U_k and, for at least two entries, the trailing-one
    recursion for U_{k,1}.
    """
    idx = tuple(idx)
    checks = [
        RecursionCheck("trailing-zero", idx, u_poly(idx + (0,)), Poly.var(0) * u_poly(idx))
    ]
    if len(idx) >= 2:
        checks.append(
            RecursionCheck("trailing-one", idx, u_poly(idx + (1,)), trailing_one_rhs(idx))
        )
    for check in checks:
        logger.debug(f"{check.name} recursion at {idx}: {'ok' if check.holds else 'FAILED'}")
    return checks
