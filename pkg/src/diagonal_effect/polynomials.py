"""Sparse multivariate polynomials over exact rationals in cell variables.

A variable is an integer id; the cell (i, j) of an I x I table, 1-based,
gets id (i-1)*I + (j-1).  Ids at or above I*I are auxiliary variables used
only inside elimination computations.  Monomials are sorted tuples of
(variable, exponent) pairs, which keeps the arithmetic hashable and cheap.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .errors import InputError, SizeMismatchError
from .tables import ProbTable

Monomial = Tuple[Tuple[int, int], ...]

MONO_ONE: Monomial = ()


def cell_var(i: int, j: int, size: int) -> int:
    """Variable id of cell (i, j), 1-based indices."""
    if not (1 <= i <= size and 1 <= j <= size):
        raise InputError(f"cell ({i},{j}) outside a {size}x{size} table")
    return (i - 1) * size + (j - 1)


def var_cell(v: int, size: int) -> Tuple[int, int]:
    if not (0 <= v < size * size):
        raise InputError(f"variable {v} is not a cell of a {size}x{size} table")
    return v // size + 1, v % size + 1


def mono_from_cells(cells: Iterable[Tuple[int, int]], size: int) -> Monomial:
    """Monomial that is the product of the given cells (repeats allowed)."""
    exps: Dict[int, int] = {}
    for (i, j) in cells:
        v = cell_var(i, j, size)
        exps[v] = exps.get(v, 0) + 1
    return tuple(sorted(exps.items()))


def mono_degree(m: Monomial) -> int:
    return sum(e for _, e in m)


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    exps = dict(a)
    for v, e in b:
        exps[v] = exps.get(v, 0) + e
    return tuple(sorted(exps.items()))


def mono_divides(a: Monomial, b: Monomial) -> bool:
    """True when monomial a divides monomial b."""
    bd = dict(b)
    return all(bd.get(v, 0) >= e for v, e in a)


def mono_div(a: Monomial, b: Monomial) -> Monomial:
    """a / b, assuming divisibility."""
    exps = dict(a)
    for v, e in b:
        r = exps.get(v, 0) - e
        if r < 0:
            raise InputError("monomial division with nonzero remainder")
        if r == 0:
            exps.pop(v, None)
        else:
            exps[v] = r
    return tuple(sorted(exps.items()))


def mono_lcm(a: Monomial, b: Monomial) -> Monomial:
    exps = dict(a)
    for v, e in b:
        exps[v] = max(exps.get(v, 0), e)
    return tuple(sorted(exps.items()))


def mono_coprime(a: Monomial, b: Monomial) -> bool:
    avars = {v for v, _ in a}
    return not any(v in avars for v, _ in b)


@dataclass(frozen=True)
class TermOrder:
    """A monomial order given by a significance-ordered variable tuple.

    Plain orders are graded reverse lexicographic over `variables`.  With
    `block` > 0 the first `block` variables form an elimination block:
    monomials are compared grevlex on the block first, then grevlex on the
    rest, so eliminating the block variables is a matter of discarding
    basis elements that mention them.
    """

    variables: tuple
    block: int = 0

    @classmethod
    def grevlex(cls, variables: Sequence[int]) -> "TermOrder":
        return cls(variables=tuple(variables))

    @classmethod
    def grevlex_last(cls, variables: Sequence[int], last: int) -> "TermOrder":
        """Grevlex with one chosen variable moved to the least significant slot."""
        rest = tuple(v for v in variables if v != last)
        return cls(variables=rest + (last,))

    @classmethod
    def elimination(cls, block_vars: Sequence[int], main_vars: Sequence[int]) -> "TermOrder":
        return cls(variables=tuple(block_vars) + tuple(main_vars), block=len(block_vars))

    def key(self, m: Monomial):
        exps = dict(m)
        dense = [exps.get(v, 0) for v in self.variables]
        if self.block:
            head, tail = dense[: self.block], dense[self.block:]
            return (
                sum(head),
                tuple(-e for e in reversed(head)),
                sum(tail),
                tuple(-e for e in reversed(tail)),
            )
        return (sum(dense), tuple(-e for e in reversed(dense)))

    def sort_terms(self, terms: Iterable[Monomial], reverse: bool = True) -> List[Monomial]:
        return sorted(terms, key=self.key, reverse=reverse)

    def describe(self) -> str:
        if self.block:
            return f"elimination(block={self.block}, vars={len(self.variables)})"
        return f"grevlex(vars={len(self.variables)})"


class CellPolynomial:
    """Immutable-by-convention sparse polynomial with Fraction coefficients."""

    __slots__ = ("size", "terms")

    def __init__(self, size: int, terms: Optional[Dict[Monomial, Fraction]] = None):
        self.size = size
        clean: Dict[Monomial, Fraction] = {}
        if terms:
            for m, c in terms.items():
                c = Fraction(c)
                if c != 0:
                    clean[m] = c
        self.terms = clean

    # ---- constructors ----

    @classmethod
    def zero(cls, size: int) -> "CellPolynomial":
        return cls(size, {})

    @classmethod
    def constant(cls, size: int, value) -> "CellPolynomial":
        return cls(size, {MONO_ONE: Fraction(value)})

    @classmethod
    def from_cell_terms(cls, size: int, cell_terms) -> "CellPolynomial":
        """Build from (coefficient, [(i, j), ...]) pairs with repeats as powers."""
        terms: Dict[Monomial, Fraction] = {}
        for coeff, cells in cell_terms:
            m = mono_from_cells(cells, size)
            terms[m] = terms.get(m, Fraction(0)) + Fraction(coeff)
        return cls(size, terms)

    # ---- ring operations ----

    def __add__(self, other: "CellPolynomial") -> "CellPolynomial":
        self._check_sibling(other)
        terms = dict(self.terms)
        for m, c in other.terms.items():
            terms[m] = terms.get(m, Fraction(0)) + c
        return CellPolynomial(self.size, terms)

    def __sub__(self, other: "CellPolynomial") -> "CellPolynomial":
        self._check_sibling(other)
        terms = dict(self.terms)
        for m, c in other.terms.items():
            terms[m] = terms.get(m, Fraction(0)) - c
        return CellPolynomial(self.size, terms)

    def __neg__(self) -> "CellPolynomial":
        return CellPolynomial(self.size, {m: -c for m, c in self.terms.items()})

    def __mul__(self, other: "CellPolynomial") -> "CellPolynomial":
        self._check_sibling(other)
        terms: Dict[Monomial, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = mono_mul(m1, m2)
                terms[m] = terms.get(m, Fraction(0)) + c1 * c2
        return CellPolynomial(self.size, terms)

    def scaled(self, factor) -> "CellPolynomial":
        f = Fraction(factor)
        return CellPolynomial(self.size, {m: c * f for m, c in self.terms.items()})

    def term_scaled(self, coeff: Fraction, mono: Monomial) -> "CellPolynomial":
        return CellPolynomial(self.size, {mono_mul(m, mono): c * coeff for m, c in self.terms.items()})

    def _check_sibling(self, other: "CellPolynomial"):
        if self.size != other.size:
            raise SizeMismatchError(f"polynomial sizes differ: {self.size} vs {other.size}")

    # ---- structure ----

    def is_zero(self) -> bool:
        return not self.terms

    def num_terms(self) -> int:
        return len(self.terms)

    def total_degree(self) -> int:
        return max((mono_degree(m) for m in self.terms), default=0)

    def variables(self) -> set:
        return {v for m in self.terms for v, _ in m}

    def is_pure_binomial(self) -> bool:
        """Two terms with opposite unit-normalizable coefficients and coprime monomials."""
        if len(self.terms) != 2:
            return False
        (m1, c1), (m2, c2) = sorted(self.terms.items())
        return c1 == -c2 and mono_coprime(m1, m2)

    def canonical_key(self):
        return tuple(sorted(self.terms.items()))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, CellPolynomial)
            and self.size == other.size
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.size, self.canonical_key()))

    def sign_canonical(self) -> "CellPolynomial":
        """Flip the global sign so the grevlex-leading coefficient is positive."""
        if not self.terms:
            return self
        order = TermOrder.grevlex(range(self.size * self.size))
        lead = max(self.terms, key=order.key)
        return self if self.terms[lead] > 0 else -self

    # ---- evaluation and rendering ----

    def evaluate(self, point) -> Fraction:
        """Exact value at a ProbTable or a {(i, j): Fraction} mapping."""
        if isinstance(point, ProbTable):
            if point.size != self.size:
                raise SizeMismatchError(
                    f"polynomial over {self.size}x{self.size} cells, table is {point.size}x{point.size}"
                )
            flat = [p for row in point.cells for p in row]
        else:
            flat = [Fraction(0)] * (self.size * self.size)
            for (i, j), value in point.items():
                flat[cell_var(i, j, self.size)] = Fraction(value)
        total = Fraction(0)
        for m, c in self.terms.items():
            value = c
            for v, e in m:
                if v >= len(flat):
                    raise InputError("cannot evaluate an auxiliary variable at a table")
                value *= flat[v] ** e
            total += value
        return total

    def render_monomial(self, m: Monomial) -> str:
        if not m:
            return "1"
        parts = []
        for v, e in m:
            if v < self.size * self.size:
                i, j = var_cell(v, self.size)
                name = f"p[{i},{j}]"
            else:
                name = f"t{v - self.size * self.size}"
            parts.append(name if e == 1 else f"{name}^{e}")
        return "*".join(parts)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        order = TermOrder.grevlex(sorted(self.variables()) or [0])
        chunks = []
        for m in order.sort_terms(self.terms):
            c = self.terms[m]
            mono = self.render_monomial(m)
            mag = abs(c)
            body = mono if mag == 1 and m else (str(mag) if not m else f"{mag}*{mono}")
            if not chunks:
                chunks.append(body if c > 0 else f"-{body}")
            else:
                chunks.append(f"{'+' if c > 0 else '-'} {body}")
        return " ".join(chunks)

    def __repr__(self) -> str:
        return f"CellPolynomial(size={self.size}, {str(self)})"


def binomial_from_vector(flat: Sequence[int], size: int, label_size_check: bool = True) -> CellPolynomial:
    """p^{v+} - p^{v-} for an integer cell vector in row-major order."""
    if label_size_check and len(flat) != size * size:
        raise SizeMismatchError(f"expected {size * size} entries, got {len(flat)}")
    pos: Dict[int, int] = {}
    neg: Dict[int, int] = {}
    for v, x in enumerate(flat):
        if x > 0:
            pos[v] = x
        elif x < 0:
            neg[v] = -x
    if not pos and not neg:
        raise InputError("the zero vector has no binomial")
    return CellPolynomial(
        size,
        {
            tuple(sorted(pos.items())): Fraction(1),
            tuple(sorted(neg.items())): Fraction(-1),
        },
    )
