"""Invariant factories for every model family, plus exact vanishing checks.

An invariant of a model is a polynomial in the cell variables that is
exactly zero at every point of the model.  Factories return labeled
polynomials; `check_vanishing` evaluates a batch at a probability table and
reports the exact values.

Two of the fixed generators below circulate in a variant form that differs
by a single sign; those variants fail the vanishing test at every interior
point of the model, while the emitted forms pass it.  See
`nonvanishing_variants_report` for the evidence; nothing is adjusted
silently.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .errors import InputError
from .polynomials import CellPolynomial
from .tables import Move, ProbTable


@dataclass(frozen=True)
class Invariant:
    name: str
    poly: CellPolynomial


def _poly(size: int, terms) -> CellPolynomial:
    return CellPolynomial.from_cell_terms(size, terms)


# ---------------------------------------------------------------------------
# independence and diagonal-effect families
# ---------------------------------------------------------------------------

def gens_independence(I: int) -> List[Invariant]:
    """All 2x2 minors p[i,j]*p[k,h] - p[i,h]*p[k,j], i<k, j<h."""
    if I < 2:
        raise InputError("independence minors need I >= 2")
    out = []
    for i in range(1, I + 1):
        for k in range(i + 1, I + 1):
            for j in range(1, I + 1):
                for h in range(j + 1, I + 1):
                    p = _poly(I, [(1, [(i, j), (k, h)]), (-1, [(i, h), (k, j)])])
                    out.append(Invariant(f"minor[{i},{k}|{j},{h}]", p))
    return out


def _offdiag_minor(I: int, i: int, k: int, j: int, h: int) -> CellPolynomial:
    return _poly(I, [(1, [(i, j), (k, h)]), (-1, [(i, h), (k, j)])])


def _cycle_binomial(I: int, a: int, b: int, c: int) -> CellPolynomial:
    """p[a,b]*p[b,c]*p[c,a] - p[a,c]*p[c,b]*p[b,a]."""
    return _poly(I, [(1, [(a, b), (b, c), (c, a)]), (-1, [(a, c), (c, b), (b, a)])])


def gens_diag_effect(I: int) -> List[Invariant]:
    """Generators of the diagonal-effect toric ideal.

    Degree-2 minors over four pairwise distinct indices (nonempty only for
    I >= 4) plus one degree-3 cycle binomial per unordered index triple.
    Every generator avoids the diagonal cells, whose counts are sufficient.
    By construction these also vanish on the mixture form of the model.
    """
    if I < 3:
        raise InputError("diagonal-effect generators need I >= 3")
    out = []
    idx = range(1, I + 1)
    for i in idx:
        for k in idx:
            if k <= i:
                continue
            for j in idx:
                if j in (i, k):
                    continue
                for h in idx:
                    if h <= j or h in (i, k):
                        continue
                    out.append(
                        Invariant(f"minor[{i},{k}|{j},{h}]", _offdiag_minor(I, i, k, j, h))
                    )
    for a in idx:
        for b in idx:
            if b <= a:
                continue
            for c in idx:
                if c <= b:
                    continue
                out.append(Invariant(f"cycle[{a},{b},{c}]", _cycle_binomial(I, a, b, c)))
    return out


# ---------------------------------------------------------------------------
# common-diagonal-effect: fixed I=3 generator lists
# ---------------------------------------------------------------------------

def gens_common_toric_listed3() -> List[Invariant]:
    """The nine binomial generators of the common-diagonal toric ideal, I=3."""
    I = 3
    polys = [
        [(1, [(1, 2), (2, 3), (3, 1)]), (-1, [(1, 3), (2, 1), (3, 2)])],
        [(1, [(1, 3), (2, 2), (3, 1)]), (-1, [(1, 1), (2, 3), (3, 2)])],
        [(-1, [(1, 1), (2, 3), (3, 2)]), (1, [(1, 2), (2, 1), (3, 3)])],
        [(-1, [(2, 2), (2, 3), (3, 1), (3, 1)]), (1, [(2, 1), (2, 1), (3, 2), (3, 3)])],
        [(1, [(1, 2), (2, 2), (3, 1), (3, 1)]), (-1, [(1, 1), (2, 1), (3, 2), (3, 2)])],
        [(-1, [(1, 1), (1, 3), (3, 2), (3, 2)]), (1, [(1, 2), (1, 2), (3, 1), (3, 3)])],
        [(-1, [(1, 3), (1, 3), (2, 2), (3, 2)]), (1, [(1, 2), (1, 2), (2, 3), (3, 3)])],
        [(-1, [(1, 1), (2, 3), (2, 3), (3, 1)]), (1, [(1, 3), (2, 1), (2, 1), (3, 3)])],
        [(1, [(1, 3), (1, 3), (2, 1), (2, 2)]), (-1, [(1, 1), (1, 2), (2, 3), (2, 3)])],
    ]
    return [Invariant(f"common-toric-3 #{k}", _poly(I, terms)) for k, terms in enumerate(polys, 1)]


_LISTED3_BINOMIAL = [
    [(1, [(1, 2), (2, 3), (3, 1)]), (-1, [(1, 3), (2, 1), (3, 2)])],
]

_LISTED3_FOUR_TERM = [
    [(1, [(1, 3), (2, 1), (2, 2)]), (-1, [(1, 2), (2, 1), (2, 3)]),
     (1, [(1, 3), (2, 3), (3, 1)]), (-1, [(1, 3), (2, 1), (3, 3)])],
    [(-1, [(1, 2), (1, 3), (2, 2)]), (1, [(1, 2), (1, 2), (2, 3)]),
     (-1, [(1, 3), (1, 3), (3, 2)]), (1, [(1, 2), (1, 3), (3, 3)])],
    [(1, [(1, 3), (2, 1), (3, 1)]), (-1, [(1, 1), (2, 3), (3, 1)]),
     (1, [(2, 2), (2, 3), (3, 1)]), (-1, [(2, 1), (2, 3), (3, 2)])],
    [(1, [(1, 2), (1, 3), (3, 1)]), (-1, [(1, 1), (1, 3), (3, 2)]),
     (1, [(1, 3), (2, 2), (3, 2)]), (-1, [(1, 2), (2, 3), (3, 2)])],
    [(1, [(1, 3), (2, 1), (2, 1)]), (-1, [(1, 1), (2, 1), (2, 3)]),
     (-1, [(2, 3), (2, 3), (3, 1)]), (1, [(2, 1), (2, 3), (3, 3)])],
    [(1, [(1, 3), (1, 3), (2, 1)]), (-1, [(1, 1), (1, 3), (2, 3)]),
     (1, [(1, 3), (2, 2), (2, 3)]), (-1, [(1, 2), (2, 3), (2, 3)])],
    [(1, [(1, 2), (1, 3), (2, 1)]), (-1, [(1, 1), (1, 2), (2, 3)]),
     (-1, [(1, 3), (2, 3), (3, 2)]), (1, [(1, 2), (2, 3), (3, 3)])],
    [(-1, [(2, 1), (2, 2), (3, 1)]), (-1, [(2, 3), (3, 1), (3, 1)]),
     (1, [(2, 1), (2, 1), (3, 2)]), (1, [(2, 1), (3, 1), (3, 3)])],
    [(-1, [(1, 2), (2, 2), (3, 1)]), (1, [(1, 2), (2, 1), (3, 2)]),
     (-1, [(1, 3), (3, 1), (3, 2)]), (1, [(1, 2), (3, 1), (3, 3)])],
    # Only this sign on the third term vanishes on the model; it also makes
    # the entry the transpose of entry 6, like the rest of the family.  The
    # flipped variant is recorded in nonvanishing_variants_report.
    [(1, [(1, 2), (3, 1), (3, 1)]), (-1, [(1, 1), (3, 1), (3, 2)]),
     (1, [(2, 2), (3, 1), (3, 2)]), (-1, [(2, 1), (3, 2), (3, 2)])],
    [(1, [(1, 2), (2, 1), (3, 1)]), (-1, [(1, 1), (2, 1), (3, 2)]),
     (-1, [(2, 3), (3, 1), (3, 2)]), (1, [(2, 1), (3, 2), (3, 3)])],
    [(1, [(1, 2), (1, 2), (3, 1)]), (-1, [(1, 1), (1, 2), (3, 2)]),
     (-1, [(1, 3), (3, 2), (3, 2)]), (1, [(1, 2), (3, 2), (3, 3)])],
]

_LISTED3_FOUR_TERM_10_VARIANT = [
    (1, [(1, 2), (3, 1), (3, 1)]), (-1, [(1, 1), (3, 1), (3, 2)]),
    (-1, [(2, 2), (3, 1), (3, 2)]), (-1, [(2, 1), (3, 2), (3, 2)]),
]

_LISTED3_EIGHT_TERM = [
    [(1, [(1, 1), (1, 3), (2, 2)]), (-1, [(1, 3), (2, 2), (2, 2)]),
     (-1, [(1, 1), (1, 2), (2, 3)]), (1, [(1, 2), (2, 2), (2, 3)]),
     (1, [(1, 3), (1, 3), (3, 1)]), (-1, [(1, 3), (2, 3), (3, 2)]),
     (-1, [(1, 1), (1, 3), (3, 3)]), (1, [(1, 3), (2, 2), (3, 3)])],
    [(1, [(1, 1), (1, 3), (2, 1)]), (-1, [(1, 1), (1, 1), (2, 3)]),
     (-1, [(1, 2), (2, 1), (2, 3)]), (1, [(1, 1), (2, 2), (2, 3)]),
     (1, [(2, 3), (2, 3), (3, 2)]), (-1, [(1, 3), (2, 1), (3, 3)]),
     (1, [(1, 1), (2, 3), (3, 3)]), (-1, [(2, 2), (2, 3), (3, 3)])],
    [(-1, [(1, 1), (2, 2), (3, 1)]), (1, [(2, 2), (2, 2), (3, 1)]),
     (-1, [(1, 3), (3, 1), (3, 1)]), (1, [(1, 1), (2, 1), (3, 2)]),
     (-1, [(2, 1), (2, 2), (3, 2)]), (1, [(2, 3), (3, 1), (3, 2)]),
     (1, [(1, 1), (3, 1), (3, 3)]), (-1, [(2, 2), (3, 1), (3, 3)])],
    [(1, [(1, 1), (1, 2), (3, 1)]), (-1, [(1, 1), (1, 1), (3, 2)]),
     (-1, [(1, 2), (2, 1), (3, 2)]), (1, [(1, 1), (2, 2), (3, 2)]),
     (1, [(2, 3), (3, 2), (3, 2)]), (-1, [(1, 2), (3, 1), (3, 3)]),
     (1, [(1, 1), (3, 2), (3, 3)]), (-1, [(2, 2), (3, 2), (3, 3)])],
    [(1, [(1, 2), (2, 1), (2, 1)]), (-1, [(1, 1), (2, 1), (2, 2)]),
     (-1, [(1, 1), (2, 3), (3, 1)]), (-1, [(2, 1), (2, 3), (3, 2)]),
     (1, [(1, 1), (2, 1), (3, 3)]), (1, [(2, 1), (2, 2), (3, 3)]),
     (1, [(2, 3), (3, 1), (3, 3)]), (-1, [(2, 1), (3, 3), (3, 3)])],
    [(1, [(1, 2), (1, 2), (2, 1)]), (-1, [(1, 1), (1, 2), (2, 2)]),
     (-1, [(1, 1), (1, 3), (3, 2)]), (-1, [(1, 2), (2, 3), (3, 2)]),
     (1, [(1, 1), (1, 2), (3, 3)]), (1, [(1, 2), (2, 2), (3, 3)]),
     (1, [(1, 3), (3, 2), (3, 3)]), (-1, [(1, 2), (3, 3), (3, 3)])],
]

_LISTED3_TWELVE_TERM = [
    [(1, [(1, 1), (1, 2), (2, 1)]), (-1, [(1, 1), (1, 1), (2, 2)]),
     (-1, [(1, 2), (2, 1), (2, 2)]), (1, [(1, 1), (2, 2), (2, 2)]),
     (-1, [(1, 1), (1, 3), (3, 1)]), (1, [(2, 2), (2, 3), (3, 2)]),
     (1, [(1, 1), (1, 1), (3, 3)]), (-1, [(2, 2), (2, 2), (3, 3)]),
     (1, [(1, 3), (3, 1), (3, 3)]), (-1, [(2, 3), (3, 2), (3, 3)]),
     (-1, [(1, 1), (3, 3), (3, 3)]), (1, [(2, 2), (3, 3), (3, 3)])],
]


def gens_common_mixture_listed3() -> List[Invariant]:
    """The twenty generators of the common-diagonal mixture model, I=3.

    Grouped by term count: 1 binomial, 12 four-term, 6 eight-term and one
    twelve-term polynomial.  Entry 10 of the four-term group carries a
    one-sign correction documented in `nonvanishing_variants_report`.
    """
    out = []
    for k, terms in enumerate(_LISTED3_BINOMIAL, 1):
        out.append(Invariant(f"common-mixture-3 binomial #{k}", _poly(3, terms)))
    for k, terms in enumerate(_LISTED3_FOUR_TERM, 1):
        out.append(Invariant(f"common-mixture-3 4-term #{k}", _poly(3, terms)))
    for k, terms in enumerate(_LISTED3_EIGHT_TERM, 1):
        out.append(Invariant(f"common-mixture-3 8-term #{k}", _poly(3, terms)))
    for k, terms in enumerate(_LISTED3_TWELVE_TERM, 1):
        out.append(Invariant(f"common-mixture-3 12-term #{k}", _poly(3, terms)))
    return out


def listed_mixture_term_counts() -> dict:
    """Term-count metadata of the I=3 mixture list: {terms: how many}."""
    return {2: 1, 4: 12, 8: 6, 12: 1}


# ---------------------------------------------------------------------------
# common-diagonal-effect: mixture invariant families for general I
# ---------------------------------------------------------------------------

def _diag_balance_poly(I, i, j, k, l, m, n) -> CellPolynomial:
    return _poly(I, [
        (1, [(i, j), (k, l), (n, n)]),
        (-1, [(i, j), (n, l), (k, n)]),
        (-1, [(i, j), (k, l), (m, m)]),
        (1, [(k, l), (m, j), (i, m)]),
    ])


def _mixed8_poly(I, i, j, k, diag_square_sign=-1) -> CellPolynomial:
    return _poly(I, [
        (1, [(i, j), (i, i), (k, k)]),
        (1, [(i, j), (j, j), (k, k)]),
        (-1, [(i, j), (i, i), (j, j)]),
        (diag_square_sign, [(i, j), (k, k), (k, k)]),
        (1, [(k, k), (i, k), (k, j)]),
        (-1, [(i, i), (i, k), (k, j)]),
        (1, [(i, j), (i, j), (j, i)]),
        (-1, [(i, j), (k, j), (j, k)]),
    ])


def _diag12_poly(I, i, j, k) -> CellPolynomial:
    return _poly(I, [
        (1, [(i, i), (j, j), (j, j)]),
        (1, [(i, i), (i, i), (k, k)]),
        (1, [(j, j), (k, k), (k, k)]),
        (-1, [(i, i), (i, i), (j, j)]),
        (-1, [(j, j), (j, j), (k, k)]),
        (-1, [(i, i), (k, k), (k, k)]),
        (1, [(i, i), (i, j), (j, i)]),
        (-1, [(i, i), (i, k), (k, i)]),
        (1, [(j, j), (j, k), (k, j)]),
        (-1, [(j, j), (j, i), (i, j)]),
        (1, [(k, k), (k, i), (i, k)]),
        (-1, [(k, k), (k, j), (j, k)]),
    ])


def gens_common_mixture_families(I: int, mixed8_square_sign: int = -1) -> List[Invariant]:
    """Structured invariant families of the common-diagonal mixture model.

    Five families over explicit index sets:

    - minor: 2x2 off-diagonal minors over four pairwise distinct indices
      (empty for I=3),
    - cycle: one degree-3 cycle binomial per unordered triple,
    - diagbal: four-term relations balancing two diagonal cells against a
      pair of off-diagonal products, over all tuples (i,j,k,l,m,n) with
      (i,j) != (k,l) off-diagonal, m outside {i,j}, n outside {k,l}, m != n,
    - mixed8: eight-term relations on (i,j,k) with i != j, k outside {i,j},
    - diag12: twelve-term relations in the diagonal cells, one per
      unordered triple.

    `mixed8_square_sign` is the sign of the p[i,j]*p[k,k]^2 term; the
    default -1 is the only choice that vanishes on the model (see
    `nonvanishing_variants_report` for the +1 variant).
    """
    if I < 3:
        raise InputError("common-diagonal mixture families need I >= 3")
    if mixed8_square_sign not in (1, -1):
        raise InputError("mixed8_square_sign must be +1 or -1")
    out = []
    idx = range(1, I + 1)
    for i in idx:
        for k in idx:
            if k <= i:
                continue
            for j in idx:
                if j in (i, k):
                    continue
                for l in idx:
                    if l <= j or l in (i, k):
                        continue
                    out.append(Invariant(f"minor[{i},{k}|{j},{l}]", _offdiag_minor(I, i, k, j, l)))
    for a in idx:
        for b in idx:
            if b <= a:
                continue
            for c in idx:
                if c <= b:
                    continue
                out.append(Invariant(f"cycle[{a},{b},{c}]", _cycle_binomial(I, a, b, c)))
    for i in idx:
        for j in idx:
            if i == j:
                continue
            for k in idx:
                for l in idx:
                    if k == l or (k, l) == (i, j):
                        continue
                    for m in idx:
                        if m in (i, j):
                            continue
                        for n in idx:
                            if n in (k, l) or n == m:
                                continue
                            out.append(Invariant(
                                f"diagbal[{i},{j};{k},{l};{m},{n}]",
                                _diag_balance_poly(I, i, j, k, l, m, n),
                            ))
    for i in idx:
        for j in idx:
            if i == j:
                continue
            for k in idx:
                if k in (i, j):
                    continue
                out.append(Invariant(f"mixed8[{i},{j},{k}]",
                                     _mixed8_poly(I, i, j, k, mixed8_square_sign)))
    for a in idx:
        for b in idx:
            if b <= a:
                continue
            for c in idx:
                if c <= b:
                    continue
                out.append(Invariant(f"diag12[{a},{b},{c}]", _diag12_poly(I, a, b, c)))
    return out


# ---------------------------------------------------------------------------
# moves and vanishing reports
# ---------------------------------------------------------------------------

def moves_to_binomials(moves: Sequence[Move]) -> List[CellPolynomial]:
    """The pure binomial p^{m+} - p^{m-} of each move."""
    out = []
    for move in moves:
        flat = [x for row in move.cells for x in row]
        if all(x == 0 for x in flat):
            raise InputError("the zero move has no binomial")
        pos = {}
        neg = {}
        for v, x in enumerate(flat):
            if x > 0:
                pos[v] = x
            elif x < 0:
                neg[v] = -x
        out.append(CellPolynomial(move.size, {
            tuple(sorted(pos.items())): Fraction(1),
            tuple(sorted(neg.items())): Fraction(-1),
        }))
    return out


@dataclass(frozen=True)
class VanishingReport:
    """Exact values of a batch of polynomials at one probability table."""

    entries: tuple  # of (name, Fraction)

    @property
    def all_zero(self) -> bool:
        return all(v == 0 for _, v in self.entries)

    def failures(self) -> List[Tuple[str, Fraction]]:
        return [(name, v) for name, v in self.entries if v != 0]

    def summary(self) -> str:
        bad = self.failures()
        if not bad:
            return f"all {len(self.entries)} polynomials vanish exactly"
        lines = [f"{len(bad)} of {len(self.entries)} polynomials do NOT vanish:"]
        lines += [f"  {name}: {value}" for name, value in bad]
        return "\n".join(lines)


def _as_invariants(polys) -> List[Invariant]:
    out = []
    for k, item in enumerate(polys, 1):
        if isinstance(item, Invariant):
            out.append(item)
        elif isinstance(item, CellPolynomial):
            out.append(Invariant(f"poly #{k}", item))
        else:
            name, poly = item
            out.append(Invariant(name, poly))
    return out


def check_vanishing(polys, P: ProbTable) -> VanishingReport:
    """Evaluate every polynomial exactly at P; pass iff every value is 0."""
    invs = _as_invariants(polys)
    return VanishingReport(entries=tuple((inv.name, inv.poly.evaluate(P)) for inv in invs))


def nonvanishing_variants_report(point: Optional[ProbTable] = None) -> List[dict]:
    """Evidence for the two single-sign choices in the generator lists.

    Evaluates the rejected sign variants at an interior common-diagonal
    mixture point and returns, for each, the failing polynomial, the
    monomial whose sign distinguishes the forms, and the nonzero witness
    value.  The emitted forms evaluate to exactly zero at the same point.
    """
    from .params import MixtureParams, mixture_point

    if point is None:
        third = Fraction(1, 3)
        point = mixture_point(MixtureParams(
            alpha=Fraction(3, 5),
            r=(Fraction(1, 2), Fraction(1, 3), Fraction(1, 6)),
            c=(Fraction(2, 5), Fraction(2, 5), Fraction(1, 5)),
            d=(third, third, third),
        ))
    reports = []
    variant = _poly(3, _LISTED3_FOUR_TERM_10_VARIANT)
    emitted = _poly(3, _LISTED3_FOUR_TERM[9])
    reports.append({
        "name": "common-mixture-3 4-term #10",
        "suspect_monomial": "p[2,2]*p[3,1]*p[3,2]",
        "variant_value": variant.evaluate(point),
        "emitted_value": emitted.evaluate(point),
        "variant_polynomial": str(variant),
        "emitted_polynomial": str(emitted),
    })
    variant_g = _mixed8_poly(3, 1, 2, 3, diag_square_sign=1)
    emitted_g = _mixed8_poly(3, 1, 2, 3, diag_square_sign=-1)
    reports.append({
        "name": "mixed8[1,2,3]",
        "suspect_monomial": "p[1,2]*p[3,3]^2",
        "variant_value": variant_g.evaluate(point),
        "emitted_value": emitted_g.evaluate(point),
        "variant_polynomial": str(variant_g),
        "emitted_polynomial": str(emitted_g),
    })
    return reports
