"""Buchberger's algorithm over exact rationals, with explicit budgets.

Works on `CellPolynomial` values under a `TermOrder`.  Inputs here are
mostly binomials (lattice ideals), for which S-polynomials and reductions
stay two-term, so the normal selection strategy plus the coprimality
criterion is enough; budgets turn pathological inputs into loud errors
rather than silent truncation.
"""

from __future__ import annotations

import heapq
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .errors import BudgetExceededError, InputError
from .polynomials import (
    CellPolynomial,
    Monomial,
    TermOrder,
    mono_coprime,
    mono_degree,
    mono_div,
    mono_lcm,
)

DEFAULT_MAX_PAIRS = 100_000
DEFAULT_MAX_DEGREE: Optional[int] = 12


def leading_term(poly: CellPolynomial, order: TermOrder) -> Tuple[Monomial, Fraction]:
    if poly.is_zero():
        raise InputError("the zero polynomial has no leading term")
    m = max(poly.terms, key=order.key)
    return m, poly.terms[m]


def monic(poly: CellPolynomial, order: TermOrder) -> CellPolynomial:
    _, lc = leading_term(poly, order)
    return poly if lc == 1 else poly.scaled(Fraction(1) / lc)


def normal_form(f: CellPolynomial, basis: Sequence[CellPolynomial], order: TermOrder) -> CellPolynomial:
    """Full remainder of f under multivariate division by `basis`."""
    leads = [(g, *leading_term(g, order)) for g in basis if not g.is_zero()]
    work = dict(f.terms)
    remainder = {}
    while work:
        m = max(work, key=order.key)
        c = work.pop(m)
        if c == 0:
            continue
        for g, lm, lc in leads:
            if _divides(lm, m):
                q = mono_div(m, lm)
                factor = c / lc
                for gm, gc in g.terms.items():
                    if gm == lm:
                        continue
                    key = _mul(gm, q)
                    work[key] = work.get(key, Fraction(0)) - factor * gc
                    if work[key] == 0:
                        del work[key]
                break
        else:
            remainder[m] = remainder.get(m, Fraction(0)) + c
    return CellPolynomial(f.size, remainder)


def _divides(a: Monomial, b: Monomial) -> bool:
    bd = dict(b)
    return all(bd.get(v, 0) >= e for v, e in a)


def _mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    exps = dict(a)
    for v, e in b:
        exps[v] = exps.get(v, 0) + e
    return tuple(sorted(exps.items()))


def s_polynomial(f: CellPolynomial, g: CellPolynomial, order: TermOrder) -> CellPolynomial:
    fm, fc = leading_term(f, order)
    gm, gc = leading_term(g, order)
    lcm = mono_lcm(fm, gm)
    return f.term_scaled(Fraction(1) / fc, mono_div(lcm, fm)) - g.term_scaled(
        Fraction(1) / gc, mono_div(lcm, gm)
    )


def buchberger(
    gens: Sequence[CellPolynomial],
    order: TermOrder,
    max_pairs: int = DEFAULT_MAX_PAIRS,
    max_degree: Optional[int] = DEFAULT_MAX_DEGREE,
) -> List[CellPolynomial]:
    """Reduced Groebner basis of the ideal generated by `gens`.

    Pairs are processed in increasing lcm degree (normal strategy) and
    pruned with the Gebauer-Moller criteria (coprimality, chain, and
    equal-lcm dedup).  `max_pairs` caps the number of S-pairs examined and
    `max_degree` the lcm degree of any pair that must be processed;
    exceeding either raises BudgetExceededError.
    """
    basis: List[CellPolynomial] = []
    for g in gens:
        if not g.is_zero():
            basis.append(monic(g, order))
    if not basis:
        return []

    leads: List[Monomial] = [leading_term(g, order)[0] for g in basis]
    heap: List[tuple] = []
    alive = {}  # (i, j) -> lcm monomial, pairs not yet discarded

    def add_generator_pairs(t: int):
        lt = leads[t]
        lcms = {i: mono_lcm(leads[i], lt) for i in range(t)}
        # chain criterion on existing pairs: (i, j) is redundant once the
        # new leading term divides its lcm and both flanking pairs differ
        for (i, j), lcm_ij in list(alive.items()):
            if (
                _divides(lt, lcm_ij)
                and lcms[i] != lcm_ij
                and lcms[j] != lcm_ij
            ):
                del alive[(i, j)]
        keep: List[int] = []
        for i in sorted(lcms):
            lcm_i = lcms[i]
            if mono_coprime(leads[i], lt):
                continue  # S-polynomial reduces to zero
            if any(lcms[j] != lcm_i and _divides(lcms[j], lcm_i) for j in lcms):
                continue  # properly divisible lcm: covered by a smaller pair
            if any(lcms[j] == lcm_i for j in keep):
                continue  # one representative per lcm
            keep.append(i)
        for i in keep:
            lcm_i = lcms[i]
            alive[(i, t)] = lcm_i
            heapq.heappush(heap, (mono_degree(lcm_i), order.key(lcm_i), i, t))

    for t in range(len(basis)):
        add_generator_pairs(t)

    processed = 0
    while heap:
        degree, _, i, j = heapq.heappop(heap)
        if alive.pop((i, j), None) is None:
            continue  # pruned after scheduling
        if max_degree is not None and degree > max_degree:
            raise BudgetExceededError(
                f"S-pair lcm degree {degree} exceeds the cap {max_degree}"
            )
        processed += 1
        if processed > max_pairs:
            raise BudgetExceededError(f"S-pair budget of {max_pairs} pairs exceeded")
        s = s_polynomial(basis[i], basis[j], order)
        r = normal_form(s, basis, order)
        if not r.is_zero():
            basis.append(monic(r, order))
            leads.append(leading_term(basis[-1], order)[0])
            add_generator_pairs(len(basis) - 1)

    return reduce_basis(basis, order)


def reduce_basis(basis: Sequence[CellPolynomial], order: TermOrder) -> List[CellPolynomial]:
    """Minimalize and tail-reduce a Groebner basis; output is the reduced
    basis, monic, deterministically sorted by leading monomial."""
    nonzero = [monic(g, order) for g in basis if not g.is_zero()]
    # drop duplicates and any generator whose leading monomial another divides
    by_lead = sorted(nonzero, key=lambda g: order.key(leading_term(g, order)[0]))
    minimal: List[CellPolynomial] = []
    lead_monos: List[Monomial] = []
    for g in by_lead:
        lm, _ = leading_term(g, order)
        if any(_divides(other, lm) for other in lead_monos):
            continue
        minimal.append(g)
        lead_monos.append(lm)
    reduced = []
    for k, g in enumerate(minimal):
        others = minimal[:k] + minimal[k + 1:]
        r = normal_form(g, others, order) if others else g
        if not r.is_zero():
            reduced.append(monic(r, order))
    reduced.sort(key=lambda g: (order.key(leading_term(g, order)[0]), g.canonical_key()))
    return reduced


def reduces_to_zero(poly: CellPolynomial, groebner_basis: Sequence[CellPolynomial], order: TermOrder) -> bool:
    return normal_form(poly, groebner_basis, order).is_zero()


def spoly_reductions_all_zero(groebner_basis: Sequence[CellPolynomial], order: TermOrder) -> bool:
    """Buchberger criterion as a verification: every S-polynomial of basis
    pairs reduces to zero."""
    for i in range(len(groebner_basis)):
        for j in range(i + 1, len(groebner_basis)):
            s = s_polynomial(groebner_basis[i], groebner_basis[j], order)
            if not reduces_to_zero(s, groebner_basis, order):
                return False
    return True
