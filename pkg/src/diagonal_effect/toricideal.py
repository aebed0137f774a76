"""Design matrices, integer kernels, and toric ideals of the model families.

The pipeline is: model -> design matrix A -> lattice basis of ker(A^t) ->
binomial lattice ideal -> saturation with respect to the product of all
cell variables, which yields the full toric ideal.  Saturation is done
variable by variable using the graded-reverse-lexicographic trick (valid
because every lattice binomial here is degree-homogeneous); an auxiliary
variable elimination route is kept as an independent cross-check.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence

from .errors import InputError, InvariantViolationError
from .groebner import (
    DEFAULT_MAX_PAIRS,
    buchberger,
    normal_form,
    reduce_basis,
)
from .polynomials import CellPolynomial, TermOrder, binomial_from_vector, mono_div
from .tables import ModelFamily, ModelForm, ModelSpec


@dataclass(frozen=True)
class DesignMatrix:
    """Cell-by-parameter exponent matrix of a toric model.

    Rows are cells in row-major order; columns are parameters.  A^t maps a
    count table to its sufficient statistic.
    """

    model: ModelSpec
    rows: tuple
    param_names: tuple

    @property
    def size(self) -> int:
        return self.model.size

    @property
    def num_params(self) -> int:
        return len(self.param_names)


def design_matrix(model: ModelSpec, I: Optional[int] = None) -> DesignMatrix:
    """Design matrix of a toric-form model family."""
    if I is not None and I != model.size:
        raise InputError(f"explicit size {I} conflicts with model size {model.size}")
    if model.form is not ModelForm.TORIC:
        raise InputError("design matrices exist only for toric-form models")
    I = model.size
    names: List[str] = [f"r{i}" for i in range(1, I + 1)] + [f"c{j}" for j in range(1, I + 1)]
    if model.family is ModelFamily.DIAGONAL_EFFECT:
        names += [f"g{i}" for i in range(1, I + 1)]
    elif model.family is ModelFamily.COMMON_DIAGONAL_EFFECT:
        names += ["g"]
    rows = []
    for i in range(I):
        for j in range(I):
            row = [0] * len(names)
            row[i] = 1
            row[I + j] += 1
            if i == j:
                if model.family is ModelFamily.DIAGONAL_EFFECT:
                    row[2 * I + i] = 1
                elif model.family is ModelFamily.COMMON_DIAGONAL_EFFECT:
                    row[2 * I] = 1
            rows.append(tuple(row))
    return DesignMatrix(model=model, rows=tuple(rows), param_names=tuple(names))


def transpose_apply(A: DesignMatrix, grid) -> tuple:
    """A^t applied to an integer table (count table, move, or raw grid)."""
    cells = grid.cells if hasattr(grid, "cells") else grid
    flat = [x for row in cells for x in row]
    if len(flat) != len(A.rows):
        raise InputError(f"table has {len(flat)} cells, design matrix expects {len(A.rows)}")
    out = [0] * A.num_params
    for value, row in zip(flat, A.rows):
        if value:
            for h, a in enumerate(row):
                if a:
                    out[h] += value * a
    return tuple(out)


def integer_kernel(A: DesignMatrix) -> List[tuple]:
    """Lattice basis of the integer kernel of A^t, as I x I grids.

    Row-reduces [A | identity] with unimodular integer row operations; the
    identity-side rows opposite the zero rows of the reduced A form a basis
    of the full kernel lattice (not merely a finite-index sublattice).
    """
    n = len(A.rows)
    s = A.num_params
    aug = [list(A.rows[i]) + [1 if k == i else 0 for k in range(n)] for i in range(n)]
    piv = 0
    for col in range(s):
        pivot_row = None
        for r in range(piv, n):
            if aug[r][col] != 0:
                pivot_row = r
                break
        if pivot_row is None:
            continue
        aug[piv], aug[pivot_row] = aug[pivot_row], aug[piv]
        if aug[piv][col] < 0:
            aug[piv] = [-x for x in aug[piv]]
        for r in range(piv + 1, n):
            while aug[r][col] != 0:
                q = aug[r][col] // aug[piv][col]
                if q:
                    aug[r] = [a - q * b for a, b in zip(aug[r], aug[piv])]
                if aug[r][col] != 0:
                    aug[piv], aug[r] = aug[r], aug[piv]
                    if aug[piv][col] < 0:
                        aug[piv] = [-x for x in aug[piv]]
        piv += 1
    I = A.size
    basis = []
    for r in range(piv, n):
        if any(aug[r][:s]):
            raise InvariantViolationError("row echelon left a nonzero row above the kernel block")
        vec = aug[r][s:]
        first = next((x for x in vec if x != 0), 0)
        if first < 0:
            vec = [-x for x in vec]
        grid = tuple(tuple(vec[i * I + j] for j in range(I)) for i in range(I))
        if transpose_apply(A, grid) != (0,) * s:
            raise InvariantViolationError("kernel vector fails A^t v = 0")
        basis.append(grid)
    basis.sort()
    return basis


def lattice_binomials(A: DesignMatrix) -> List[CellPolynomial]:
    I = A.size
    out = []
    for grid in integer_kernel(A):
        flat = [x for row in grid for x in row]
        out.append(binomial_from_vector(flat, I))
    return out


@dataclass(frozen=True)
class GroebnerBasis:
    """A reduced, monic Groebner basis together with its term order."""

    generators: tuple
    order: TermOrder

    def describe_order(self) -> str:
        return self.order.describe()


def groebner(
    gens: Sequence[CellPolynomial],
    order: Optional[TermOrder] = None,
    max_pairs: int = DEFAULT_MAX_PAIRS,
    max_degree: Optional[int] = 12,
) -> GroebnerBasis:
    """Reduced Groebner basis of `gens` (grevlex over the cells by default)."""
    gens = [g for g in gens if not g.is_zero()]
    if not gens:
        raise InputError("cannot take a Groebner basis of an empty generating set")
    size = gens[0].size
    if order is None:
        order = TermOrder.grevlex(range(size * size))
    basis = buchberger(gens, order, max_pairs=max_pairs, max_degree=max_degree)
    return GroebnerBasis(generators=tuple(basis), order=order)


def _divide_out_variable(poly: CellPolynomial, var: int) -> CellPolynomial:
    shared = min((dict(m).get(var, 0) for m in poly.terms), default=0)
    if shared == 0:
        return poly
    divisor = ((var, shared),)
    return CellPolynomial(poly.size, {mono_div(m, divisor): c for m, c in poly.terms.items()})


def _saturate_homogeneous(
    gens: List[CellPolynomial],
    variables: Sequence[int],
    max_pairs: int,
    max_degree: Optional[int],
) -> List[CellPolynomial]:
    """Saturation of a degree-homogeneous ideal by the product of `variables`.

    One variable at a time: compute a grevlex basis with that variable in
    the cheapest position, then strip the common factor from each basis
    element.  Homogeneity makes the stripped set a basis of the quotient by
    that variable's powers.
    """
    for g in gens:
        degrees = {sum(e for _, e in m) for m in g.terms}
        if len(degrees) > 1:
            raise InvariantViolationError("saturation shortcut requires homogeneous generators")
    current = gens
    for v in variables:
        order_v = TermOrder.grevlex_last(variables, v)
        basis = buchberger(current, order_v, max_pairs=max_pairs, max_degree=max_degree)
        current = [_divide_out_variable(g, v) for g in basis]
    return current


def toric_ideal(
    model: ModelSpec,
    I: Optional[int] = None,
    method: str = "saturation",
    max_pairs: int = DEFAULT_MAX_PAIRS,
    max_degree: Optional[int] = None,
) -> List[CellPolynomial]:
    """Generators of the toric ideal of a model, from its design matrix.

    method "saturation": per-variable saturation of the lattice ideal
    (fast, stays binomial).  method "elimination": adjoin t, add
    t * (product of all cells) - 1, eliminate t with a block order.  Both
    agree; the test suite checks that on I = 3.

    Sizes above 4 are rejected: basis computations there are outside this
    package's desk-scale guarantees.
    """
    if I is not None and I != model.size:
        raise InputError(f"explicit size {I} conflicts with model size {model.size}")
    I = model.size
    if I > 4:
        raise InputError("toric_ideal supports sizes up to 4")
    A = design_matrix(model)
    gens = lattice_binomials(A)
    if not gens:
        return []
    n_cells = I * I
    cell_vars = list(range(n_cells))

    if method == "saturation":
        result = _saturate_homogeneous(gens, cell_vars, max_pairs, max_degree)
        result = reduce_basis(result, TermOrder.grevlex(cell_vars))
    elif method == "elimination":
        aux = n_cells
        product_all = tuple(sorted((v, 1) for v in cell_vars + [aux]))
        rabinowitsch = CellPolynomial(I, {
            product_all: Fraction(1),
            (): Fraction(-1),
        })
        order = TermOrder.elimination([aux], cell_vars)
        basis = buchberger(gens + [rabinowitsch], order, max_pairs=max_pairs, max_degree=max_degree)
        kept = [g for g in basis if aux not in g.variables()]
        result = reduce_basis(kept, TermOrder.grevlex(cell_vars))
    else:
        raise InputError(f"unknown method {method!r}; use 'saturation' or 'elimination'")

    for g in result:
        if not g.sign_canonical().is_pure_binomial():
            raise InvariantViolationError(
                f"toric ideal generator is not a pure binomial: {g}"
            )
    return [g.sign_canonical() for g in result]


def ideal_equal(
    gens1: Sequence[CellPolynomial],
    gens2: Sequence[CellPolynomial],
    max_pairs: int = DEFAULT_MAX_PAIRS,
    max_degree: Optional[int] = None,
) -> bool:
    """True iff the two generating sets span the same ideal.

    Each generator of either side must reduce to zero modulo a Groebner
    basis of the other.
    """
    list1 = [g for g in gens1 if not g.is_zero()]
    list2 = [g for g in gens2 if not g.is_zero()]
    if not list1 or not list2:
        return not list1 and not list2
    if list1[0].size != list2[0].size:
        raise InputError("generating sets live over different table sizes")
    size = list1[0].size
    order = TermOrder.grevlex(range(size * size))
    gb1 = buchberger(list1, order, max_pairs=max_pairs, max_degree=max_degree)
    gb2 = buchberger(list2, order, max_pairs=max_pairs, max_degree=max_degree)
    return all(normal_form(g, gb1, order).is_zero() for g in list2) and all(
        normal_form(g, gb2, order).is_zero() for g in list1
    )


def in_ideal(
    poly: CellPolynomial,
    gens: Sequence[CellPolynomial],
    max_pairs: int = DEFAULT_MAX_PAIRS,
    max_degree: Optional[int] = None,
) -> bool:
    gens = [g for g in gens if not g.is_zero()]
    if not gens:
        return poly.is_zero()
    order = TermOrder.grevlex(range(gens[0].size * gens[0].size))
    gb = buchberger(gens, order, max_pairs=max_pairs, max_degree=max_degree)
    return normal_form(poly, gb, order).is_zero()
