"""Model parametrizations, normalizing constants, and fitted expected counts.

The toric form uses three nonnegative parameter vectors (row, column,
diagonal); the mixture form blends a rank-one table with a diagonal table.
All points are produced in exact rational arithmetic.  The iterative
proportional fit at the bottom is the one deliberately floating-point
computation: its limit is irrational in general, and it only feeds the
chi-square statistic of the exact tests, never the exact algebra.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from .errors import ConvergenceError, InputError
from .tables import CountTable, ModelFamily, ModelForm, ModelSpec, ProbTable

IPF_TOLERANCE = 1e-10
IPF_MAX_SWEEPS = 10_000

# Random rational points draw numerators uniformly from 1..100 over a fixed
# prime denominator: strictly positive, and coefficient growth in downstream
# exact evaluations stays bounded.
_RAND_NUM_MAX = 100
_RAND_DEN = 101


def _fraction_vector(values: Sequence) -> tuple:
    return tuple(Fraction(v) for v in values)


@dataclass(frozen=True)
class ToricParams:
    """Parameters (zeta_r, zeta_c, zeta_g) of the toric form.

    Off-diagonal cells get zeta_r[i]*zeta_c[j]; diagonal cells pick up the
    extra factor zeta_g[i].  For the common-diagonal variant all entries of
    zeta_g are equal.
    """

    zeta_r: tuple
    zeta_c: tuple
    zeta_g: tuple

    def __post_init__(self):
        object.__setattr__(self, "zeta_r", _fraction_vector(self.zeta_r))
        object.__setattr__(self, "zeta_c", _fraction_vector(self.zeta_c))
        object.__setattr__(self, "zeta_g", _fraction_vector(self.zeta_g))
        if not (len(self.zeta_r) == len(self.zeta_c) == len(self.zeta_g)):
            raise InputError("zeta vectors must share one length")
        for name, vec in (("zeta_r", self.zeta_r), ("zeta_c", self.zeta_c), ("zeta_g", self.zeta_g)):
            if any(x < 0 for x in vec):
                raise InputError(f"{name} has a negative entry")
        if all(x == 0 for x in self.zeta_r):
            raise InputError("zeta_r is identically zero; table cannot be normalized")
        if all(x == 0 for x in self.zeta_c):
            raise InputError("zeta_c is identically zero; table cannot be normalized")

    @property
    def size(self) -> int:
        return len(self.zeta_r)

    def is_strictly_positive(self) -> bool:
        return all(x > 0 for vec in (self.zeta_r, self.zeta_c, self.zeta_g) for x in vec)

    def has_common_diagonal(self) -> bool:
        return len(set(self.zeta_g)) == 1


@dataclass(frozen=True)
class MixtureParams:
    """Parameters (alpha, r, c, d) of the mixture form.

    r, c, d are probability vectors; the table is alpha * (r c outer
    product) plus (1-alpha) on the diagonal d.  The common-diagonal variant
    fixes d to the uniform vector.
    """

    alpha: Fraction
    r: tuple
    c: tuple
    d: tuple

    def __post_init__(self):
        object.__setattr__(self, "alpha", Fraction(self.alpha))
        object.__setattr__(self, "r", _fraction_vector(self.r))
        object.__setattr__(self, "c", _fraction_vector(self.c))
        object.__setattr__(self, "d", _fraction_vector(self.d))
        if not (0 <= self.alpha <= 1):
            raise InputError(f"alpha must lie in [0,1], got {self.alpha}")
        if not (len(self.r) == len(self.c) == len(self.d)):
            raise InputError("r, c, d must share one length")
        for name, vec in (("r", self.r), ("c", self.c), ("d", self.d)):
            if any(x < 0 for x in vec):
                raise InputError(f"{name} has a negative entry")
            if sum(vec) != 1:
                raise InputError(f"{name} must sum to exactly 1, got {sum(vec)}")

    @property
    def size(self) -> int:
        return len(self.r)

    def is_strictly_positive(self) -> bool:
        return (
            self.alpha > 0
            and all(x > 0 for x in self.r)
            and all(x > 0 for x in self.c)
            and (self.alpha == 1 or all(x > 0 for x in self.d))
        )

    def has_common_diagonal(self) -> bool:
        I = self.size
        return all(x == Fraction(1, I) for x in self.d)

    @classmethod
    def uniform_diagonal(cls, alpha, r, c) -> "MixtureParams":
        I = len(tuple(r))
        return cls(alpha=alpha, r=r, c=c, d=tuple(Fraction(1, I) for _ in range(I)))


@dataclass(frozen=True)
class Normalizers:
    """N = sum zeta_r_i zeta_c_j; N_T = same sum with the diagonal factors."""

    N: Fraction
    N_T: Fraction


def normalizers(params: ToricParams) -> Normalizers:
    """Exact normalizing constants of the toric parametrization."""
    n = sum(params.zeta_r) * sum(params.zeta_c)
    diag_excess = sum(
        params.zeta_r[i] * params.zeta_c[i] * (params.zeta_g[i] - 1) for i in range(params.size)
    )
    return Normalizers(N=n, N_T=n + diag_excess)


def toric_point(params: ToricParams) -> Tuple[ProbTable, Normalizers]:
    """The normalized probability table of the toric parametrization.

    Raw cells are zeta_r[i]*zeta_c[j] off the diagonal and
    zeta_r[i]*zeta_c[i]*zeta_g[i] on it; dividing by N_T puts the point in
    the probability simplex.
    """
    norms = normalizers(params)
    if norms.N_T <= 0:
        raise InputError("degenerate parameters: N_T must be positive")
    I = params.size
    cells = tuple(
        tuple(
            params.zeta_r[i] * params.zeta_c[j] * (params.zeta_g[i] if i == j else 1) / norms.N_T
            for j in range(I)
        )
        for i in range(I)
    )
    return ProbTable(size=I, cells=cells), norms


def mixture_point(params: MixtureParams) -> ProbTable:
    """alpha * rank-one table + (1 - alpha) * diagonal table, exactly."""
    I = params.size
    a = params.alpha
    cells = tuple(
        tuple(
            a * params.r[i] * params.c[j] + ((1 - a) * params.d[i] if i == j else 0)
            for j in range(I)
        )
        for i in range(I)
    )
    return ProbTable(size=I, cells=cells)


def independence_factorize(P: ProbTable) -> Optional[Tuple[tuple, tuple]]:
    """Factor a strictly positive rank-one table into its margins.

    Returns (r, c) with r_i * c_j == p_{i,j} exactly, or None when some
    2x2 minor is nonzero.  Zero entries are outside the contract.
    """
    if not P.is_strictly_positive():
        raise InputError("independence_factorize requires a strictly positive table")
    I = P.size
    for i in range(I - 1):
        for k in range(i + 1, I):
            for j in range(I - 1):
                for h in range(j + 1, I):
                    if P.cells[i][j] * P.cells[k][h] != P.cells[i][h] * P.cells[k][j]:
                        return None
    r = tuple(sum(P.cells[i][j] for j in range(I)) for i in range(I))
    c = tuple(sum(P.cells[i][j] for i in range(I)) for j in range(I))
    return r, c


def random_rational_point(model: ModelSpec, seed: int) -> Union[ToricParams, MixtureParams]:
    """Deterministic-in-seed strictly positive parameters for `model`."""
    # String seeding is hashed with sha512 by random.seed and therefore
    # stable across processes, unlike tuple seeding.
    rng = random.Random(
        f"rational-point|{model.family.value}|{model.form.value}|{model.size}|{seed}"
    )
    I = model.size

    def raw():
        return Fraction(rng.randint(1, _RAND_NUM_MAX), _RAND_DEN)

    def raw_vector():
        return tuple(raw() for _ in range(I))

    def simplex_vector():
        v = raw_vector()
        s = sum(v)
        return tuple(x / s for x in v)

    if model.form is ModelForm.TORIC:
        zeta_r = raw_vector()
        zeta_c = raw_vector()
        if model.family is ModelFamily.COMMON_DIAGONAL_EFFECT:
            g = raw()
            zeta_g = tuple(g for _ in range(I))
        elif model.family is ModelFamily.INDEPENDENCE:
            zeta_g = tuple(Fraction(1) for _ in range(I))
        else:
            zeta_g = raw_vector()
        return ToricParams(zeta_r=zeta_r, zeta_c=zeta_c, zeta_g=zeta_g)

    alpha = Fraction(rng.randint(1, _RAND_NUM_MAX), _RAND_DEN)
    r = simplex_vector()
    c = simplex_vector()
    if model.family is ModelFamily.COMMON_DIAGONAL_EFFECT:
        d = tuple(Fraction(1, I) for _ in range(I))
    else:
        d = simplex_vector()
    return MixtureParams(alpha=alpha, r=r, c=c, d=d)


def _offdiag_support(rt, ct) -> set:
    """Cells of the off-diagonal block that can be positive under the margins.

    Gale's condition for the transportation polytope with a forbidden
    diagonal reduces to single-index checks: the block with margins
    (rt, ct) is feasible iff rt_k + ct_k <= S for every k, so cell (i, j)
    can carry positive mass iff rt_i, ct_j > 0 and every other index still
    satisfies the inequality after the transfer, i.e. strictly.
    """
    S = sum(rt)
    I = len(rt)
    supp = set()
    for i in range(I):
        if rt[i] == 0:
            continue
        for j in range(I):
            if j == i or ct[j] == 0:
                continue
            if all(rt[k] + ct[k] < S for k in range(I) if k not in (i, j)):
                supp.add((i, j))
    return supp


def _trace_constrained_support(rows, cols, diag_total) -> set:
    """Cells that can be positive given row/column margins and a fixed trace.

    Over the real polytope the trace ranges over
    [max(0, max_k(rows_k + cols_k - S)), sum_k min(rows_k, cols_k)];
    a cell is in the support iff shaving epsilon off its margins (and off
    the trace, for a diagonal cell) keeps the target trace in that range.
    """
    I = len(rows)
    S = sum(rows)
    excess = [rows[k] + cols[k] - S for k in range(I)]
    trace_max = sum(min(rows[k], cols[k]) for k in range(I))
    supp = set()
    for i in range(I):
        if rows[i] == 0:
            continue
        for j in range(I):
            if cols[j] == 0:
                continue
            if i == j:
                if diag_total > 0 and all(excess[k] < diag_total for k in range(I) if k != i):
                    supp.add((i, j))
            else:
                if diag_total == trace_max and not (rows[i] > cols[i] and cols[j] > rows[j]):
                    continue
                if all(excess[k] < diag_total for k in range(I) if k not in (i, j)):
                    supp.add((i, j))
    return supp


def _ipf(table: CountTable, fit_diag_sum: bool) -> List[List[float]]:
    """Iterative proportional fit shared by the two expected-count models.

    fit_diag_sum False: quasi-independence, diagonal cells are fixed at the
    observed counts and the off-diagonal block is scaled to the margins.
    fit_diag_sum True: common-diagonal, all cells are scaled to row margins,
    column margins and the total diagonal count.

    Cells that no table with these margins can make positive are removed
    up front; without that reduction the scaling limit can sit on the
    model boundary and margin gaps decay only like 1/sweeps.
    """
    I = table.size
    rows = table.row_margins()
    cols = table.col_margins()
    f = np.array(table.cells, dtype=float)

    if fit_diag_sum:
        diag_target = float(table.diag_sum())
        row_targets = np.array(rows, dtype=float)
        col_targets = np.array(cols, dtype=float)
        support = _trace_constrained_support(rows, cols, table.diag_sum())
    else:
        diag_target = 0.0
        row_targets = np.array([rows[i] - table.cells[i][i] for i in range(I)], dtype=float)
        col_targets = np.array([cols[j] - table.cells[j][j] for j in range(I)], dtype=float)
        support = _offdiag_support(
            [rows[i] - table.cells[i][i] for i in range(I)],
            [cols[j] - table.cells[j][j] for j in range(I)],
        )

    mask = np.zeros((I, I), dtype=bool)
    for (i, j) in support:
        mask[i, j] = True
    e = np.where(mask, 1.0, 0.0)

    def scale_rows(values, targets, axis):
        sums = values.sum(axis=axis)
        for k in range(I):
            t, s = targets[k], sums[k]
            if s > 0.0:
                if axis == 1:
                    values[k] *= t / s
                else:
                    values[:, k] *= t / s
            elif t != 0.0:
                raise ConvergenceError(
                    f"cannot fit a positive margin of {t} over an all-zero stratum"
                )

    for _ in range(IPF_MAX_SWEEPS):
        scale_rows(e, row_targets, axis=1)
        scale_rows(e, col_targets, axis=0)
        if fit_diag_sum:
            dsum = np.trace(e)
            if dsum > 0.0:
                np.fill_diagonal(e, np.diag(e) * (diag_target / dsum))
            elif diag_target != 0.0:
                raise ConvergenceError(
                    "cannot fit a positive diagonal total over a zero diagonal"
                )
        gaps = [
            np.max(np.abs(e.sum(axis=1) - row_targets)),
            np.max(np.abs(e.sum(axis=0) - col_targets)),
        ]
        if fit_diag_sum:
            gaps.append(abs(np.trace(e) - diag_target))
        if max(gaps) < IPF_TOLERANCE:
            if not fit_diag_sum:
                np.fill_diagonal(e, np.diag(f))
            return e.tolist()
    raise ConvergenceError(f"IPF did not converge within {IPF_MAX_SWEEPS} sweeps")


def quasi_independence_fit(table: CountTable) -> List[List[float]]:
    """Expected counts under the diagonal-effect (quasi-independence) model.

    The diagonal counts are sufficient, so the fitted diagonal equals the
    observed one; off-diagonal cells are fitted to the row and column
    margins by iterative proportional scaling.
    """
    return _ipf(table, fit_diag_sum=False)


def common_diagonal_fit(table: CountTable) -> List[List[float]]:
    """Expected counts fitted to row margins, column margins, and the
    diagonal total (common-diagonal-effect model)."""
    return _ipf(table, fit_diag_sum=True)


def expected_counts(table: CountTable, model: ModelSpec) -> List[List[float]]:
    if model.family is ModelFamily.DIAGONAL_EFFECT:
        return quasi_independence_fit(table)
    if model.family is ModelFamily.COMMON_DIAGONAL_EFFECT:
        return common_diagonal_fit(table)
    raise InputError(f"no expected-count fit implemented for {model.family.value}")
