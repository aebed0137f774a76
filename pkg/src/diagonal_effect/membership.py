"""Membership of toric points in the mixture model, with exact witnesses.

For a strictly positive toric point the comparison of the two normalizing
constants N and N_T decides everything: N_T < N excludes a mixture
representation outright; N_T = N forces a pure rank-one table; N_T > N
admits a mixture representation exactly when every diagonal parameter is
at least one, in which case the witness is unique and constructed in
closed form.  Boundary points fall outside that trichotomy and get a
support-pattern necessary-condition check instead.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Optional

from .errors import InputError, InvariantViolationError
from .invariants import check_vanishing, gens_diag_effect
from .params import MixtureParams, Normalizers, ToricParams, mixture_point, normalizers, toric_point
from .tables import ProbTable


class VerdictKind(Enum):
    IN_BOTH_WITH_WITNESS = "InBothWithWitness"
    TORIC_ONLY = "ToricOnly"


class ToricOnlyCase(Enum):
    """Which exclusion clause fired, in the order they are usually cited."""

    NORMALIZER_DEFICIT = "i"            # N_T < N
    EQUAL_WITH_NONUNIT_DIAGONAL = "ii"  # N_T = N, some diagonal parameter != 1
    EXCESS_WITH_SMALL_DIAGONAL = "iii"  # N_T > N, some diagonal parameter < 1


@dataclass(frozen=True)
class MembershipVerdict:
    kind: VerdictKind
    case: Optional[ToricOnlyCase]
    witness: Optional[MixtureParams]
    norms: Normalizers

    def to_json_dict(self) -> dict:
        out = {
            "verdict": self.kind.value,
            "case": self.case.value if self.case else None,
            "N": str(self.norms.N),
            "N_T": str(self.norms.N_T),
        }
        if self.witness is not None:
            out["witness"] = {
                "alpha": str(self.witness.alpha),
                "r": [str(x) for x in self.witness.r],
                "c": [str(x) for x in self.witness.c],
                "d": [str(x) for x in self.witness.d],
            }
        return out


def classify_toric_point(params: ToricParams) -> MembershipVerdict:
    """Decide whether a strictly positive toric point admits a mixture form.

    Requires every parameter entry strictly positive (the interior case).
    When a witness exists it is returned and verified: recomposing it
    reproduces the toric probability table cell for cell, exactly.
    """
    if not params.is_strictly_positive():
        raise InputError(
            "classification needs strictly positive parameters; "
            "use boundary_membership_check for tables with zero cells"
        )
    I = params.size
    norms = normalizers(params)
    n, nt = norms.N, norms.N_T
    gamma = params.zeta_g

    if nt < n:
        return MembershipVerdict(VerdictKind.TORIC_ONLY, ToricOnlyCase.NORMALIZER_DEFICIT, None, norms)

    sum_r = sum(params.zeta_r)
    sum_c = sum(params.zeta_c)
    r = tuple(x / sum_r for x in params.zeta_r)
    c = tuple(x / sum_c for x in params.zeta_c)

    if nt == n:
        if any(g != 1 for g in gamma):
            return MembershipVerdict(
                VerdictKind.TORIC_ONLY, ToricOnlyCase.EQUAL_WITH_NONUNIT_DIAGONAL, None, norms
            )
        # pure independence: alpha = 1, any d works; fix the uniform one
        witness = MixtureParams(alpha=Fraction(1), r=r, c=c,
                                d=tuple(Fraction(1, I) for _ in range(I)))
        return _verified(params, witness, norms)

    if any(g < 1 for g in gamma):
        return MembershipVerdict(
            VerdictKind.TORIC_ONLY, ToricOnlyCase.EXCESS_WITH_SMALL_DIAGONAL, None, norms
        )
    excess = nt - n
    d = tuple(
        params.zeta_r[i] * params.zeta_c[i] * (gamma[i] - 1) / excess for i in range(I)
    )
    witness = MixtureParams(alpha=n / nt, r=r, c=c, d=d)
    return _verified(params, witness, norms)


def _verified(params: ToricParams, witness: MixtureParams, norms: Normalizers) -> MembershipVerdict:
    table, _ = toric_point(params)
    if mixture_point(witness) != table:
        raise InvariantViolationError("witness does not recompose to the toric point")
    return MembershipVerdict(VerdictKind.IN_BOTH_WITH_WITNESS, None, witness, norms)


def mixture_to_toric(params: MixtureParams) -> ToricParams:
    """Closed-form toric parameters of a strictly positive mixture point.

    zeta_r = r, zeta_c = alpha * c, and the diagonal parameters absorb the
    diagonal surplus; the resulting toric normalizer is exactly 1, so the
    toric point equals the mixture point cell for cell.
    """
    if params.alpha == 0:
        raise InputError("alpha = 0 has no toric representation (pure diagonal table)")
    if any(x == 0 for x in params.r) or any(x == 0 for x in params.c):
        raise InputError("mixture_to_toric needs strictly positive r and c")
    a = params.alpha
    zeta_g = tuple(
        1 + (1 - a) * params.d[i] / (a * params.r[i] * params.c[i])
        for i in range(params.size)
    )
    return ToricParams(zeta_r=params.r, zeta_c=tuple(a * x for x in params.c), zeta_g=zeta_g)


def toric_params_from_table(P: ProbTable) -> ToricParams:
    """Recover toric parameters from a strictly positive table of the model.

    Derived convenience, not part of the classification theory: the
    off-diagonal block determines the row and column parameters up to
    scale, and the diagonal parameters take up the rest.  Raises when the
    off-diagonal block is not of rank-one type (the table is outside the
    toric model).
    """
    if P.size < 3:
        raise InputError("parameter recovery needs I >= 3")
    if not P.is_strictly_positive():
        raise InputError("parameter recovery needs a strictly positive table")
    I = P.size
    p = P.cells
    # s_i t_j must match p_{i,j} off the diagonal; anchor t_1 = 1
    s = [Fraction(0)] * I
    t = [Fraction(0)] * I
    t[0] = Fraction(1)
    s[1] = p[1][0]
    s[2] = p[2][0]
    t[1] = p[2][1] / s[2]
    s[0] = p[0][1] / t[1]
    for j in range(2, I):
        t[j] = p[0][j] / s[0]
    for i in range(3, I):
        s[i] = p[i][0]
    for i in range(I):
        for j in range(I):
            if i != j and s[i] * t[j] != p[i][j]:
                raise InputError(
                    f"off-diagonal cells are not of product form at ({i + 1},{j + 1})"
                )
    zeta_g = tuple(p[i][i] / (s[i] * t[i]) for i in range(I))
    return ToricParams(zeta_r=tuple(s), zeta_c=tuple(t), zeta_g=zeta_g)


class BoundaryVerdict(Enum):
    RULED_OUT_M1 = "RuledOutM1"
    RULED_OUT_M2 = "RuledOutM2"
    RULED_OUT_BOTH = "RuledOutBoth"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class BoundaryReport:
    verdict: BoundaryVerdict
    invariants_vanish: bool
    toric_exclusions: tuple    # cells whose zero pattern excludes the toric form
    mixture_exclusions: tuple  # diagonal indices whose zero pattern excludes the mixture form

    def to_json_dict(self) -> dict:
        return {
            "verdict": self.verdict.value,
            "invariants_vanish": self.invariants_vanish,
            "toric_exclusions": [list(x) for x in self.toric_exclusions],
            "mixture_exclusions": list(self.mixture_exclusions),
        }


def boundary_membership_check(P: ProbTable) -> BoundaryReport:
    """Necessary-condition support checks for tables with zero cells.

    A zero diagonal cell with nonzero row and column (and a non-diagonal
    table) cannot come from the mixture form; a zero off-diagonal cell
    with nonzero row and column cannot come from the toric form.  Strictly
    positive tables are inconclusive here; classify a parametrization
    instead.
    """
    I = P.size
    rows_nonzero = [any(x != 0 for x in P.cells[i]) for i in range(I)]
    cols_nonzero = [any(P.cells[i][j] != 0 for i in range(I)) for j in range(I)]
    is_diagonal = all(P.cells[i][j] == 0 for i in range(I) for j in range(I) if i != j)

    mixture_exclusions = []
    if not is_diagonal:
        for i in range(I):
            if P.cells[i][i] == 0 and rows_nonzero[i] and cols_nonzero[i]:
                mixture_exclusions.append(i + 1)
    toric_exclusions = []
    for i in range(I):
        for j in range(I):
            if i != j and P.cells[i][j] == 0 and rows_nonzero[i] and cols_nonzero[j]:
                toric_exclusions.append((i + 1, j + 1))

    if I >= 3:
        vanish = check_vanishing(gens_diag_effect(I), P).all_zero
    else:
        vanish = True  # no invariants below I = 3

    if toric_exclusions and mixture_exclusions:
        verdict = BoundaryVerdict.RULED_OUT_BOTH
    elif toric_exclusions:
        verdict = BoundaryVerdict.RULED_OUT_M1
    elif mixture_exclusions:
        verdict = BoundaryVerdict.RULED_OUT_M2
    else:
        verdict = BoundaryVerdict.INCONCLUSIVE
    return BoundaryReport(
        verdict=verdict,
        invariants_vanish=vanish,
        toric_exclusions=tuple(toric_exclusions),
        mixture_exclusions=tuple(mixture_exclusions),
    )
