"""Tour of the two parametrizations and the membership classifier.

A diagonal-effect probability table can be written in toric form
(row x column products with per-diagonal boosts) or, sometimes, as a
mixture of a rank-one table with a diagonal table.  This script builds
both, shows when they coincide, and classifies points that only the
toric form can reach.

Run:  python demos/demo_parametrizations.py
"""

from fractions import Fraction

from diagonal_effect import (
    MixtureParams,
    ToricParams,
    classify_toric_point,
    mixture_point,
    mixture_to_toric,
    normalizers,
    toric_point,
)

third = Fraction(1, 3)

# ---------------------------------------------------------------------------
# A toric point with a uniform diagonal boost of 2.
# ---------------------------------------------------------------------------
params = ToricParams(zeta_r=(1, 1, 1), zeta_c=(1, 1, 1), zeta_g=(2, 2, 2))
table, norms = toric_point(params)
print("toric point with diagonal boost 2:")
for row in table.to_strings():
    print("  ", row)
print("normalizers: N =", norms.N, " N_T =", norms.N_T)

# N_T > N and every boost is >= 1, so this point is also a mixture:
verdict = classify_toric_point(params)
print("\nclassifier verdict:", verdict.kind.value)
w = verdict.witness
print("witness: alpha =", w.alpha, " r =", [str(x) for x in w.r], " d =", [str(x) for x in w.d])

# the witness recomposes the table exactly (not within tolerance: exactly)
assert mixture_point(w) == table
print("witness recomposes the toric table cell for cell")

# ---------------------------------------------------------------------------
# Shrink one diagonal boost below 1 and the mixture form becomes impossible.
# ---------------------------------------------------------------------------
deficit = ToricParams(zeta_r=(1, 1, 1), zeta_c=(1, 1, 1), zeta_g=(Fraction(1, 2), 1, 1))
verdict = classify_toric_point(deficit)
n = normalizers(deficit)
print("\nwith one boost at 1/2: N =", n.N, " N_T =", n.N_T)
print("verdict:", verdict.kind.value, " case", verdict.case.value,
      "(the normalizer deficit makes any mixture weight exceed 1)")

# ---------------------------------------------------------------------------
# The reverse direction is closed-form whenever the mixture is interior.
# ---------------------------------------------------------------------------
m = MixtureParams(alpha=Fraction(3, 4), r=(third,) * 3, c=(third,) * 3, d=(third,) * 3)
back = mixture_to_toric(m)
print("\nmixture (alpha=3/4, uniform r, c, d) as toric parameters:")
print("  zeta_g =", [str(g) for g in back.zeta_g])
assert toric_point(back)[0] == mixture_point(m)
print("round trip is bit-identical")
