from fractions import Fraction

import pytest

from diagonal_effect import (
    CountTable,
    InputError,
    ModelFamily,
    Move,
    ProbTable,
    SizeMismatchError,
    SufficientStat,
    apply_move,
    likelihood,
    normalize,
    random_rational_point,
    sufficient_statistic,
    toric_point,
    zero_support_cells,
)
from diagonal_effect.markov import moves_diag_effect

from conftest import model, random_count_table

DIAG3 = model(ModelFamily.DIAGONAL_EFFECT, 3)
COMMON3 = model(ModelFamily.COMMON_DIAGONAL_EFFECT, 3)


class TestCountTable:
    def test_margins_and_total(self):
        t = CountTable.from_rows([[1, 2], [3, 4]])
        assert t.n == 10
        assert t.row_margins() == (3, 7)
        assert t.col_margins() == (4, 6)
        assert t.diag_vector() == (1, 4)
        assert t.diag_sum() == 5

    def test_rejects_negative(self):
        with pytest.raises(InputError):
            CountTable.from_rows([[1, -1], [0, 0]])

    def test_rejects_ragged(self):
        with pytest.raises(InputError):
            CountTable.from_rows([[1, 2], [3]])


class TestProbTable:
    def test_requires_exact_unit_sum(self):
        half = Fraction(1, 2)
        ProbTable.from_rows([[half, 0], [0, half]])
        with pytest.raises(InputError):
            ProbTable.from_rows([[half, 0], [0, Fraction(1, 3)]])

    def test_normalize_is_exact(self):
        t = CountTable.from_rows([[1, 2], [3, 4]])
        p = normalize(t)
        assert p.cells[1][1] == Fraction(4, 10)
        assert sum(x for row in p.cells for x in row) == 1


class TestSufficientStatistic:
    def test_identity_table_diag_effect(self):
        t = CountTable.from_rows([[1, 0], [0, 1]])
        s = sufficient_statistic(t, model(ModelFamily.DIAGONAL_EFFECT, 2))
        assert s.rows == (1, 1) and s.cols == (1, 1) and s.diag == (1, 1)

    def test_permutation_table_both_models(self):
        t = CountTable.from_rows([[0, 1, 0], [0, 0, 1], [1, 0, 0]])
        s1 = sufficient_statistic(t, DIAG3)
        assert s1.rows == (1, 1, 1) and s1.cols == (1, 1, 1) and s1.diag == (0, 0, 0)
        s2 = sufficient_statistic(t, COMMON3)
        assert s2.diag == 0

    def test_size_mismatch(self):
        t = CountTable.from_rows([[1]])
        with pytest.raises(SizeMismatchError):
            sufficient_statistic(t, DIAG3)

    def test_stat_type_invariants(self):
        with pytest.raises(InputError):
            SufficientStat(ModelFamily.DIAGONAL_EFFECT, rows=(1, 1), cols=(2, 1), diag=(0, 0))
        with pytest.raises(InputError):
            SufficientStat(ModelFamily.COMMON_DIAGONAL_EFFECT, rows=(1,), cols=(1,), diag=(1,))


class TestApplyMove:
    def test_triangle_move_on_permutation_table(self):
        t = CountTable.from_rows([[0, 1, 0], [0, 0, 1], [1, 0, 0]])
        cycle = [m for m in moves_diag_effect(3) if m.label == "cycle"][0]
        out = apply_move(t, cycle, -1)
        assert out is not None
        assert out.to_lists() == [[0, 0, 1], [1, 0, 0], [0, 1, 0]]
        # moving back recovers the original table
        back = apply_move(out, cycle, +1)
        assert back == t

    def test_infeasible_returns_marker(self):
        t = CountTable.from_rows([[0, 1], [1, 0]])
        m = Move.from_rows([[1, -1], [-1, 1]])
        assert apply_move(t, m, -1) is None

    def test_preserves_statistic_for_all_small_applications(self, rng):
        moves = moves_diag_effect(3)
        for _ in range(50):
            t = random_count_table(rng, 3, rng.randint(2, 8))
            before = sufficient_statistic(t, DIAG3)
            for m in moves:
                for sign in (1, -1):
                    out = apply_move(t, m, sign)
                    if out is not None:
                        assert sufficient_statistic(out, DIAG3) == before

    def test_zero_move_rejected(self):
        with pytest.raises(InputError):
            Move.from_rows([[0, 0], [0, 0]])

    def test_unbalanced_move_rejected(self):
        with pytest.raises(InputError):
            Move.from_rows([[1, 0], [0, 0]])


class TestLikelihood:
    def test_uniform_value(self):
        I = 3
        p = ProbTable.from_rows([[Fraction(1, 9)] * 3 for _ in range(3)])
        t = CountTable.from_rows([[1, 1, 0], [0, 0, 0], [0, 0, 0]])
        assert likelihood(p, t) == Fraction(1, 81)

    def test_zero_probability_cell(self):
        p = ProbTable.from_rows([[0, Fraction(1, 2)], [Fraction(1, 2), 0]])
        t = CountTable.from_rows([[1, 0], [0, 0]])
        assert likelihood(p, t) == 0
        assert zero_support_cells(p, t) == [(1, 1)]

    def test_likelihood_depends_only_on_statistic(self, rng):
        # two tables with equal diagonal-effect statistic and a toric point
        t1 = CountTable.from_rows([[0, 1, 0], [0, 0, 1], [1, 0, 0]])
        t2 = CountTable.from_rows([[0, 0, 1], [1, 0, 0], [0, 1, 0]])
        assert sufficient_statistic(t1, DIAG3) == sufficient_statistic(t2, DIAG3)
        for seed in range(10):
            params = random_rational_point(DIAG3, seed)
            table, _ = toric_point(params)
            assert likelihood(table, t1) == likelihood(table, t2)
