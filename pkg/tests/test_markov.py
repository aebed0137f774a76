import math
from collections import Counter
from fractions import Fraction

import pytest

from diagonal_effect import (
    BudgetExceededError,
    CountTable,
    InputError,
    ModelFamily,
    Stationary,
    WalkConfig,
    design_matrix,
    enumerate_fiber,
    exact_test,
    exact_test_chains,
    fiber_walk,
    is_connected,
    moves_common_diag,
    moves_diag_effect,
    sufficient_statistic,
    transpose_apply,
    verify_connectivity,
)

from conftest import all_tables, model, random_count_table

DIAG3 = model(ModelFamily.DIAGONAL_EFFECT, 3)
COMMON3 = model(ModelFamily.COMMON_DIAGONAL_EFFECT, 3)
DERANGEMENT = CountTable.from_rows([[0, 1, 0], [0, 0, 1], [1, 0, 0]])


class TestMoveFactories:
    def test_counts_diag_effect(self):
        assert len(moves_diag_effect(3)) == 1
        assert len(moves_diag_effect(4)) == 10

    def test_moves_have_zero_diagonal_diag_effect(self):
        for I in (3, 4, 5):
            for m in moves_diag_effect(I):
                assert all(m.cells[i][i] == 0 for i in range(I))

    def test_kernel_property_all_sizes(self):
        for I in range(3, 7):
            for family, moves in (
                (ModelFamily.DIAGONAL_EFFECT, moves_diag_effect(I)),
                (ModelFamily.COMMON_DIAGONAL_EFFECT, moves_common_diag(I)),
            ):
                A = design_matrix(model(family, I))
                for m in moves:
                    assert transpose_apply(A, m) == (0,) * A.num_params

    def test_common_moves_preserve_diag_sum_not_vector(self):
        shifting = [m for m in moves_common_diag(3) if m.label == "diag-shift"]
        assert shifting
        for m in shifting:
            assert sum(m.cells[i][i] for i in range(3)) == 0
            assert any(m.cells[i][i] != 0 for i in range(3))

    def test_documented_examples_present(self):
        cells = {m.cells for m in moves_common_diag(3)}
        assert ((1, 0, -1), (0, -1, 1), (-1, 1, 0)) in cells
        double = ((1, 1, -2), (-1, -1, 2), (0, 0, 0))
        assert double in cells
        assert tuple(zip(*double)) in cells  # its transpose

    def test_small_size_rejected(self):
        with pytest.raises(InputError):
            moves_diag_effect(2)


class TestEnumerateFiber:
    def test_derangement_fiber_diag_effect(self):
        fiber = enumerate_fiber(sufficient_statistic(DERANGEMENT, DIAG3), DIAG3)
        assert len(fiber) == 2
        lists = [t.to_lists() for t in fiber.tables]
        assert [[0, 0, 1], [1, 0, 0], [0, 1, 0]] in lists
        assert [[0, 1, 0], [0, 0, 1], [1, 0, 0]] in lists

    def test_derangement_fiber_common_diag(self):
        fiber = enumerate_fiber(sufficient_statistic(DERANGEMENT, COMMON3), COMMON3)
        assert len(fiber) == 2

    def test_matches_grouping_oracle(self, rng):
        # group all tables of a fixed total by statistic: complete fibers
        for family in (ModelFamily.DIAGONAL_EFFECT, ModelFamily.COMMON_DIAGONAL_EFFECT):
            m = model(family, 3)
            groups = {}
            for t in all_tables(3, 4):
                groups.setdefault(sufficient_statistic(t, m), []).append(t)
            for stat, members in list(groups.items())[::7]:
                fiber = enumerate_fiber(stat, m)
                assert sorted(t.cells for t in fiber.tables) == sorted(t.cells for t in members)

    def test_budget_error(self):
        t = CountTable.from_rows([[3, 3, 3], [3, 3, 3], [3, 3, 3]])
        with pytest.raises(BudgetExceededError):
            enumerate_fiber(sufficient_statistic(t, COMMON3), COMMON3, node_budget=10)

    def test_family_mismatch_rejected(self):
        stat = sufficient_statistic(DERANGEMENT, DIAG3)
        with pytest.raises(InputError):
            enumerate_fiber(stat, COMMON3)


class TestConnectivity:
    def test_derangement_fiber_connected(self):
        fiber = enumerate_fiber(sufficient_statistic(DERANGEMENT, DIAG3), DIAG3)
        assert is_connected(fiber, moves_diag_effect(3)).connected

    def test_singleton_always_connected(self):
        t = CountTable.from_rows([[1, 0, 0], [0, 0, 0], [0, 0, 0]])
        fiber = enumerate_fiber(sufficient_statistic(t, DIAG3), DIAG3)
        assert len(fiber) == 1
        assert is_connected(fiber, []).connected

    def test_empty_move_list_disconnects(self):
        fiber = enumerate_fiber(sufficient_statistic(DERANGEMENT, DIAG3), DIAG3)
        report = is_connected(fiber, [])
        assert not report.connected
        assert len(report.components) == 2

    def test_sweep_small(self):
        report = verify_connectivity(ModelFamily.DIAGONAL_EFFECT, 3, 4)
        assert report.all_connected
        assert report.tables_seen == sum(math.comb(n + 8, 8) for n in range(5))


class TestFiberWalk:
    def test_statistic_invariant_along_chain(self):
        start = CountTable.from_rows([[1, 2, 0], [0, 1, 2], [2, 0, 1]])
        stat = sufficient_statistic(start, COMMON3)
        config = WalkConfig(steps=300, seed=5)
        for state in fiber_walk(start, moves_common_diag(3), config):
            assert sufficient_statistic(state, COMMON3) == stat

    def test_deterministic_in_seed(self):
        start = DERANGEMENT
        config = WalkConfig(steps=100, seed=3, stationary=Stationary.UNIFORM)
        run1 = [s.cells for s in fiber_walk(start, moves_diag_effect(3), config)]
        run2 = [s.cells for s in fiber_walk(start, moves_diag_effect(3), config)]
        assert run1 == run2

    def test_uniform_frequencies_on_two_element_fiber(self):
        config = WalkConfig(steps=20_000, seed=42, stationary=Stationary.UNIFORM)
        freq = Counter(s.cells for s in fiber_walk(DERANGEMENT, moves_diag_effect(3), config))
        assert set(freq) == {
            ((0, 1, 0), (0, 0, 1), (1, 0, 0)),
            ((0, 0, 1), (1, 0, 0), (0, 1, 0)),
        }
        for count in freq.values():
            assert abs(count / 20_000 - 0.5) < 0.02

    def test_hypergeometric_frequencies_match_enumeration(self):
        start = CountTable.from_rows([[1, 2, 0], [0, 1, 2], [2, 0, 1]])
        fiber = enumerate_fiber(sufficient_statistic(start, COMMON3), COMMON3)
        weights = {}
        for t in fiber.tables:
            w = Fraction(1)
            for row in t.cells:
                for x in row:
                    w /= math.factorial(x)
            weights[t.cells] = w
        total = sum(weights.values())
        config = WalkConfig(steps=100_000, seed=11, stationary=Stationary.HYPERGEOMETRIC)
        freq = Counter(s.cells for s in fiber_walk(start, moves_common_diag(3), config))
        for cells, w in weights.items():
            target = float(w / total)
            assert abs(freq.get(cells, 0) / 100_000 - target) < 0.015

    def test_empty_moves_rejected(self):
        with pytest.raises(InputError):
            next(fiber_walk(DERANGEMENT, [], WalkConfig(steps=10)))


class TestExactTest:
    def test_enumeration_on_fit_shaped_table(self):
        t = CountTable.from_rows([[0, 1, 1], [1, 0, 1], [1, 1, 0]])
        result = exact_test(t, DIAG3, method="enumerate")
        assert result.method == "Enumeration"
        assert result.monte_carlo_stderr == 0.0
        assert result.statistic_observed == pytest.approx(0.0, abs=1e-12)
        assert result.p_value == pytest.approx(1.0)

    def test_pvalue_in_unit_interval(self, rng):
        for _ in range(5):
            t = random_count_table(rng, 3, 6)
            result = exact_test(t, COMMON3, method="enumerate")
            assert 0.0 <= result.p_value <= 1.0

    def test_mcmc_close_to_enumeration(self):
        t = CountTable.from_rows([[1, 2, 0], [0, 1, 2], [2, 0, 1]])
        exact = exact_test(t, COMMON3, method="enumerate")
        mcmc = exact_test(t, COMMON3, WalkConfig(steps=40_000, seed=9), method="mcmc")
        assert mcmc.method == "MCMC"
        gap = abs(mcmc.p_value - exact.p_value)
        assert gap <= max(3 * mcmc.monte_carlo_stderr, 1e-9)
        assert gap <= 0.02

    def test_chain_merge_is_deterministic(self):
        t = CountTable.from_rows([[1, 2, 0], [0, 1, 2], [2, 0, 1]])
        config = WalkConfig(steps=5_000, seed=1)
        r1 = exact_test_chains(t, COMMON3, config, chains=3)
        r2 = exact_test_chains(t, COMMON3, config, chains=3)
        assert r1.p_value == r2.p_value
        assert r1.config["chains"] == 3

    def test_zero_table_rejected(self):
        with pytest.raises(InputError):
            exact_test(CountTable.from_rows([[0, 0], [0, 0]]), model(ModelFamily.DIAGONAL_EFFECT, 2))

    def test_result_embeds_config(self):
        t = CountTable.from_rows([[1, 2, 0], [0, 1, 2], [2, 0, 1]])
        result = exact_test(t, COMMON3, WalkConfig(steps=2_000, seed=77), method="mcmc")
        assert result.config["seed"] == 77
        assert result.config["stationary"] == "hypergeometric"
