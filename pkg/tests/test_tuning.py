import math

import numpy as np
import pytest

from radioplan.errors import FoldDegeneracy, NonTermination
from radioplan.svm import KernelParams, decide, train_csvc
from radioplan.tuning import (
    BoundPolicy,
    GridSpec,
    _stratified_folds,
    cross_validate,
    evaluate_grid,
    format_tuning_report,
    grid_search_best,
    grid_search_bounded,
)


class TestGridSpec:
    def test_default_ranges(self):
        cls_grid = GridSpec.classification_default()
        assert min(cls_grid.c_exponents) == -8
        assert max(cls_grid.c_exponents) == 10
        assert min(cls_grid.gamma_exponents) == -8
        assert max(cls_grid.gamma_exponents) == 6
        reg_grid = GridSpec.regression_default()
        assert min(reg_grid.c_exponents) == -3
        assert max(reg_grid.c_exponents) == 10
        assert min(reg_grid.gamma_exponents) == -8
        assert max(reg_grid.gamma_exponents) == 3

    def test_cells_are_powers_of_two(self):
        grid = GridSpec(c_exponents=(0, 1), gamma_exponents=(-1, 2))
        assert set(grid.cells()) == {(1.0, 0.5), (1.0, 4.0),
                                     (2.0, 0.5), (2.0, 4.0)}

    def test_step_is_configurable(self):
        grid = GridSpec.classification_default(step=3)
        assert grid.c_exponents == tuple(range(-8, 11, 3))


class TestGridSearchBest:
    def test_singleton_grid(self):
        grid = GridSpec(c_exponents=(2,), gamma_exponents=(-1,))
        result = grid_search_best(grid, lambda c, g: 0.5, maximize=True)
        assert (result.c, result.gamma, result.score) == (4.0, 0.5, 0.5)

    def test_planted_optimum(self):
        grid = GridSpec(c_exponents=range(-2, 3), gamma_exponents=range(-2, 3))

        def evaluate(c, gamma):
            return -((c - 2.0) ** 2 + (gamma - 0.25) ** 2)

        result = grid_search_best(grid, evaluate, maximize=True)
        assert (result.c, result.gamma) == (2.0, 0.25)

    def test_minimization_mode_plants_optimum(self):
        grid = GridSpec(c_exponents=range(-2, 3), gamma_exponents=range(-2, 3))
        result = grid_search_best(
            grid, lambda c, g: (c - 0.5) ** 2 + (g - 4.0) ** 2, maximize=False)
        assert (result.c, result.gamma) == (0.5, 4.0)

    def test_tie_prefers_smaller_gamma_then_smaller_c(self):
        grid = GridSpec(c_exponents=(0, 1), gamma_exponents=(0, 1))
        result = grid_search_best(grid, lambda c, g: 1.0, maximize=True)
        assert (result.c, result.gamma) == (1.0, 1.0)

    def test_order_independence(self):
        grid = GridSpec(c_exponents=range(-3, 4), gamma_exponents=range(-3, 4))
        scores = {cell: math.sin(cell[0]) * math.cos(cell[1])
                  for cell in grid.cells()}
        a = grid_search_best(grid, lambda c, g: scores[(c, g)], maximize=True)
        b = grid_search_best(grid, lambda c, g: scores[(c, g)], maximize=True,
                             workers=4)
        assert (a.c, a.gamma, a.score) == (b.c, b.gamma, b.score)


class TestGridSearchBounded:
    def test_all_qualify_smallest_gamma(self):
        grid = GridSpec(c_exponents=(0, 1, 2), gamma_exponents=(-2, 0, 2))
        policy = BoundPolicy(accuracy_lower_bound=50.0)
        result = grid_search_bounded(
            grid, policy, lambda c, g: 80.0, mode="accuracy")
        assert result.gamma == 0.25
        assert result.c == 1.0
        assert result.final_bound == 50.0
        assert result.bound_trajectory == (50.0,)

    def test_single_accuracy_relaxation(self):
        # Nothing reaches 90, several reach 85: exactly one step down.
        grid = GridSpec(c_exponents=(0, 1), gamma_exponents=(-1, 0, 1))
        scores = {(1.0, 0.5): 86.0, (1.0, 1.0): 87.0, (1.0, 2.0): 88.0,
                  (2.0, 0.5): 84.0, (2.0, 1.0): 89.0, (2.0, 2.0): 83.0}
        policy = BoundPolicy(accuracy_lower_bound=90.0, accuracy_step=5.0)
        result = grid_search_bounded(
            grid, policy, lambda c, g: scores[(c, g)], mode="accuracy")
        assert result.bound_trajectory == (90.0, 85.0)
        assert result.final_bound == 85.0
        # Smallest gamma among qualifying cells {(1,.5), (1,1), (1,2), (2,1)}.
        assert (result.c, result.gamma) == (1.0, 0.5)

    def test_single_rmse_relaxation(self):
        # Bound 8 unmet; sqrt(68) ~ 8.246 admits one cell.
        grid = GridSpec(c_exponents=(0,), gamma_exponents=(-1, 0))
        scores = {(1.0, 0.5): 8.2, (1.0, 1.0): 9.5}
        policy = BoundPolicy(rmse_upper_bound=8.0)
        result = grid_search_bounded(
            grid, policy, lambda c, g: scores[(c, g)], mode="rmse")
        assert result.bound_trajectory == (8.0, pytest.approx(math.sqrt(68.0)))
        assert (result.c, result.gamma) == (1.0, 0.5)

    def test_returned_gamma_is_minimal_among_qualifying(self):
        grid = GridSpec(c_exponents=range(-2, 3), gamma_exponents=range(-3, 4))
        rng = np.random.default_rng(5)
        scores = {cell: float(rng.uniform(60, 95)) for cell in grid.cells()}
        policy = BoundPolicy(accuracy_lower_bound=75.0)
        result = grid_search_bounded(
            grid, policy, lambda c, g: scores[(c, g)], mode="accuracy")
        for cell, score in scores.items():
            if score >= result.final_bound:
                assert cell[1] >= result.gamma

    def test_accuracy_relaxation_sequence(self):
        policy = BoundPolicy(accuracy_lower_bound=90.0, accuracy_step=5.0)
        bounds = [90.0]
        for _ in range(4):
            bounds.append(policy.relax_accuracy(bounds[-1]))
        assert bounds == [90.0, 85.0, 80.0, 75.0, 70.0]

    def test_rmse_relaxation_sequence(self):
        policy = BoundPolicy(rmse_upper_bound=8.0)
        bounds = [8.0]
        for _ in range(3):
            bounds.append(policy.relax_rmse(bounds[-1]))
        expected = [math.sqrt(64.0 + 4.0 * k) for k in range(4)]
        assert bounds == pytest.approx(expected)

    def test_nontermination_guard(self):
        grid = GridSpec(c_exponents=(0,), gamma_exponents=(0,))
        policy = BoundPolicy(accuracy_lower_bound=90.0)
        with pytest.raises(NonTermination):
            grid_search_bounded(grid, policy, lambda c, g: float("nan"),
                                mode="accuracy")


class TestCrossValidate:
    def separable_data(self, rng, n=60):
        x = rng.normal(size=(n, 7)) * 0.05
        side = rng.choice([-1.0, 1.0], size=n)
        x[:, 0] += side * 2.0
        return x, side

    def test_perfect_classifier_scores_100(self, rng):
        x, y = self.separable_data(rng)
        score = cross_validate(x, y, (10.0, 0.5), task="classification",
                               folds=5, seed=1)
        assert score == 100.0

    def test_constant_regressor_zero_rmse(self, rng):
        x = rng.normal(size=(40, 7))
        y = np.full(40, -95.0)
        score = cross_validate(x, y, (10.0, 0.5), task="regression",
                               folds=4, seed=1)
        assert score == pytest.approx(0.0, abs=1e-9)

    def test_two_fold_mean_recomposition(self, rng):
        x, y = self.separable_data(rng, n=30)
        y[rng.integers(0, 30, size=4)] *= -1  # some impurities
        seed = 9
        got = cross_validate(x, y, (2.0, 0.5), task="classification",
                             folds=2, seed=seed)
        assignment = _stratified_folds(y, 2, seed)
        fold_scores = []
        for k in (0, 1):
            held = assignment == k
            model = train_csvc(x[~held], y[~held], 2.0, KernelParams(0.5))
            fold_scores.append(
                100.0 * float(np.mean(decide(model, x[held]) == y[held])))
        assert got == pytest.approx(np.mean(fold_scores))

    def test_deterministic_given_seed(self, rng):
        x, y = self.separable_data(rng)
        a = cross_validate(x, y, (1.0, 1.0), task="classification", seed=3)
        b = cross_validate(x, y, (1.0, 1.0), task="classification", seed=3)
        assert a == b

    def test_fold_degeneracy(self, rng):
        x = rng.normal(size=(12, 7))
        y = np.ones(12)
        y[0] = -1.0  # a single negative cannot reach both folds
        with pytest.raises(FoldDegeneracy):
            cross_validate(x, y, (1.0, 1.0), task="classification", folds=2)

    def test_precomputed_sqdists_equivalent(self, rng):
        from radioplan.svm import squared_distances
        x, y = self.separable_data(rng, n=40)
        plain = cross_validate(x, y, (2.0, 0.5), task="classification", seed=2)
        cached = cross_validate(x, y, (2.0, 0.5), task="classification",
                                seed=2, sqdists=squared_distances(x, x))
        assert plain == cached


def test_evaluate_grid_keyed_by_cell():
    cells = [(1.0, 1.0), (2.0, 0.5), (4.0, 0.25)]
    seq = evaluate_grid(cells, lambda c, g: c + g, workers=1)
    par = evaluate_grid(cells, lambda c, g: c + g, workers=3)
    assert seq == par == {(1.0, 1.0): 2.0, (2.0, 0.5): 2.5, (4.0, 0.25): 4.25}


def test_tuning_report_lists_everything():
    grid = GridSpec(c_exponents=(0, 1), gamma_exponents=(0,))
    result = grid_search_bounded(
        grid, BoundPolicy(accuracy_lower_bound=50.0),
        lambda c, g: 60.0 + c, mode="accuracy")
    text = format_tuning_report(result, "classification")
    assert "selected" in text
    assert text.count("\n") >= 4
    assert "bounds" in text
