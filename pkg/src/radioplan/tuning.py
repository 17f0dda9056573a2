"""Hyperparameter grid search over (C, gamma) pairs.

Two strategies are provided.  The plain search keeps whichever grid cell
scores best (highest accuracy or lowest RMSE) and fits the local train/test
mode.  The bounded search targets generalization instead: among cells whose
score meets a quality bound it keeps the one with the smallest gamma (the
smoothest model), relaxing the bound step by step when no cell qualifies.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import FoldDegeneracy, NonTermination
from .geodata import TerrainClass
from .svm import (
    KernelParams,
    decide,
    predict,
    squared_distances,
    train_csvc,
    train_esvr,
)

#: Hard cap on bound relaxations; hitting it means evaluate is pathological.
MAX_RELAXATIONS = 50

DEFAULT_FOLDS = 5


@dataclass(frozen=True)
class GridSpec:
    """Powers-of-two grid: C = base**i, gamma = base**j."""

    c_exponents: tuple[int, ...]
    gamma_exponents: tuple[int, ...]
    base: float = 2.0

    def __post_init__(self):
        object.__setattr__(self, "c_exponents", tuple(self.c_exponents))
        object.__setattr__(self, "gamma_exponents",
                           tuple(self.gamma_exponents))
        if not self.c_exponents or not self.gamma_exponents:
            raise ValueError("grid must be nonempty")

    @classmethod
    def classification_default(cls, step: int = 1) -> "GridSpec":
        return cls(c_exponents=tuple(range(-8, 11, step)),
                   gamma_exponents=tuple(range(-8, 7, step)))

    @classmethod
    def regression_default(cls, step: int = 1) -> "GridSpec":
        return cls(c_exponents=tuple(range(-3, 11, step)),
                   gamma_exponents=tuple(range(-8, 4, step)))

    def cells(self) -> list[tuple[float, float]]:
        return [(self.base ** ci, self.base ** gi)
                for ci in self.c_exponents for gi in self.gamma_exponents]


@dataclass(frozen=True)
class BoundPolicy:
    """Quality bound and its relaxation law for the bounded search."""

    accuracy_lower_bound: float = 75.0   # percent
    accuracy_step: float = 5.0           # percentage points per relaxation
    rmse_upper_bound: float = 8.0        # dBm
    # RMSE relaxes as ub -> sqrt(ub^2 + rmse_relax_squared).
    rmse_relax_squared: float = 4.0

    @classmethod
    def for_terrain(cls, terrain) -> "BoundPolicy":
        terrain = TerrainClass.parse(terrain)
        init = 75.0 if terrain is TerrainClass.FLAT else 90.0
        return cls(accuracy_lower_bound=init)

    def relax_accuracy(self, bound: float) -> float:
        return bound - self.accuracy_step

    def relax_rmse(self, bound: float) -> float:
        return float(np.sqrt(bound * bound + self.rmse_relax_squared))


@dataclass(frozen=True)
class GridSearchResult:
    c: float
    gamma: float
    score: float
    scores: dict = field(default_factory=dict)  # (C, gamma) -> score
    final_bound: float | None = None
    bound_trajectory: tuple[float, ...] = ()


def evaluate_grid(cells, evaluate: Callable[[float, float], float],
                  workers: int = 1) -> dict:
    """Score every cell; results are keyed by cell, so worker completion
    order cannot influence anything downstream."""
    if workers <= 1:
        return {cell: float(evaluate(*cell)) for cell in cells}
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = {cell: pool.submit(evaluate, *cell) for cell in cells}
        return {cell: float(f.result()) for cell, f in futures.items()}


def _tie_key(cell_score):
    (c, gamma), _ = cell_score
    return (gamma, c)


def grid_search_best(grid: GridSpec, evaluate, maximize: bool,
                     workers: int = 1) -> GridSearchResult:
    """Exhaustive search for the best-scoring cell.

    Ties are broken toward smaller gamma, then smaller C.
    """
    scores = evaluate_grid(grid.cells(), evaluate, workers=workers)
    sign = -1.0 if maximize else 1.0
    best_cell, best_score = min(
        scores.items(), key=lambda kv: (sign * kv[1],) + _tie_key(kv))
    return GridSearchResult(c=best_cell[0], gamma=best_cell[1],
                            score=best_score, scores=scores)


def grid_search_bounded(grid: GridSpec, policy: BoundPolicy, evaluate,
                        mode: str, workers: int = 1) -> GridSearchResult:
    """Smallest-gamma search among cells meeting a quality bound.

    mode "accuracy": qualify when score >= bound; the bound starts at the
    policy's accuracy lower bound and drops by its step on each relaxation.
    mode "rmse": qualify when score <= bound; the bound starts at the RMSE
    upper bound and grows via the policy's root-sum-square law.
    """
    if mode not in ("accuracy", "rmse"):
        raise ValueError("mode must be 'accuracy' or 'rmse'")
    scores = evaluate_grid(grid.cells(), evaluate, workers=workers)
    bound = (policy.accuracy_lower_bound if mode == "accuracy"
             else policy.rmse_upper_bound)
    trajectory = [bound]
    for _ in range(MAX_RELAXATIONS + 1):
        if mode == "accuracy":
            qualifying = {cell: s for cell, s in scores.items() if s >= bound}
        else:
            qualifying = {cell: s for cell, s in scores.items() if s <= bound}
        if qualifying:
            best_cell, best_score = min(qualifying.items(), key=_tie_key)
            return GridSearchResult(
                c=best_cell[0], gamma=best_cell[1], score=best_score,
                scores=scores, final_bound=bound,
                bound_trajectory=tuple(trajectory))
        bound = (policy.relax_accuracy(bound) if mode == "accuracy"
                 else policy.relax_rmse(bound))
        trajectory.append(bound)
    raise NonTermination(
        f"no qualifying cell after {MAX_RELAXATIONS} relaxations")


def _stratified_folds(labels: np.ndarray, folds: int, seed: int) -> np.ndarray:
    """Fold index per sample; each class is dealt round-robin after a
    seeded shuffle, keeping fold class mixes as even as possible."""
    rng = np.random.default_rng(seed)
    assignment = np.empty(len(labels), dtype=np.int64)
    for value in np.unique(labels):
        idx = np.nonzero(labels == value)[0]
        idx = idx[rng.permutation(len(idx))]
        assignment[idx] = np.arange(len(idx)) % folds
    return assignment


def cross_validate(x, y, candidate: tuple[float, float], task: str,
                   folds: int = DEFAULT_FOLDS, seed: int = 0,
                   epsilon: float = 3.0, tol: float = 1e-3,
                   max_iter: int | None = None,
                   sqdists: np.ndarray | None = None) -> float:
    """Mean held-out score over stratified folds (deterministic given seed).

    task "classification" returns accuracy in percent; task "regression"
    returns RMSE in dBm.  Classification folds must each contain both
    classes, otherwise FoldDegeneracy is raised.  Passing the precomputed
    squared-distance matrix of x lets a whole grid search reuse it (one exp
    per gamma instead of a fresh kernel evaluation per cell).
    """
    if folds < 2:
        raise ValueError("need at least 2 folds")
    if task not in ("classification", "regression"):
        raise ValueError("task must be 'classification' or 'regression'")
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    c_param, gamma = candidate
    kernel = KernelParams(gamma)
    kwargs = {} if max_iter is None else {"max_iter": max_iter}
    if sqdists is None:
        sqdists = squared_distances(x, x)

    if task == "classification":
        assignment = _stratified_folds(y, folds, seed)
    else:
        rng = np.random.default_rng(seed)
        assignment = rng.permutation(len(y)) % folds

    fold_scores = []
    for k in range(folds):
        held = assignment == k
        if not np.any(held) or np.all(held):
            raise FoldDegeneracy(f"fold {k} is empty or everything")
        x_tr, y_tr = x[~held], y[~held]
        x_te, y_te = x[held], y[held]
        kmat = np.exp(-gamma * sqdists[np.ix_(~held, ~held)])
        if task == "classification":
            if not (np.any(y_tr > 0) and np.any(y_tr < 0)
                    and np.any(y_te > 0) and np.any(y_te < 0)):
                raise FoldDegeneracy(f"fold {k} lacks a class")
            model = train_csvc(x_tr, y_tr, c_param, kernel, tol=tol,
                               kmat=kmat, **kwargs)
            correct = decide(model, x_te) == y_te
            fold_scores.append(100.0 * float(np.mean(correct)))
        else:
            model = train_esvr(x_tr, y_tr, c_param, kernel, epsilon=epsilon,
                               tol=tol, kmat=kmat, **kwargs)
            err = predict(model, x_te) - y_te
            fold_scores.append(float(np.sqrt(np.mean(err * err))))
    return float(np.mean(fold_scores))


def format_tuning_report(result: GridSearchResult, title: str) -> str:
    """Diff-friendly text: every cell's score, the bound trajectory and the
    selected cell."""
    lines = [f"# tuning: {title}", "c\tgamma\tscore"]
    for (c, gamma) in sorted(result.scores, key=lambda cg: (cg[1], cg[0])):
        lines.append(f"{c:g}\t{gamma:g}\t{result.scores[(c, gamma)]:.6f}")
    if result.bound_trajectory:
        lines.append("bounds\t" + "\t".join(
            f"{b:.6f}" for b in result.bound_trajectory))
    lines.append(f"selected\tc={result.c:g}\tgamma={result.gamma:g}\t"
                 f"score={result.score:.6f}")
    return "\n".join(lines) + "\n"
