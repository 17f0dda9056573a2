"""Trained classifier / regressor models and their training entry points."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import SingleClassData
from ..geodata import TerrainClass
from .kernel import KernelParams, rbf_matrix
from .scaling import Scaler
from .smo import DEFAULT_MAX_ITER, DEFAULT_TOL, kkt_bounds, solve_dual

#: Default half-width of the insensitive tube, in dBm, matching the measured
#: noise level of the acquisition chain.
DEFAULT_EPSILON = 3.0


@dataclass(frozen=True)
class TrainingDiagnostics:
    iterations: int
    kkt_gap: float
    dual_objective: float
    n_support: int
    n_free: int


@dataclass(frozen=True, eq=False)
class SvcModel:
    """Soft-margin classifier: sign(sum_i coef_i K(sv_i, x) + bias)."""

    support_vectors: np.ndarray  # (s, m), scaled feature space
    coefficients: np.ndarray     # label_i * alpha_i, only alpha > 0 kept
    bias: float
    kernel: KernelParams
    c_param: float
    diagnostics: TrainingDiagnostics | None = None

    def decision_values(self, x) -> np.ndarray:
        x = np.atleast_2d(np.asarray(x, dtype=float))
        if len(self.coefficients) == 0:
            return np.full(len(x), self.bias)
        k = rbf_matrix(self.kernel, self.support_vectors, x)
        return self.coefficients @ k + self.bias


@dataclass(frozen=True, eq=False)
class SvrModel:
    """Tube regressor: sum_i coef_i K(sv_i, x) + bias."""

    support_vectors: np.ndarray
    coefficients: np.ndarray  # alpha_star_i - alpha_i, only nonzero kept
    bias: float
    kernel: KernelParams
    c_param: float
    epsilon: float
    diagnostics: TrainingDiagnostics | None = None


def train_csvc(x, labels, c_param: float, kernel: KernelParams,
               tol: float = DEFAULT_TOL,
               max_iter: int = DEFAULT_MAX_ITER,
               kmat: np.ndarray | None = None) -> SvcModel:
    """Train the classifier on scaled features and +-1 labels.

    kmat, when given, must be the precomputed RBF kernel matrix of x for
    this kernel (grid searches reuse squared distances across cells).
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(labels, dtype=float)
    if not (np.any(y > 0) and np.any(y < 0)):
        raise SingleClassData("training data must contain both classes")
    if not c_param > 0.0:
        raise ValueError("c_param must be positive")

    if kmat is None:
        kmat = rbf_matrix(kernel, x, x)
    p = -np.ones(len(y))
    sol = solve_dual(kmat, y, p, c_param, tol=tol, max_iter=max_iter)

    free = (sol.beta > 0.0) & (sol.beta < c_param)
    if np.any(free):
        bias = float(np.mean(-y[free] * sol.grad[free]))
    else:
        m_up, m_down = kkt_bounds(sol.beta, sol.grad, y, c_param)
        bias = 0.5 * (m_up + m_down)

    keep = sol.beta > 0.0
    return SvcModel(
        support_vectors=x[keep].copy(),
        coefficients=(y * sol.beta)[keep],
        bias=bias,
        kernel=kernel,
        c_param=float(c_param),
        diagnostics=TrainingDiagnostics(
            iterations=sol.iterations,
            kkt_gap=sol.kkt_gap,
            dual_objective=sol.objective,
            n_support=int(keep.sum()),
            n_free=int(free.sum()),
        ),
    )


def decide(model: SvcModel, x_scaled) -> np.ndarray | int:
    """Class of a scaled feature vector; a decision value of exactly zero is
    deterministically assigned to the coverage class (+1)."""
    values = model.decision_values(x_scaled)
    out = np.where(values >= 0.0, 1, -1)
    if np.ndim(x_scaled) == 1:
        return int(out[0])
    return out


def train_esvr(x, targets, c_param: float, kernel: KernelParams,
               epsilon: float = DEFAULT_EPSILON,
               tol: float = DEFAULT_TOL,
               max_iter: int = DEFAULT_MAX_ITER,
               kmat: np.ndarray | None = None) -> SvrModel:
    """Train the tube regressor on scaled features and dBm targets.

    The dual has 2n variables [alpha, alpha_star] with block signs
    y = [+1, -1]; its linear term carries +sum(m * (alpha - alpha_star)),
    which pairs with the (alpha_star - alpha)-weighted predictor.
    """
    x = np.asarray(x, dtype=float)
    m = np.asarray(targets, dtype=float)
    n = len(m)
    if n < 2:
        raise ValueError("need at least 2 samples")
    if not c_param > 0.0:
        raise ValueError("c_param must be positive")
    if epsilon < 0.0:
        raise ValueError("epsilon must be >= 0")

    if kmat is None:
        kmat = rbf_matrix(kernel, x, x)
    y = np.concatenate([np.ones(n), -np.ones(n)])
    p = epsilon + y * np.concatenate([m, m])
    sol = solve_dual(kmat, y, p, c_param, tol=tol, max_iter=max_iter)

    free = (sol.beta > 0.0) & (sol.beta < c_param)
    if np.any(free):
        bias = float(np.mean(y[free] * sol.grad[free]))
    else:
        m_up, m_down = kkt_bounds(sol.beta, sol.grad, y, c_param)
        bias = -0.5 * (m_up + m_down)

    coef = sol.beta[n:] - sol.beta[:n]  # alpha_star - alpha
    keep = coef != 0.0
    return SvrModel(
        support_vectors=x[keep].copy(),
        coefficients=coef[keep],
        bias=bias,
        kernel=kernel,
        c_param=float(c_param),
        epsilon=float(epsilon),
        diagnostics=TrainingDiagnostics(
            iterations=sol.iterations,
            kkt_gap=sol.kkt_gap,
            dual_objective=sol.objective,
            n_support=int(keep.sum()),
            n_free=int(free.sum()),
        ),
    )


def predict(model: SvrModel, x_scaled) -> np.ndarray | float:
    """Predicted dBm value(s) for scaled feature vector(s)."""
    x = np.atleast_2d(np.asarray(x_scaled, dtype=float))
    if len(model.coefficients) == 0:
        out = np.full(len(x), model.bias)
    else:
        k = rbf_matrix(model.kernel, model.support_vectors, x)
        out = model.coefficients @ k + model.bias
    if np.ndim(x_scaled) == 1:
        return float(out[0])
    return out


@dataclass(frozen=True)
class ModelMetadata:
    """Provenance carried with every trained model pair."""

    terrain_class: TerrainClass
    feature_order: tuple[str, ...]
    training_areas: tuple[str, ...]
    seed: int | None = None
    rx_mast_height: float = 1.5
    reference_tx_power: float = 21.0

    def __post_init__(self):
        object.__setattr__(
            self, "terrain_class", TerrainClass.parse(self.terrain_class))
        object.__setattr__(self, "feature_order", tuple(self.feature_order))
        object.__setattr__(self, "training_areas", tuple(self.training_areas))


@dataclass(frozen=True, eq=False)
class TrainedModels:
    """Scaler + classifier + regressor + tuning outcome + provenance."""

    scaler: Scaler
    svc: SvcModel
    svr: SvrModel
    metadata: ModelMetadata
    hyperparams: dict = field(default_factory=dict)
