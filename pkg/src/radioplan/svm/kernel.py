"""The radial basis function kernel, the single kernel used throughout."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class KernelParams:
    gamma: float

    def __post_init__(self):
        if not self.gamma > 0.0:
            raise ValueError("gamma must be positive")


def squared_distances(x, y) -> np.ndarray:
    """Pairwise squared Euclidean distances between rows of x and y."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    x2 = np.sum(x * x, axis=1)[:, None]
    y2 = np.sum(y * y, axis=1)[None, :]
    d2 = x2 + y2 - 2.0 * (x @ y.T)
    np.maximum(d2, 0.0, out=d2)  # guard tiny negatives from cancellation
    return d2


def rbf(params: KernelParams, x, y) -> float:
    """exp(-gamma * ||x - y||^2) for a single pair of vectors."""
    diff = np.asarray(x, dtype=float) - np.asarray(y, dtype=float)
    return float(np.exp(-params.gamma * float(diff @ diff)))


def rbf_matrix(params: KernelParams, x, y) -> np.ndarray:
    """Kernel matrix K[i, j] = exp(-gamma * ||x_i - y_j||^2)."""
    return np.exp(-params.gamma * squared_distances(x, y))
