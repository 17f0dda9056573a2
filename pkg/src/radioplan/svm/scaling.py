"""Z-score feature scaling fitted on the training set."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import DegenerateFeature


@dataclass(frozen=True, eq=False)
class Scaler:
    means: np.ndarray
    std_devs: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "means", np.asarray(self.means, dtype=float))
        object.__setattr__(self, "std_devs",
                           np.asarray(self.std_devs, dtype=float))
        if np.any(self.std_devs <= 0.0):
            bad = int(np.argmax(self.std_devs <= 0.0))
            raise DegenerateFeature(f"feature {bad} has non-positive spread")


def fit_scaler(x) -> Scaler:
    """Per-feature mean and (population) standard deviation of the rows of x."""
    x = np.asarray(x, dtype=float)
    if x.ndim != 2 or len(x) < 2:
        raise ValueError("need a 2D array with at least 2 samples")
    means = x.mean(axis=0)
    stds = x.std(axis=0)
    if np.any(stds == 0.0):
        bad = int(np.argmax(stds == 0.0))
        raise DegenerateFeature(
            f"feature {bad} is constant on the training set")
    return Scaler(means=means, std_devs=stds)


def apply_scaler(scaler: Scaler, x) -> np.ndarray:
    """(x - mean) / std, componentwise; works on single vectors or matrices."""
    return (np.asarray(x, dtype=float) - scaler.means) / scaler.std_devs


def invert_scaler(scaler: Scaler, x) -> np.ndarray:
    """Exact algebraic inverse of apply_scaler."""
    return np.asarray(x, dtype=float) * scaler.std_devs + scaler.means
