"""Support-vector classification and regression with a shared SMO core."""

from .kernel import KernelParams, rbf, rbf_matrix, squared_distances
from .models import (
    DEFAULT_EPSILON,
    ModelMetadata,
    SvcModel,
    SvrModel,
    TrainedModels,
    TrainingDiagnostics,
    decide,
    predict,
    train_csvc,
    train_esvr,
)
from .scaling import Scaler, apply_scaler, fit_scaler, invert_scaler
from .serialize import load_model, model_checksum, save_model
from .smo import DEFAULT_MAX_ITER, DEFAULT_TOL, DualSolution, kkt_bounds, solve_dual

__all__ = [
    "DEFAULT_EPSILON",
    "DEFAULT_MAX_ITER",
    "DEFAULT_TOL",
    "DualSolution",
    "KernelParams",
    "ModelMetadata",
    "Scaler",
    "SvcModel",
    "SvrModel",
    "TrainedModels",
    "TrainingDiagnostics",
    "apply_scaler",
    "decide",
    "fit_scaler",
    "invert_scaler",
    "kkt_bounds",
    "load_model",
    "model_checksum",
    "predict",
    "rbf",
    "rbf_matrix",
    "save_model",
    "solve_dual",
    "squared_distances",
    "train_csvc",
    "train_esvr",
]
