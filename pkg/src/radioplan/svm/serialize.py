"""Versioned, checksummed model container.

The container is a single JSON document::

    {"format": "radioplan-models", "version": 1,
     "sha256": "<hex digest of the canonical payload>",
     "payload": {...}}

where the canonical payload is ``json.dumps(payload, sort_keys=True,
separators=(",", ":"))`` encoded as UTF-8.  Floats are serialized with
Python's shortest round-trip repr, so a save/load cycle reproduces every
coefficient bit for bit.  Field layout of the payload:

* ``scaler``: ``means``, ``std_devs`` (length-7 arrays)
* ``svc``: ``support_vectors``, ``coefficients``, ``bias``, ``gamma``,
  ``c_param``
* ``svr``: as ``svc`` plus ``epsilon``
* ``hyperparams``: free-form tuning record
* ``metadata``: ``terrain_class`` ("flat"/"hilly"), ``feature_order``,
  ``training_areas``, ``seed``, ``rx_mast_height``, ``reference_tx_power``
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path

import numpy as np

from ..errors import ChecksumError, VersionMismatch
from .kernel import KernelParams
from .models import ModelMetadata, SvcModel, SvrModel, TrainedModels
from .scaling import Scaler

FORMAT_NAME = "radioplan-models"
FORMAT_VERSION = 1

#: Tolerance on the stored dual equality constraint (sum of coefficients).
EQUALITY_TOL = 1e-8


def _payload(models: TrainedModels) -> dict:
    meta = models.metadata
    return {
        "scaler": {
            "means": models.scaler.means.tolist(),
            "std_devs": models.scaler.std_devs.tolist(),
        },
        "svc": {
            "support_vectors": models.svc.support_vectors.tolist(),
            "coefficients": models.svc.coefficients.tolist(),
            "bias": models.svc.bias,
            "gamma": models.svc.kernel.gamma,
            "c_param": models.svc.c_param,
        },
        "svr": {
            "support_vectors": models.svr.support_vectors.tolist(),
            "coefficients": models.svr.coefficients.tolist(),
            "bias": models.svr.bias,
            "gamma": models.svr.kernel.gamma,
            "c_param": models.svr.c_param,
            "epsilon": models.svr.epsilon,
        },
        "hyperparams": models.hyperparams,
        "metadata": {
            "terrain_class": meta.terrain_class.value,
            "feature_order": list(meta.feature_order),
            "training_areas": list(meta.training_areas),
            "seed": meta.seed,
            "rx_mast_height": meta.rx_mast_height,
            "reference_tx_power": meta.reference_tx_power,
        },
    }


def _canonical(payload: dict) -> bytes:
    return json.dumps(payload, sort_keys=True,
                      separators=(",", ":")).encode("utf-8")


def model_checksum(models: TrainedModels) -> str:
    return hashlib.sha256(_canonical(_payload(models))).hexdigest()


def save_model(models: TrainedModels, path) -> str:
    """Write the container; returns the payload checksum."""
    payload = _payload(models)
    digest = hashlib.sha256(_canonical(payload)).hexdigest()
    doc = {
        "format": FORMAT_NAME,
        "version": FORMAT_VERSION,
        "sha256": digest,
        "payload": payload,
    }
    Path(path).write_text(json.dumps(doc, indent=1), encoding="utf-8")
    return digest


def load_model(path) -> TrainedModels:
    """Read, checksum-verify and invariant-check a model container."""
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ChecksumError(f"{path}: unreadable model container ({exc})") from exc
    if not isinstance(doc, dict) or doc.get("format") != FORMAT_NAME:
        raise ChecksumError(f"{path}: not a {FORMAT_NAME} container")
    if doc.get("version") != FORMAT_VERSION:
        raise VersionMismatch(
            f"{path}: container version {doc.get('version')!r}, "
            f"supported {FORMAT_VERSION}")
    payload = doc.get("payload")
    if not isinstance(payload, dict):
        raise ChecksumError(f"{path}: missing payload")
    digest = hashlib.sha256(_canonical(payload)).hexdigest()
    if digest != doc.get("sha256"):
        raise ChecksumError(f"{path}: checksum mismatch")

    try:
        models = _from_payload(payload)
    except (KeyError, TypeError, ValueError) as exc:
        raise ChecksumError(f"{path}: malformed payload ({exc})") from exc
    _validate(models, path)
    return models


def _from_payload(payload: dict) -> TrainedModels:
    scaler = Scaler(means=np.asarray(payload["scaler"]["means"]),
                    std_devs=np.asarray(payload["scaler"]["std_devs"]))
    svc_p = payload["svc"]
    svc = SvcModel(
        support_vectors=np.asarray(svc_p["support_vectors"], dtype=float),
        coefficients=np.asarray(svc_p["coefficients"], dtype=float),
        bias=float(svc_p["bias"]),
        kernel=KernelParams(gamma=float(svc_p["gamma"])),
        c_param=float(svc_p["c_param"]),
    )
    svr_p = payload["svr"]
    svr = SvrModel(
        support_vectors=np.asarray(svr_p["support_vectors"], dtype=float),
        coefficients=np.asarray(svr_p["coefficients"], dtype=float),
        bias=float(svr_p["bias"]),
        kernel=KernelParams(gamma=float(svr_p["gamma"])),
        c_param=float(svr_p["c_param"]),
        epsilon=float(svr_p["epsilon"]),
    )
    meta_p = payload["metadata"]
    metadata = ModelMetadata(
        terrain_class=meta_p["terrain_class"],
        feature_order=tuple(meta_p["feature_order"]),
        training_areas=tuple(meta_p["training_areas"]),
        seed=meta_p.get("seed"),
        rx_mast_height=float(meta_p.get("rx_mast_height", 1.5)),
        reference_tx_power=float(meta_p.get("reference_tx_power", 21.0)),
    )
    return TrainedModels(scaler=scaler, svc=svc, svr=svr, metadata=metadata,
                         hyperparams=dict(payload.get("hyperparams", {})))


def _validate(models: TrainedModels, path) -> None:
    svc, svr = models.svc, models.svr
    if len(svc.coefficients) and np.max(np.abs(svc.coefficients)) > svc.c_param * (1 + 1e-12):
        raise ChecksumError(f"{path}: classifier coefficients exceed the box")
    if abs(float(np.sum(svc.coefficients))) > EQUALITY_TOL:
        raise ChecksumError(f"{path}: classifier equality constraint violated")
    if len(svr.coefficients) and np.max(np.abs(svr.coefficients)) > svr.c_param * (1 + 1e-12):
        raise ChecksumError(f"{path}: regressor coefficients exceed the box")
    if abs(float(np.sum(svr.coefficients))) > EQUALITY_TOL:
        raise ChecksumError(f"{path}: regressor equality constraint violated")
    if svr.epsilon < 0.0:
        raise ChecksumError(f"{path}: negative epsilon")
