"""The prediction modes.

* Mode 1: train and evaluate on one area's own measurements (accuracy check).
* Mode 2: blind raster prediction over a lattice with models trained
  elsewhere (the planning mode).
* Mode 3: blind prediction evaluated against local measurements (the
  generalization check); the 3' variant allows same-town, different-district
  training data.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from ..dataset import (
    LabeledSample,
    feature_matrix,
    filter_test_by_decision,
    label as label_sample,
    permute_and_split,
)
from ..errors import (
    InsufficientData,
    LeakageError,
    SingleClassData,
    TerrainClassMismatch,
)
from ..features import FeatureVector, extract_features_array, feature_order
from ..geodata import (
    EnvironmentMap,
    points_inside_any_building,
    project_to_road,
)
from ..svm import (
    KernelParams,
    ModelMetadata,
    TrainedModels,
    apply_scaler,
    decide,
    fit_scaler,
    predict,
    squared_distances,
    train_csvc,
    train_esvr,
)
from ..tuning import DEFAULT_FOLDS, GridSpec, cross_validate, grid_search_best
from .budget import Concentrator, LinkBudget
from .metrics import EvaluationReport, compute_metrics
from .raster import ConcentratorLayer, CoverageRaster, LatticeSpec

#: Default receiver mast height (meters): a vehicle roof antenna.
DEFAULT_RX_MAST = 1.5


@dataclass(frozen=True)
class Pm1Result:
    models: TrainedModels
    report: EvaluationReport
    classification_search: object
    regression_search: object


def _measurement_features(env, measurements, tx_antenna, rx_mast_height,
                          project_gps, terrain_step=None):
    """Feature matrix for measurement positions, optionally snapping GPS
    estimates onto the nearest road centerline first."""
    lats, lons = [], []
    for m in measurements:
        p = m.position
        if project_gps and env.roads:
            p = project_to_road(env, p).point
        lats.append(p.latitude)
        lons.append(p.longitude)
    kwargs = {} if terrain_step is None else {"terrain_step": terrain_step}
    return extract_features_array(
        env, tx_antenna, lats, lons, rx_mast_height, **kwargs)


def _labeled_samples(env, measurements, features, area) -> list[LabeledSample]:
    return [
        label_sample(m, FeatureVector(values=row, terrain=env.terrain_class),
                     area)
        for m, row in zip(measurements, features)
    ]


def run_pm1(env: EnvironmentMap, measurements, tx: Concentrator,
            budget: LinkBudget, seed: int, area: str,
            cls_grid: GridSpec | None = None,
            reg_grid: GridSpec | None = None,
            folds: int = DEFAULT_FOLDS,
            epsilon: float = 3.0,
            tol: float = 1e-3,
            workers: int = 1,
            rx_mast_height: float = DEFAULT_RX_MAST,
            project_gps: bool = True) -> Pm1Result:
    """Full local pipeline: features, split, tune, train, evaluate.

    Hyperparameters maximize cross-validated accuracy (classifier) and
    minimize cross-validated RMSE (regressor) on the training split; the
    held-out split is used once, for the final report.
    """
    if len(measurements) < 100:
        raise InsufficientData(
            f"mode 1 needs at least 100 measurements, got {len(measurements)}")
    rssi = [m.rssi for m in measurements]
    if all(r > -120.0 for r in rssi) or all(r == -120.0 for r in rssi):
        raise SingleClassData("measurements carry a single coverage label")
    cls_grid = cls_grid or GridSpec.classification_default()
    reg_grid = reg_grid or GridSpec.regression_default()

    features = _measurement_features(
        env, measurements, tx.antenna, rx_mast_height, project_gps)
    samples = _labeled_samples(env, measurements, features, area)
    split = permute_and_split(samples, seed=seed)

    x_train, z_train, _ = feature_matrix(split.train_cls)
    scaler = fit_scaler(x_train)
    xs_train = apply_scaler(scaler, x_train)
    sq_train = squared_distances(xs_train, xs_train)

    cls_search = grid_search_best(
        cls_grid,
        lambda c, g: cross_validate(
            xs_train, z_train, (c, g), task="classification", folds=folds,
            seed=seed, tol=tol, sqdists=sq_train),
        maximize=True, workers=workers)
    svc = train_csvc(xs_train, z_train, cls_search.c,
                     KernelParams(cls_search.gamma), tol=tol)

    x_reg, _, m_reg = feature_matrix(split.train_reg)
    xs_reg = apply_scaler(scaler, x_reg)
    sq_reg = squared_distances(xs_reg, xs_reg)
    reg_search = grid_search_best(
        reg_grid,
        lambda c, g: cross_validate(
            xs_reg, m_reg, (c, g), task="regression", folds=folds,
            seed=seed, epsilon=epsilon, tol=tol, sqdists=sq_reg),
        maximize=False, workers=workers)
    svr = train_esvr(xs_reg, m_reg, reg_search.c,
                     KernelParams(reg_search.gamma), epsilon=epsilon, tol=tol)

    models = TrainedModels(
        scaler=scaler, svc=svc, svr=svr,
        metadata=ModelMetadata(
            terrain_class=env.terrain_class,
            feature_order=feature_order(env.terrain_class),
            training_areas=(area,),
            seed=seed,
            rx_mast_height=rx_mast_height,
            reference_tx_power=tx.tx_power,
        ),
        hyperparams={
            "classification": {"c": cls_search.c, "gamma": cls_search.gamma,
                               "cv_score": cls_search.score},
            "regression": {"c": reg_search.c, "gamma": reg_search.gamma,
                           "cv_score": reg_search.score,
                           "epsilon": epsilon},
        },
    )

    # Held-out evaluation: accuracy over the full test split, RMSE over its
    # covered samples (this mode checks the methods on their own area).
    x_test, z_test, m_test = feature_matrix(split.test_cls)
    xs_test = apply_scaler(scaler, x_test)
    decisions = decide(svc, xs_test)
    predicted = predict(svr, xs_test)
    report = compute_metrics(decisions, z_test, m_test,
                             predicted_rss=predicted,
                             regression_mask=(z_test == 1))
    return Pm1Result(models=models, report=report,
                     classification_search=cls_search,
                     regression_search=reg_search)


def _check_terrain(env: EnvironmentMap, models: TrainedModels) -> None:
    if models.metadata.terrain_class is not env.terrain_class:
        raise TerrainClassMismatch(
            f"models trained for {models.metadata.terrain_class.value} "
            f"terrain applied to a {env.terrain_class.value} map")


def run_pm2(env: EnvironmentMap, concentrators, budget: LinkBudget,
            models: TrainedModels, lattice: LatticeSpec,
            rx_mast_height: float | None = None,
            workers: int = 1) -> CoverageRaster:
    """Blind raster prediction for one or more concentrators.

    Every lattice node gets, per concentrator, an adjusted RSS prediction
    (shifted by the concentrator's power delta against the training power)
    and the classifier's coverage decision; the best server at a node is the
    covering concentrator with the strongest adjusted RSS, ties broken by
    the lower concentrator index.  Nodes inside building footprints are
    predicted like any other and flagged.
    """
    concentrators = list(concentrators)
    if not concentrators:
        raise ValueError("need at least one concentrator")
    _check_terrain(env, models)
    if rx_mast_height is None:
        rx_mast_height = models.metadata.rx_mast_height

    xs, ys = lattice.axes(env.frame)
    grid_x, grid_y = np.meshgrid(xs, ys)  # shape (ny, nx)
    flat_x = grid_x.ravel()
    flat_y = grid_y.ravel()
    lon, lat = env.frame.xy_to_lonlat(flat_x, flat_y)
    shape = grid_x.shape

    def predict_layer(conc: Concentrator) -> ConcentratorLayer:
        feats = extract_features_array(
            env, conc.antenna, lat, lon, rx_mast_height)
        scaled = apply_scaler(models.scaler, feats)
        covered = decide(models.svc, scaled) == 1
        rss = predict(models.svr, scaled) + budget.power_adjustment(
            conc.tx_power)
        return ConcentratorLayer(
            label=conc.label,
            tx_power=conc.tx_power,
            rss=rss.reshape(shape),
            covered=covered.reshape(shape),
            budget_covered=(rss >= budget.sensitivity).reshape(shape),
        )

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            layers = list(pool.map(predict_layer, concentrators))
    else:
        layers = [predict_layer(c) for c in concentrators]

    stacked = np.stack([
        np.where(layer.covered, layer.rss, -np.inf) for layer in layers])
    best = np.argmax(stacked, axis=0)
    best_server = np.where(np.isfinite(np.max(stacked, axis=0)), best, -1)

    lons_axis, _ = env.frame.xy_to_lonlat(xs, np.zeros_like(xs))
    _, lats_axis = env.frame.xy_to_lonlat(np.zeros_like(ys), ys)

    return CoverageRaster(
        lattice=lattice,
        xs=xs, ys=ys,
        lons=np.asarray(lons_axis), lats=np.asarray(lats_axis),
        layers=tuple(layers),
        best_server=best_server.astype(int),
        inside_building=points_inside_any_building(
            env, flat_x, flat_y).reshape(shape),
        sensitivity=budget.sensitivity,
    )


def _town(tag: str) -> str:
    return tag.split("/", 1)[0]


def check_leakage(models: TrainedModels, area: str, variant: str) -> None:
    """Refuse blind evaluation when the target area leaked into training.

    Area tags are "town" or "town/district".  Mode 3 requires the whole town
    to be absent from training; mode 3' only requires the exact district to
    be absent (same-town different-district data is its point).
    """
    training = models.metadata.training_areas
    if variant == "pm3":
        clashes = [t for t in training if _town(t) == _town(area)]
    elif variant == "pm3prime":
        clashes = [t for t in training if t == area]
    else:
        raise ValueError("variant must be 'pm3' or 'pm3prime'")
    if clashes:
        raise LeakageError(
            f"target area {area!r} overlaps training tags {clashes}")


def run_pm3(env: EnvironmentMap, measurements, tx: Concentrator,
            budget: LinkBudget, models: TrainedModels, variant: str,
            area: str, rx_mast_height: float | None = None,
            project_gps: bool = True) -> EvaluationReport:
    """Blind prediction scored against local measurements.

    All points are classified; the regression error is assessed only on
    measurements that are covered and that the classifier assigns to the
    coverage area, which keeps the RMSE meaningful.
    """
    if not measurements:
        raise InsufficientData("no measurements to evaluate")
    _check_terrain(env, models)
    check_leakage(models, area, variant)
    if rx_mast_height is None:
        rx_mast_height = models.metadata.rx_mast_height

    features = _measurement_features(
        env, measurements, tx.antenna, rx_mast_height, project_gps)
    samples = _labeled_samples(env, measurements, features, area)
    x, z, m = feature_matrix(samples)
    scaled = apply_scaler(models.scaler, x)
    decisions = decide(models.svc, scaled)

    # Regression subset via the documented filter, then recomposed as a mask.
    test_reg = [s for s in samples if s.label == 1]
    kept = filter_test_by_decision(
        test_reg,
        lambda fv: decide(models.svc, apply_scaler(models.scaler, fv.values)))
    kept_ids = {id(s) for s in kept}
    mask = np.asarray([s.label == 1 and id(s) in kept_ids for s in samples])

    predicted = predict(models.svr, scaled) + budget.power_adjustment(
        tx.tx_power)
    return compute_metrics(decisions, z, m, predicted_rss=predicted,
                           regression_mask=mask)
