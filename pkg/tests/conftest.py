import numpy as np
import pytest

from radioplan.dataset import feature_matrix, label, permute_and_split
from radioplan.features import FeatureVector, extract_features_array, feature_order
from radioplan.geodata import (
    EnvironmentMap,
    GeoPoint,
    LocalFrame,
    TerrainClass,
    compute_bounds,
)
from radioplan.svm import (
    KernelParams,
    ModelMetadata,
    TrainedModels,
    apply_scaler,
    fit_scaler,
    train_csvc,
    train_esvr,
)

DEFAULT_ORIGIN = GeoPoint(latitude=44.5, longitude=11.0)


def make_map(buildings=(), contours=(), roads=(), terrain="flat",
             ground=0.0, origin=DEFAULT_ORIGIN):
    """Assemble an EnvironmentMap from geometry already in local meters."""
    return EnvironmentMap(
        origin=origin,
        frame=LocalFrame(origin),
        buildings=tuple(buildings),
        contours=tuple(contours),
        roads=tuple(roads),
        terrain_class=TerrainClass.parse(terrain),
        ground_elevation=ground,
        bounds=compute_bounds(buildings, contours, roads),
    )


def square_ring(cx, cy, half):
    """Axis-aligned square footprint centered at (cx, cy)."""
    return np.array([
        [cx - half, cy - half],
        [cx + half, cy - half],
        [cx + half, cy + half],
        [cx - half, cy + half],
    ])


@pytest.fixture
def rng():
    return np.random.default_rng(20260810)


def quick_models(town, seed=7, cls=(8.0, 0.5), reg=(64.0, 0.125)):
    """Train a model pair on a synthetic town at fixed hyperparameters
    (grid search is exercised separately)."""
    env = town.env
    lats = [m.position.latitude for m in town.measurements]
    lons = [m.position.longitude for m in town.measurements]
    feats = extract_features_array(env, town.tx.antenna, lats, lons,
                                   town.spec.rx_mast_m)
    samples = [
        label(m, FeatureVector(values=row, terrain=env.terrain_class),
              town.area)
        for m, row in zip(town.measurements, feats)
    ]
    split = permute_and_split(samples, seed=seed)
    x, z, _ = feature_matrix(split.train_cls)
    scaler = fit_scaler(x)
    svc = train_csvc(apply_scaler(scaler, x), z, cls[0],
                     KernelParams(cls[1]), tol=1e-3)
    xr, _, mr = feature_matrix(split.train_reg)
    svr = train_esvr(apply_scaler(scaler, xr), mr, reg[0],
                     KernelParams(reg[1]), epsilon=3.0, tol=1e-3)
    return TrainedModels(
        scaler=scaler, svc=svc, svr=svr,
        metadata=ModelMetadata(
            terrain_class=env.terrain_class,
            feature_order=feature_order(env.terrain_class),
            training_areas=(town.area,),
            seed=seed,
            rx_mast_height=town.spec.rx_mast_m,
            reference_tx_power=town.truth.tx_power,
        ),
        hyperparams={"classification": {"c": cls[0], "gamma": cls[1]},
                     "regression": {"c": reg[0], "gamma": reg[1]}},
    )


def small_town_spec(seed, n_points=400):
    from radioplan.synthetic import TownSpec
    return TownSpec(seed=seed, n_points=n_points, box_half_m=3000.0,
                    core_half_m=500.0)


@pytest.fixture(scope="session")
def small_town():
    from radioplan.synthetic import TruthParams, build_town
    return build_town(small_town_spec(seed=5), TruthParams(tx_gain=-10.0))


@pytest.fixture(scope="session")
def town_models(small_town):
    return quick_models(small_town)
