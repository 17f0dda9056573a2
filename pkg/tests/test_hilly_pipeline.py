"""End-to-end run on a hilly map: the terrain-class feature variant
(height difference and through-ground fraction) through training,
evaluation and raster prediction."""

import math

import numpy as np
import pytest

from radioplan.dataset import Measurement
from radioplan.features import HILLY_FEATURE_ORDER, Antenna
from radioplan.geodata import (
    Building,
    ContourLine,
    LocalPoint,
    segment_building_intersections,
    segment_terrain_intersections,
)
from radioplan.planner import Concentrator, LatticeSpec, LinkBudget, run_pm1, run_pm2
from radioplan.tuning import GridSpec

from conftest import make_map, square_ring


@pytest.fixture(scope="module")
def hilly_town():
    """A village on a west-facing slope with a ridge shading its east end."""
    rng = np.random.default_rng(77)
    contours = [
        ContourLine(np.array([[x, -1500.0], [x, 1500.0]]), elevation)
        for x, elevation in [(-1200.0, 320.0), (-400.0, 280.0),
                             (400.0, 240.0), (800.0, 330.0),
                             (1200.0, 240.0)]
    ]
    buildings = []
    for bx in np.arange(-900.0, 300.0, 120.0):
        for by in np.arange(-400.0, 401.0, 160.0):
            cx = bx + float(rng.uniform(-20, 20))
            cy = by + float(rng.uniform(-30, 30))
            buildings.append(Building(
                square_ring(cx, cy, 9.0),
                roof_height=float(rng.uniform(5.0, 12.0)),
                base_elevation=0.0))
    env0 = make_map(terrain="hilly", contours=contours)
    # Rebuild with bases resting on the interpolated terrain.
    from radioplan.geodata import elevation_at_xy
    rebased = []
    for b in buildings:
        cx = float(b.footprint[:, 0].mean())
        cy = float(b.footprint[:, 1].mean())
        base = float(elevation_at_xy(env0, cx, cy)[0])
        rebased.append(Building(b.footprint, b.roof_height, base))
    env = make_map(terrain="hilly", contours=contours, buildings=rebased)

    tx_xy = (-600.0, 0.0)
    tx_ground = float(elevation_at_xy(env, *tx_xy)[0])
    tx_point = LocalPoint(tx_xy[0], tx_xy[1], tx_ground + 12.0)
    tx = Concentrator(
        antenna=Antenna(env.frame.to_geo(LocalPoint(*tx_xy)), 12.0),
        tx_power=21.0, label="hill-tx")

    # Measurements along east-west streets; truth penalizes distance,
    # rooftop chords and terrain-shadowed path length.
    measurements = []
    ys = np.arange(-500.0, 501.0, 125.0)
    n = 420
    for i in range(n):
        x = float(rng.uniform(-1100.0, 1650.0))
        y = float(ys[i % len(ys)]) + float(rng.uniform(-10, 10))
        ground = float(elevation_at_xy(env, x, y)[0])
        rx_point = LocalPoint(x, y, ground + 1.5)
        d = math.dist((tx_point.x, tx_point.y, tx_point.z),
                      (rx_point.x, rx_point.y, rx_point.z))
        chord = sum(c.chord for c in segment_building_intersections(
            env, tx_point, rx_point))
        shadow = sum(segment_terrain_intersections(
            env, tx_point, rx_point, step=2.0))
        rss = (-58.0 - 35.0 * math.log10(max(d, 1.0) / 100.0)
               - 0.4 * chord - 0.25 * shadow
               + float(rng.normal(0.0, 1.5)))
        rss = rss if rss >= -119.0 else -120.0
        lon, lat = env.frame.xy_to_lonlat(x, y)
        measurements.append(Measurement(
            timestamp=f"2021-06-01T09:{i // 60:02d}:{i % 60:02d}",
            position=env.frame.to_geo(LocalPoint(x, y, ground + 1.5)),
            speed=6.0, heading=90.0, satellite_count=9,
            meter_address="0xBEEF", rssi=float(rss)))
    return env, measurements, tx


def test_hilly_training_and_raster(hilly_town):
    env, measurements, tx = hilly_town
    labels = [1 if m.rssi > -120.0 else -1 for m in measurements]
    assert 0.2 < np.mean(np.array(labels) > 0) < 0.8

    result = run_pm1(
        env, measurements, tx, LinkBudget(), seed=3, area="hillside",
        cls_grid=GridSpec.classification_default(step=4),
        reg_grid=GridSpec.regression_default(step=4),
        folds=3, project_gps=False)
    assert result.models.metadata.terrain_class is env.terrain_class
    assert result.models.metadata.feature_order == HILLY_FEATURE_ORDER
    # The terrain shadowing is learnable from the hilly feature set.
    assert result.report.accuracy >= 75.0
    assert result.report.rmse is not None and result.report.rmse <= 8.0

    lattice = LatticeSpec(
        corner_a=env.frame.to_geo(LocalPoint(-200.0, -120.0)),
        corner_b=env.frame.to_geo(LocalPoint(200.0, 120.0)),
        step_x=40.0, step_y=40.0)
    raster = run_pm2(env, [tx], LinkBudget(), result.models, lattice)
    assert raster.shape == (7, 11)
    assert raster.layers[0].covered.any()
