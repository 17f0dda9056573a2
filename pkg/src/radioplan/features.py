"""Per-location geometric features feeding the SVM classifier and regressor.

Seven features are computed for every TX-RX pair.  Five are shared by both
terrain classes: 3D distance, elevation angle of the RX as seen from the TX,
maximum and average blocking-building height, and the fraction of the path
running through buildings.  Flat maps add the distances from each end of the
link to its nearest blocking building; hilly maps instead add the TX-RX
height difference and the fraction of the path running below ground.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .geodata import (
    TERRAIN_SAMPLE_STEP,
    EnvironmentMap,
    GeoPoint,
    LocalPoint,
    TerrainClass,
    distance_with_fallback,
    elevation_at_xy,
    segment_building_intersections,
    segment_terrain_intersections,
)

#: Component order of the 7-vector, fixed so serialized models stay portable.
FLAT_FEATURE_ORDER = (
    "distance", "angle", "h_max", "h_av", "ptb", "d_tx", "d_rx")
HILLY_FEATURE_ORDER = (
    "distance", "angle", "h_max", "h_av", "ptb", "diff_height", "ptg")

N_FEATURES = 7


def feature_order(terrain: TerrainClass) -> tuple[str, ...]:
    return FLAT_FEATURE_ORDER if terrain is TerrainClass.FLAT \
        else HILLY_FEATURE_ORDER


@dataclass(frozen=True)
class Antenna:
    """An antenna at a geographic position, mast_height meters above ground."""

    position: GeoPoint
    mast_height: float

    def __post_init__(self):
        if self.mast_height < 0.0:
            raise ValueError("mast_height must be >= 0")


@dataclass(frozen=True, eq=False)
class FeatureVector:
    """The 7 per-location inputs, ordered per the terrain class."""

    values: np.ndarray
    terrain: TerrainClass

    def __post_init__(self):
        arr = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "values", arr)
        if arr.shape != (N_FEATURES,):
            raise ValueError(f"feature vector must have {N_FEATURES} components")
        d, _, h_max, h_av, ptb = arr[:5]
        if not d > 0.0:
            raise ValueError("distance must be positive")
        if not 0.0 <= ptb <= 1.0:
            raise ValueError("ptb must lie in [0, 1]")
        if not h_max >= h_av >= 0.0:
            raise ValueError("expected h_max >= h_av >= 0")
        if self.terrain is TerrainClass.HILLY and not 0.0 <= arr[6] <= 1.0:
            raise ValueError("ptg must lie in [0, 1]")

    @property
    def names(self) -> tuple[str, ...]:
        return feature_order(self.terrain)


class BlockingProfile(NamedTuple):
    h_max: float
    h_av: float
    ptb: float
    d_tx: float
    d_rx: float
    count: int


class _LinkGeometry(NamedTuple):
    tx_point: LocalPoint   # with z = terrain + mast
    rx_point: LocalPoint
    d_wgs84: float
    diff_height: float     # TX elevation minus RX elevation
    distance: float        # sqrt(diff_height^2 + d_wgs84^2)
    length_local: float    # 3D segment length in the map frame


def antenna_elevation(env: EnvironmentMap, antenna: Antenna) -> float:
    """Absolute antenna elevation: interpolated terrain plus mast height."""
    local = env.frame.to_local(antenna.position)
    ground = float(elevation_at_xy(env, local.x, local.y)[0])
    return ground + antenna.mast_height


def _link_geometry(env: EnvironmentMap, tx: Antenna, rx: Antenna) -> _LinkGeometry:
    tz = antenna_elevation(env, tx)
    rz = antenna_elevation(env, rx)
    txy = env.frame.to_local(tx.position)
    rxy = env.frame.to_local(rx.position)
    d_wgs, fell_back = distance_with_fallback(tx.position, rx.position)
    if fell_back:
        warnings.warn("geodesic solver fell back to the spherical approximation")
    diff = tz - rz
    return _LinkGeometry(
        tx_point=LocalPoint(txy.x, txy.y, tz),
        rx_point=LocalPoint(rxy.x, rxy.y, rz),
        d_wgs84=d_wgs,
        diff_height=diff,
        distance=math.hypot(diff, d_wgs),
        length_local=math.dist((txy.x, txy.y, tz), (rxy.x, rxy.y, rz)),
    )


def differential_height(tx: Antenna, rx: Antenna, env: EnvironmentMap) -> float:
    """TX antenna elevation minus RX antenna elevation, meters."""
    return antenna_elevation(env, tx) - antenna_elevation(env, rx)


def tx_rx_distance(tx: Antenna, rx: Antenna, env: EnvironmentMap) -> float:
    """3D link distance combining the geodesic ground distance with the
    antenna height difference."""
    return _link_geometry(env, tx, rx).distance


def angular_deviation(tx: Antenna, rx: Antenna, env: EnvironmentMap) -> float:
    """Elevation angle (radians) of the RX antenna as seen from the TX;
    positive when the RX sits above the TX."""
    geom = _link_geometry(env, tx, rx)
    if geom.d_wgs84 <= 0.0:
        raise ValueError("antennas must be horizontally separated")
    return math.atan2(-geom.diff_height, geom.d_wgs84)


def blocking_profile(env: EnvironmentMap, tx: Antenna, rx: Antenna) -> BlockingProfile:
    """Obstruction summary of the TX-RX segment.

    With no blocking buildings the heights and the through-building fraction
    are zero and both nearest-building distances equal the link distance (the
    free-space run spans the whole path), keeping every component continuous
    as an obstruction vanishes.
    """
    geom = _link_geometry(env, tx, rx)
    return _blocking_profile_from_geometry(env, geom)


def _blocking_profile_from_geometry(env: EnvironmentMap,
                                    geom: _LinkGeometry) -> BlockingProfile:
    cuts = segment_building_intersections(env, geom.tx_point, geom.rx_point)
    if not cuts:
        return BlockingProfile(0.0, 0.0, 0.0, geom.distance, geom.distance, 0)
    heights = [c.height for c in cuts]
    # Segment fractions come from the map frame; distances along the link are
    # expressed on the geodesic-based distance so that ptb stays within [0, 1].
    scale = geom.distance / geom.length_local
    chord_sum = sum(c.chord for c in cuts)
    return BlockingProfile(
        h_max=max(heights),
        h_av=sum(heights) / len(heights),
        ptb=min(chord_sum / geom.length_local, 1.0),
        d_tx=cuts[0].enter * scale,
        d_rx=(geom.length_local - cuts[-1].exit) * scale,
        count=len(cuts),
    )


def portion_through_ground(env: EnvironmentMap, tx: Antenna, rx: Antenna,
                           step: float = TERRAIN_SAMPLE_STEP) -> float:
    """Fraction of the TX-RX segment running below ground (hilly maps)."""
    geom = _link_geometry(env, tx, rx)
    return _ptg_from_geometry(env, geom, step)


def _ptg_from_geometry(env: EnvironmentMap, geom: _LinkGeometry,
                       step: float) -> float:
    runs = segment_terrain_intersections(
        env, geom.tx_point, geom.rx_point, step=step)
    if not runs:
        return 0.0
    return min(sum(runs) / geom.length_local, 1.0)


def extract_features(env: EnvironmentMap, tx: Antenna, rx: Antenna,
                     terrain_step: float = TERRAIN_SAMPLE_STEP) -> FeatureVector:
    """Assemble the 7-vector for one TX-RX pair."""
    geom = _link_geometry(env, tx, rx)
    return _assemble(env, geom, terrain_step)


def _assemble(env: EnvironmentMap, geom: _LinkGeometry,
              terrain_step: float) -> FeatureVector:
    if geom.distance <= 0.0:
        raise ValueError("antennas coincide")
    # A purely vertical link (a lattice node under the antenna) gets the
    # atan2 limit of +-pi/2.
    phi = math.atan2(-geom.diff_height, geom.d_wgs84)
    profile = _blocking_profile_from_geometry(env, geom)
    common = [geom.distance, phi, profile.h_max, profile.h_av, profile.ptb]
    if env.terrain_class is TerrainClass.FLAT:
        values = common + [profile.d_tx, profile.d_rx]
    else:
        ptg = _ptg_from_geometry(env, geom, terrain_step)
        values = common + [geom.diff_height, ptg]
    return FeatureVector(values=np.asarray(values), terrain=env.terrain_class)


def extract_features_array(env: EnvironmentMap, tx: Antenna,
                           rx_lat, rx_lon, rx_mast_height: float,
                           terrain_step: float = TERRAIN_SAMPLE_STEP) -> np.ndarray:
    """Feature matrix (n, 7) for many RX positions sharing one mast height.

    Same composition as extract_features, with the RX ground elevations
    evaluated in one vectorized pass.
    """
    rx_lat = np.atleast_1d(np.asarray(rx_lat, dtype=float))
    rx_lon = np.atleast_1d(np.asarray(rx_lon, dtype=float))
    rx_x, rx_y = env.frame.lonlat_to_xy(rx_lon, rx_lat)
    rx_z = elevation_at_xy(env, rx_x, rx_y) + rx_mast_height

    tz = antenna_elevation(env, tx)
    txy = env.frame.to_local(tx.position)
    tx_point = LocalPoint(txy.x, txy.y, tz)

    out = np.empty((len(rx_lat), N_FEATURES))
    for i in range(len(rx_lat)):
        d_wgs, fell_back = distance_with_fallback(
            tx.position, GeoPoint(float(rx_lat[i]), float(rx_lon[i])))
        if fell_back:
            warnings.warn(
                "geodesic solver fell back to the spherical approximation")
        diff = tz - float(rx_z[i])
        rx_point = LocalPoint(float(rx_x[i]), float(rx_y[i]), float(rx_z[i]))
        geom = _LinkGeometry(
            tx_point=tx_point,
            rx_point=rx_point,
            d_wgs84=d_wgs,
            diff_height=diff,
            distance=math.hypot(diff, d_wgs),
            length_local=math.dist(
                (tx_point.x, tx_point.y, tx_point.z),
                (rx_point.x, rx_point.y, rx_point.z)),
        )
        out[i] = _assemble(env, geom, terrain_step).values
    return out
