"""Environment map ingestion.

Map file layout (UTF-8 JSON, geo-interchange flavored; all coordinates are
WGS-84 ``[lon, lat]`` pairs):

.. code-block:: json

    {
      "crs": "WGS84",
      "origin": {"latitude": 44.39, "longitude": 10.96},
      "ground_elevation": 0.0,
      "layers": {
        "buildings": {"type": "FeatureCollection", "features": [
          {"type": "Feature",
           "properties": {"id": "b1", "height": 8.0, "base_elevation": 12.0},
           "geometry": {"type": "Polygon", "coordinates": [[[lon, lat], ...]]}}
        ]},
        "contours": {"type": "FeatureCollection", "features": [
          {"type": "Feature", "properties": {"elevation": 250.0},
           "geometry": {"type": "LineString", "coordinates": [[lon, lat], ...]}}
        ]},
        "roads": {"type": "FeatureCollection", "features": [
          {"type": "Feature", "properties": {"name": "via Roma"},
           "geometry": {"type": "LineString", "coordinates": [[lon, lat], ...]}}
        ]}
      }
    }

Rules:

* ``layers.buildings`` must be present (its feature list may be empty);
  ``contours`` and ``roads`` default to empty when absent.
* every building needs a numeric ``height`` (roof height above its base);
  ``base_elevation`` is optional and defaults to the terrain elevation at the
  footprint centroid.
* ``origin`` defaults to the centroid of the bounds of all geometry.
* the terrain class is never read from the file; the caller states it.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from ..errors import ParseError, SchemaError
from .envmap import (
    Building,
    ContourLine,
    EnvironmentMap,
    Road,
    TerrainClass,
    compute_bounds,
    elevation_at_xy,
)
from .frame import GeoPoint, LocalFrame


def load_map(path, terrain_class) -> EnvironmentMap:
    """Load and validate an environment map file."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"{path}: {exc}") from exc
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: not valid JSON ({exc})") from exc
    return parse_map(obj, terrain_class, source=str(path))


def parse_map(obj, terrain_class, source: str = "<memory>") -> EnvironmentMap:
    """Build an EnvironmentMap from an already-parsed map document."""
    terrain = TerrainClass.parse(terrain_class)
    if not isinstance(obj, dict):
        raise SchemaError(f"{source}: top level must be an object")
    crs = obj.get("crs", "WGS84")
    if str(crs).upper().replace("-", "") not in ("WGS84", "EPSG:4326"):
        raise SchemaError(f"{source}: unsupported crs {crs!r} (WGS-84 required)")
    layers = obj.get("layers")
    if not isinstance(layers, dict):
        raise SchemaError(f"{source}: missing 'layers' object")
    if "buildings" not in layers:
        raise SchemaError(f"{source}: missing required layer 'buildings'")

    building_feats = _features(layers, "buildings", source)
    contour_feats = _features(layers, "contours", source)
    road_feats = _features(layers, "roads", source)

    # First pass in geographic coordinates: geometry + required attributes.
    raw_buildings = []
    missing_height = []
    for i, feat in enumerate(building_feats):
        fid = _feature_id(feat, "buildings", i)
        coords = _polygon_coords(feat, fid, source)
        props = feat.get("properties") or {}
        height = props.get("height")
        if not isinstance(height, (int, float)) or isinstance(height, bool):
            missing_height.append(fid)
            continue
        base = props.get("base_elevation")
        if base is not None and not isinstance(base, (int, float)):
            raise SchemaError(f"{source}: {fid}: base_elevation must be numeric")
        raw_buildings.append((fid, coords, float(height), base))
    if missing_height:
        raise SchemaError(
            f"{source}: buildings without a numeric 'height' attribute: "
            + ", ".join(missing_height))

    raw_contours = []
    for i, feat in enumerate(contour_feats):
        fid = _feature_id(feat, "contours", i)
        coords = _line_coords(feat, fid, source)
        props = feat.get("properties") or {}
        elevation = props.get("elevation")
        if not isinstance(elevation, (int, float)) or isinstance(elevation, bool) \
                or not math.isfinite(float(elevation)):
            raise SchemaError(
                f"{source}: {fid}: contour needs a finite numeric 'elevation'")
        raw_contours.append((coords, float(elevation)))

    raw_roads = []
    for i, feat in enumerate(road_feats):
        fid = _feature_id(feat, "roads", i)
        coords = _line_coords(feat, fid, source)
        props = feat.get("properties") or {}
        raw_roads.append((coords, str(props.get("name", fid))))

    origin = _resolve_origin(obj, raw_buildings, raw_contours, raw_roads, source)
    frame = LocalFrame(origin)
    ground = float(obj.get("ground_elevation", 0.0))

    contours = tuple(
        ContourLine(polyline=_to_local(frame, coords), elevation=elev)
        for coords, elev in raw_contours)
    roads = tuple(
        Road(centerline=_to_local(frame, coords), name=name)
        for coords, name in raw_roads)

    # Terrain-only map used to fill in missing building base elevations.
    terrain_only = EnvironmentMap(
        origin=origin, frame=frame, buildings=(), contours=contours,
        roads=(), terrain_class=terrain, ground_elevation=ground)

    buildings = []
    for fid, coords, height, base in raw_buildings:
        ring = _to_local(frame, coords)
        if base is None:
            cx, cy = ring[:, 0].mean(), ring[:, 1].mean()
            base = float(elevation_at_xy(terrain_only, cx, cy)[0]) \
                if (terrain is TerrainClass.HILLY and contours) else ground
        buildings.append(Building(
            footprint=ring, roof_height=height,
            base_elevation=float(base), feature_id=fid))
    buildings = tuple(buildings)

    return EnvironmentMap(
        origin=origin,
        frame=frame,
        buildings=buildings,
        contours=contours,
        roads=roads,
        terrain_class=terrain,
        ground_elevation=ground,
        bounds=compute_bounds(buildings, contours, roads),
    )


def _features(layers: dict, name: str, source: str) -> list:
    layer = layers.get(name)
    if layer is None:
        return []
    if not isinstance(layer, dict) or not isinstance(layer.get("features"), list):
        raise SchemaError(f"{source}: layer {name!r} is not a feature collection")
    return layer["features"]


def _feature_id(feat, layer: str, index: int) -> str:
    props = feat.get("properties") if isinstance(feat, dict) else None
    if isinstance(props, dict) and props.get("id"):
        return str(props["id"])
    return f"{layer}[{index}]"


def _polygon_coords(feat, fid: str, source: str) -> np.ndarray:
    geom = feat.get("geometry") if isinstance(feat, dict) else None
    if not isinstance(geom, dict) or geom.get("type") != "Polygon":
        raise SchemaError(f"{source}: {fid}: geometry must be a Polygon")
    rings = geom.get("coordinates")
    if not isinstance(rings, list) or not rings:
        raise SchemaError(f"{source}: {fid}: polygon has no coordinates")
    return _coord_array(rings[0], fid, source)  # exterior ring only


def _line_coords(feat, fid: str, source: str) -> np.ndarray:
    geom = feat.get("geometry") if isinstance(feat, dict) else None
    if not isinstance(geom, dict) or geom.get("type") != "LineString":
        raise SchemaError(f"{source}: {fid}: geometry must be a LineString")
    return _coord_array(geom.get("coordinates"), fid, source)


def _coord_array(coords, fid: str, source: str) -> np.ndarray:
    try:
        arr = np.asarray(coords, dtype=float)
    except (TypeError, ValueError):
        raise SchemaError(f"{source}: {fid}: malformed coordinates") from None
    if arr.ndim != 2 or arr.shape[1] < 2:
        raise SchemaError(f"{source}: {fid}: coordinates must be [lon, lat] pairs")
    if np.any(np.abs(arr[:, 0]) > 180.0) or np.any(np.abs(arr[:, 1]) > 90.0):
        raise SchemaError(f"{source}: {fid}: coordinates outside WGS-84 range")
    return arr[:, :2]


def _resolve_origin(obj, raw_buildings, raw_contours, raw_roads, source) -> GeoPoint:
    declared = obj.get("origin")
    if declared is not None:
        if not isinstance(declared, dict) or "latitude" not in declared \
                or "longitude" not in declared:
            raise SchemaError(
                f"{source}: origin must be {{latitude, longitude}}")
        return GeoPoint(latitude=float(declared["latitude"]),
                        longitude=float(declared["longitude"]))
    parts = [c for _, c, _, _ in raw_buildings]
    parts += [c for c, _ in raw_contours]
    parts += [c for c, _ in raw_roads]
    if not parts:
        raise SchemaError(f"{source}: empty map and no declared origin")
    allc = np.concatenate(parts)
    lon = 0.5 * (allc[:, 0].min() + allc[:, 0].max())
    lat = 0.5 * (allc[:, 1].min() + allc[:, 1].max())
    return GeoPoint(latitude=float(lat), longitude=float(lon))


def _to_local(frame: LocalFrame, coords: np.ndarray) -> np.ndarray:
    x, y = frame.lonlat_to_xy(coords[:, 0], coords[:, 1])
    return np.column_stack([x, y])
