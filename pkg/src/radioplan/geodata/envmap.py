"""The immutable environment map and its geometric queries.

An EnvironmentMap holds buildings (2.5D: footprint extruded from a base
elevation), elevation contours, roads and a terrain class.  All geometry
lives in the map's local metric frame; every query below is a pure function
of the map and is safe to call from concurrent readers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import NamedTuple

import numpy as np
from shapely.geometry import Polygon as _ShapelyPolygon

from ..errors import GeometryError, NoTerrainData
from .frame import GeoPoint, LocalFrame, LocalPoint

#: Default sampling step (meters) for terrain/segment intersection runs.
TERRAIN_SAMPLE_STEP = 1.0

#: Default gate (meters) beyond which GPS positions are not snapped to roads.
ROAD_PROJECTION_GATE = 30.0


class TerrainClass(Enum):
    FLAT = "flat"
    HILLY = "hilly"

    @classmethod
    def parse(cls, value: "TerrainClass | str") -> "TerrainClass":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).strip().lower())
        except ValueError:
            raise ValueError(
                f"unknown terrain class {value!r} (expected 'flat' or 'hilly')"
            ) from None


def _as_ring(vertices) -> np.ndarray:
    """Normalize polygon vertices to an open (k, 2) float ring."""
    arr = np.asarray(vertices, dtype=float)
    if arr.ndim != 2 or arr.shape[1] < 2:
        raise GeometryError("footprint must be a sequence of 2D vertices")
    arr = arr[:, :2]
    if len(arr) >= 2 and np.allclose(arr[0], arr[-1]):
        arr = arr[:-1]
    return arr


@dataclass(frozen=True, eq=False)
class Building:
    """A footprint extruded vertically from base_elevation by roof_height."""

    footprint: np.ndarray  # open ring, shape (k, 2), local meters
    roof_height: float     # meters above local terrain
    base_elevation: float  # meters above sea level
    feature_id: str = ""

    def __post_init__(self):
        ring = _as_ring(self.footprint)
        object.__setattr__(self, "footprint", ring)
        label = self.feature_id or "building"
        if len(ring) < 3:
            raise GeometryError(f"{label}: footprint has fewer than 3 vertices")
        poly = _ShapelyPolygon(ring)
        if poly.area <= 0.0:
            raise GeometryError(f"{label}: footprint has no area")
        if not poly.is_valid:
            raise GeometryError(f"{label}: footprint is self-intersecting")
        if not self.roof_height > 0.0:
            raise GeometryError(f"{label}: roof_height must be positive")

    @property
    def roof_elevation(self) -> float:
        """Absolute roof elevation, meters above sea level."""
        return self.base_elevation + self.roof_height


@dataclass(frozen=True, eq=False)
class ContourLine:
    polyline: np.ndarray  # shape (k, 2), local meters
    elevation: float      # meters above sea level

    def __post_init__(self):
        arr = np.asarray(self.polyline, dtype=float)[:, :2]
        object.__setattr__(self, "polyline", arr)
        if len(arr) < 2:
            raise GeometryError("contour needs at least 2 vertices")
        if not math.isfinite(self.elevation):
            raise GeometryError("contour elevation must be finite")


@dataclass(frozen=True, eq=False)
class Road:
    centerline: np.ndarray  # shape (k, 2), local meters
    name: str = ""

    def __post_init__(self):
        arr = np.asarray(self.centerline, dtype=float)[:, :2]
        object.__setattr__(self, "centerline", arr)
        if len(arr) < 2:
            raise GeometryError(f"road {self.name!r} needs at least 2 vertices")


class _SegmentSet(NamedTuple):
    """Concatenated polyline segments with the owning feature index."""

    ax: np.ndarray
    ay: np.ndarray
    bx: np.ndarray
    by: np.ndarray
    owner: np.ndarray  # feature index per segment
    starts: np.ndarray  # first segment index per feature (for reduceat)


def _build_segment_set(polylines) -> _SegmentSet | None:
    if not polylines:
        return None
    a_parts, b_parts, owners, starts = [], [], [], []
    count = 0
    for idx, line in enumerate(polylines):
        starts.append(count)
        a_parts.append(line[:-1])
        b_parts.append(line[1:])
        n = len(line) - 1
        owners.append(np.full(n, idx, dtype=np.int64))
        count += n
    a = np.concatenate(a_parts)
    b = np.concatenate(b_parts)
    return _SegmentSet(
        ax=a[:, 0], ay=a[:, 1], bx=b[:, 0], by=b[:, 1],
        owner=np.concatenate(owners), starts=np.asarray(starts, dtype=np.int64),
    )


@dataclass(frozen=True, eq=False)
class EnvironmentMap:
    origin: GeoPoint
    frame: LocalFrame
    buildings: tuple[Building, ...]
    contours: tuple[ContourLine, ...]
    roads: tuple[Road, ...]
    terrain_class: TerrainClass
    ground_elevation: float = 0.0  # constant ground level for flat maps
    bounds: tuple[float, float, float, float] = field(default=(0.0, 0.0, 0.0, 0.0))

    def __post_init__(self):
        object.__setattr__(self, "buildings", tuple(self.buildings))
        object.__setattr__(self, "contours", tuple(self.contours))
        object.__setattr__(self, "roads", tuple(self.roads))
        object.__setattr__(
            self, "terrain_class", TerrainClass.parse(self.terrain_class))

    # --- derived geometry caches (computed once, read-only) ---------------

    @cached_property
    def _building_bboxes(self) -> np.ndarray:
        if not self.buildings:
            return np.zeros((0, 4))
        boxes = np.empty((len(self.buildings), 4))
        for i, b in enumerate(self.buildings):
            boxes[i] = (b.footprint[:, 0].min(), b.footprint[:, 1].min(),
                        b.footprint[:, 0].max(), b.footprint[:, 1].max())
        return boxes

    @cached_property
    def _building_circles(self) -> tuple[np.ndarray, np.ndarray]:
        """(centers (n, 2), circumradii (n,)) of footprint bounding circles."""
        boxes = self._building_bboxes
        centers = 0.5 * np.column_stack(
            [boxes[:, 0] + boxes[:, 2], boxes[:, 1] + boxes[:, 3]])
        radii = 0.5 * np.hypot(boxes[:, 2] - boxes[:, 0],
                               boxes[:, 3] - boxes[:, 1])
        return centers, radii

    @cached_property
    def _contour_segments(self) -> _SegmentSet | None:
        return _build_segment_set([c.polyline for c in self.contours])

    @cached_property
    def _contour_elevations(self) -> np.ndarray:
        return np.asarray([c.elevation for c in self.contours])

    @cached_property
    def _road_segments(self) -> _SegmentSet | None:
        return _build_segment_set([r.centerline for r in self.roads])


def compute_bounds(buildings, contours, roads) -> tuple[float, float, float, float]:
    """Axis-aligned hull of all map geometry, in local meters."""
    xs, ys = [], []
    for b in buildings:
        xs.append(b.footprint[:, 0])
        ys.append(b.footprint[:, 1])
    for c in contours:
        xs.append(c.polyline[:, 0])
        ys.append(c.polyline[:, 1])
    for r in roads:
        xs.append(r.centerline[:, 0])
        ys.append(r.centerline[:, 1])
    if not xs:
        return (0.0, 0.0, 0.0, 0.0)
    x = np.concatenate(xs)
    y = np.concatenate(ys)
    return (float(x.min()), float(y.min()), float(x.max()), float(y.max()))


# --- point / segment primitives ---------------------------------------------

def _segment_distances(px, py, segs: _SegmentSet):
    """Distances from points (px, py) to every segment; shape (q, n_segs)."""
    px = np.atleast_1d(np.asarray(px, dtype=float))[:, None]
    py = np.atleast_1d(np.asarray(py, dtype=float))[:, None]
    dx = segs.bx - segs.ax
    dy = segs.by - segs.ay
    length2 = dx * dx + dy * dy
    safe = np.where(length2 > 0.0, length2, 1.0)
    t = ((px - segs.ax) * dx + (py - segs.ay) * dy) / safe
    t = np.clip(t, 0.0, 1.0)
    cx = segs.ax + t * dx
    cy = segs.ay + t * dy
    return np.hypot(px - cx, py - cy), cx, cy


def _points_in_ring(px, py, ring: np.ndarray) -> np.ndarray:
    """Even-odd point-in-polygon test, vectorized over query points."""
    px = np.atleast_1d(np.asarray(px, dtype=float))[:, None]
    py = np.atleast_1d(np.asarray(py, dtype=float))[:, None]
    ax, ay = ring[:, 0], ring[:, 1]
    bx, by = np.roll(ax, -1), np.roll(ay, -1)
    straddle = (ay > py) != (by > py)
    with np.errstate(divide="ignore", invalid="ignore"):
        x_cross = ax + (py - ay) * (bx - ax) / (by - ay)
    hits = straddle & (px < x_cross)
    return (hits.sum(axis=1) % 2).astype(bool)


# --- elevation ---------------------------------------------------------------

def elevation_at(env: EnvironmentMap, p: LocalPoint) -> float:
    """Ground elevation at a point, meters above sea level."""
    return float(elevation_at_xy(env, np.asarray([p.x]), np.asarray([p.y]))[0])


def elevation_at_xy(env: EnvironmentMap, px, py) -> np.ndarray:
    """Vectorized ground elevation for arrays of local coordinates.

    Flat maps return the declared constant ground elevation.  Hilly maps
    interpolate between the nearest contour and the nearest contour at a
    different elevation, weighting each by the inverse of its distance.
    """
    px = np.atleast_1d(np.asarray(px, dtype=float))
    py = np.atleast_1d(np.asarray(py, dtype=float))
    if env.terrain_class is TerrainClass.FLAT:
        return np.full(px.shape, env.ground_elevation)

    segs = env._contour_segments
    if segs is None:
        raise NoTerrainData("hilly map has no contour lines")
    elevations = env._contour_elevations

    out = np.empty(px.shape)
    chunk = 1024
    for lo in range(0, len(px), chunk):
        hi = min(lo + chunk, len(px))
        dists, _, _ = _segment_distances(px[lo:hi], py[lo:hi], segs)
        per_contour = np.minimum.reduceat(dists, segs.starts, axis=1)
        nearest = np.argmin(per_contour, axis=1)
        d1 = per_contour[np.arange(len(nearest)), nearest]
        e1 = elevations[nearest]
        other = np.where(elevations[None, :] != e1[:, None], per_contour, np.inf)
        second = np.argmin(other, axis=1)
        d2 = other[np.arange(len(second)), second]
        e2 = elevations[second]
        with np.errstate(invalid="ignore"):
            blended = (e1 * d2 + e2 * d1) / (d1 + d2)
        vals = np.where(np.isfinite(d2) & (d1 + d2 > 0.0), blended, e1)
        out[lo:hi] = vals
    return out


# --- roads -------------------------------------------------------------------

class RoadProjection(NamedTuple):
    point: GeoPoint
    projected: bool


def project_to_road(env: EnvironmentMap, p: GeoPoint,
                    gate: float = ROAD_PROJECTION_GATE) -> RoadProjection:
    """Snap a GPS estimate onto the closest road centerline.

    Points farther than `gate` meters from every road are returned unchanged
    with projected=False, so genuinely off-road positions are never moved.
    """
    segs = env._road_segments
    if segs is None:
        raise ValueError("map has no roads")
    local = env.frame.to_local(p)
    dists, cx, cy = _segment_distances(local.x, local.y, segs)
    best = int(np.argmin(dists[0]))
    if dists[0, best] > gate:
        return RoadProjection(p, False)
    lon, lat = env.frame.xy_to_lonlat(float(cx[0, best]), float(cy[0, best]))
    return RoadProjection(
        GeoPoint(latitude=float(lat), longitude=float(lon), altitude=p.altitude),
        True,
    )


# --- line-of-sight obstructions ----------------------------------------------

@dataclass(frozen=True)
class BuildingCut:
    """One building's obstruction of a TX-RX segment.

    chord is the 3D length of the segment portion that runs through the
    footprint below the roof; enter/exit are 3D distances along the segment
    from the TX end to the start and end of that portion.
    """

    index: int
    chord: float
    height: float
    enter: float
    exit: float


def _crossing_params(p0: np.ndarray, d: np.ndarray, ring: np.ndarray) -> np.ndarray:
    """Parameters t in (0, 1) where p0 + t*d crosses the ring boundary."""
    a = ring
    b = np.roll(ring, -1, axis=0)
    e = b - a
    denom = d[0] * e[:, 1] - d[1] * e[:, 0]
    ap = a - p0
    with np.errstate(divide="ignore", invalid="ignore"):
        t = (ap[:, 0] * e[:, 1] - ap[:, 1] * e[:, 0]) / denom
        u = (ap[:, 0] * d[1] - ap[:, 1] * d[0]) / denom
    ok = (np.abs(denom) > 1e-15) & (u >= 0.0) & (u <= 1.0) & (t > 0.0) & (t < 1.0)
    ts = np.unique(t[ok])
    return ts


def _inside_intervals(p0: np.ndarray, d: np.ndarray, ring: np.ndarray):
    """Sub-intervals of [0, 1] where the 2D segment lies inside the ring.

    Boundary parameters are found from edge crossings; each gap between
    consecutive boundaries is classified by testing its midpoint, which is
    robust to crossings that graze a vertex.
    """
    ts = _crossing_params(p0, d, ring)
    bounds = np.concatenate(([0.0], ts, [1.0]))
    mids = 0.5 * (bounds[:-1] + bounds[1:])
    mx = p0[0] + mids * d[0]
    my = p0[1] + mids * d[1]
    inside = _points_in_ring(mx, my, ring)
    intervals = []
    for k in range(len(mids)):
        if not inside[k]:
            continue
        lo, hi = bounds[k], bounds[k + 1]
        if intervals and intervals[-1][1] >= lo:
            intervals[-1][1] = hi
        else:
            intervals.append([lo, hi])
    return [(lo, hi) for lo, hi in intervals if hi > lo]


def segment_building_intersections(
        env: EnvironmentMap, tx: LocalPoint, rx: LocalPoint) -> list[BuildingCut]:
    """Buildings obstructing the 3D segment tx -> rx, ordered from the TX end.

    A building contributes a cut when the segment's 2D projection crosses its
    footprint and the segment height is below the absolute roof elevation on
    part of the crossing.  The chord is the 3D length of that part; crossings
    entirely above the roof produce no cut.
    """
    p0 = np.asarray([tx.x, tx.y])
    p1 = np.asarray([rx.x, rx.y])
    d = p1 - p0
    length3d = math.dist((tx.x, tx.y, tx.z), (rx.x, rx.y, rx.z))
    if length3d == 0.0:
        raise ValueError("tx and rx coincide")
    dz = rx.z - tx.z

    centers, radii = env._building_circles
    if len(radii) == 0:
        return []
    # A footprint can only intersect the segment if its bounding circle
    # touches it: near the segment's supporting line and within its span.
    length2d = math.hypot(d[0], d[1])
    if length2d > 0.0:
        ux, uy = d[0] / length2d, d[1] / length2d
        rel = centers - p0
        along = rel[:, 0] * ux + rel[:, 1] * uy
        across = np.abs(rel[:, 0] * uy - rel[:, 1] * ux)
        candidates = np.nonzero(
            (across <= radii) & (along >= -radii)
            & (along <= length2d + radii))[0]
    else:
        rel = centers - p0
        candidates = np.nonzero(np.hypot(rel[:, 0], rel[:, 1]) <= radii)[0]

    cuts = []
    for idx in candidates:
        building = env.buildings[idx]
        roof = building.roof_elevation
        below_total = 0.0
        first = math.inf
        last = -math.inf
        for lo, hi in _inside_intervals(p0, d, building.footprint):
            sub = _clip_below(lo, hi, tx.z, dz, roof)
            if sub is None:
                continue
            below_total += sub[1] - sub[0]
            first = min(first, sub[0])
            last = max(last, sub[1])
        if below_total > 0.0:
            cuts.append(BuildingCut(
                index=int(idx),
                chord=below_total * length3d,
                height=building.roof_height,
                enter=first * length3d,
                exit=last * length3d,
            ))
    cuts.sort(key=lambda c: c.enter)
    return cuts


def _clip_below(lo: float, hi: float, z0: float, dz: float,
                roof: float) -> tuple[float, float] | None:
    """Clip [lo, hi] to where z0 + t*dz < roof; None if empty."""
    if dz == 0.0:
        return (lo, hi) if z0 < roof else None
    t_star = (roof - z0) / dz
    if dz > 0.0:
        hi = min(hi, t_star)
    else:
        lo = max(lo, t_star)
    return (lo, hi) if hi > lo else None


def points_inside_any_building(env: EnvironmentMap, px, py) -> np.ndarray:
    """Boolean flag per point: does it fall inside some building footprint?"""
    px = np.atleast_1d(np.asarray(px, dtype=float))
    py = np.atleast_1d(np.asarray(py, dtype=float))
    out = np.zeros(px.shape, dtype=bool)
    boxes = env._building_bboxes
    for idx, building in enumerate(env.buildings):
        cand = ((px >= boxes[idx, 0]) & (px <= boxes[idx, 2])
                & (py >= boxes[idx, 1]) & (py <= boxes[idx, 3]) & ~out)
        if not np.any(cand):
            continue
        hit = _points_in_ring(px[cand], py[cand], building.footprint)
        flags = out[cand]
        flags |= hit
        out[cand] = flags
    return out


# --- terrain obstructions ------------------------------------------------------

def segment_terrain_intersections(
        env: EnvironmentMap, tx: LocalPoint, rx: LocalPoint,
        step: float = TERRAIN_SAMPLE_STEP) -> list[float]:
    """3D lengths of the segment portions running below ground (hilly maps).

    The terrain profile is sampled every `step` meters of horizontal run;
    each maximal run of below-ground samples becomes one length, including
    runs touching either endpoint.
    """
    if env.terrain_class is not TerrainClass.HILLY:
        raise NoTerrainData("terrain intersections are defined for hilly maps")
    if env._contour_segments is None:
        raise NoTerrainData("hilly map has no contour lines")
    horizontal = math.hypot(rx.x - tx.x, rx.y - tx.y)
    length3d = math.dist((tx.x, tx.y, tx.z), (rx.x, rx.y, rx.z))
    if length3d == 0.0:
        raise ValueError("tx and rx coincide")
    n = max(int(math.ceil(horizontal / step)), 1) + 1
    t = np.linspace(0.0, 1.0, n)
    px = tx.x + t * (rx.x - tx.x)
    py = tx.y + t * (rx.y - tx.y)
    ground = elevation_at_xy(env, px, py)
    seg_z = tx.z + t * (rx.z - tx.z)
    below = seg_z < ground

    runs = []
    half = 0.5 / (n - 1) if n > 1 else 0.5
    k = 0
    while k < n:
        if not below[k]:
            k += 1
            continue
        start = k
        while k + 1 < n and below[k + 1]:
            k += 1
        t_lo = max(t[start] - half, 0.0)
        t_hi = min(t[k] + half, 1.0)
        runs.append((t_hi - t_lo) * length3d)
        k += 1
    return runs
