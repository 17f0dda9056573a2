"""Environment maps, geodesy and the geometric queries behind feature extraction."""

from .envmap import (
    ROAD_PROJECTION_GATE,
    TERRAIN_SAMPLE_STEP,
    Building,
    BuildingCut,
    ContourLine,
    EnvironmentMap,
    Road,
    RoadProjection,
    TerrainClass,
    compute_bounds,
    elevation_at,
    elevation_at_xy,
    points_inside_any_building,
    project_to_road,
    segment_building_intersections,
    segment_terrain_intersections,
)
from .frame import GeoPoint, LocalFrame, LocalPoint
from .geodesy import (
    distance_with_fallback,
    spherical_distance,
    vincenty_distance,
)
from .mapio import load_map, parse_map

__all__ = [
    "Building",
    "BuildingCut",
    "ContourLine",
    "EnvironmentMap",
    "GeoPoint",
    "LocalFrame",
    "LocalPoint",
    "Road",
    "RoadProjection",
    "TerrainClass",
    "ROAD_PROJECTION_GATE",
    "TERRAIN_SAMPLE_STEP",
    "compute_bounds",
    "distance_with_fallback",
    "elevation_at",
    "elevation_at_xy",
    "load_map",
    "parse_map",
    "points_inside_any_building",
    "project_to_road",
    "segment_building_intersections",
    "segment_terrain_intersections",
    "spherical_distance",
    "vincenty_distance",
]
