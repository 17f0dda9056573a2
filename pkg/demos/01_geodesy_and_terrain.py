"""Geodesy and terrain queries on a small hand-built map.

Walks through the geodata layer: WGS-84 distances, the local metric frame,
contour-based elevation interpolation, GPS-to-road snapping and sightline
intersections with buildings and terrain.
"""

import numpy as np

from radioplan.geodata import (
    Building,
    ContourLine,
    EnvironmentMap,
    GeoPoint,
    LocalFrame,
    LocalPoint,
    Road,
    compute_bounds,
    elevation_at,
    project_to_road,
    segment_building_intersections,
    segment_terrain_intersections,
    vincenty_distance,
)

# --- geodesic distances ------------------------------------------------------

modena = GeoPoint(44.6471, 10.9252)
bologna = GeoPoint(44.4949, 11.3426)
print(f"Modena -> Bologna: {vincenty_distance(modena, bologna) / 1000:.3f} km")
print(f"one degree along the equator: "
      f"{vincenty_distance(GeoPoint(0, 0), GeoPoint(0, 1)):.3f} m")

# --- a hilly map with a ridge and a road --------------------------------------

origin = GeoPoint(44.39, 10.965)
frame = LocalFrame(origin)


def contour(x, elevation):
    return ContourLine(np.array([[x, -500.0], [x, 500.0]]), elevation)


buildings = (
    Building(np.array([[120, -15], [150, -15], [150, 15], [120, 15]]),
             roof_height=25.0, base_elevation=355.0),
)
contours = (contour(0.0, 290.0), contour(200.0, 390.0), contour(400.0, 290.0))
roads = (Road(np.array([[-400.0, 40.0], [400.0, 40.0]]), name="ridge road"),)

env = EnvironmentMap(
    origin=origin, frame=frame, buildings=buildings, contours=contours,
    roads=roads, terrain_class="hilly",
    bounds=compute_bounds(buildings, contours, roads))

print("\nelevation transect across the ridge:")
for x in (0, 100, 150, 200, 250, 300, 400):
    print(f"  x={x:>4} m  ground={elevation_at(env, LocalPoint(x, 0)):7.2f} m")

# --- GPS correction ------------------------------------------------------------

gps_fix = frame.to_geo(LocalPoint(120.0, 47.0))   # 7 m off the road
snapped = project_to_road(env, gps_fix)
print(f"\nGPS fix 7 m off the road: projected={snapped.projected}, "
      f"snapped y={frame.to_local(snapped.point).y:.2f} m")

far_away = frame.to_geo(LocalPoint(0.0, 200.0))
kept = project_to_road(env, far_away)
print(f"GPS fix 160 m off the road: projected={kept.projected} "
      "(outside the 30 m gate, left unchanged)")

# --- sightline obstructions -----------------------------------------------------

# A tall site on the west slope looking across the ridge to a receiver on
# the east slope: the line clips a rooftop on the way and dives through the
# ridge crest.
tx = LocalPoint(100.0, 0.0, 385.0)
rx = LocalPoint(350.0, 0.0, 317.0)
cuts = segment_building_intersections(env, tx, rx)
print("\nbuildings blocking the sightline:")
for cut in cuts:
    print(f"  building {cut.index}: chord {cut.chord:.1f} m, "
          f"height {cut.height:.1f} m, enters at {cut.enter:.1f} m")

runs = segment_terrain_intersections(env, tx, rx, step=0.5)
print(f"below-ground runs: {[f'{r:.1f} m' for r in runs]}")
