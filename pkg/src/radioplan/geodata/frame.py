"""WGS-84 points and the local east-north-up metric frame.

All map geometry is converted once, at load time, into a planar frame
anchored at the map origin.  The frame's vertical datum is sea level, so a
LocalPoint's z compares directly against contour elevations and building
roof elevations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

WGS84_A = 6378137.0
WGS84_F = 1.0 / 298.257223563
WGS84_B = WGS84_A * (1.0 - WGS84_F)
_E2 = WGS84_F * (2.0 - WGS84_F)


@dataclass(frozen=True)
class GeoPoint:
    """A WGS-84 geographic position in decimal degrees.

    altitude is meters above sea level and may be omitted (2D map vertices).
    """

    latitude: float
    longitude: float
    altitude: float | None = None

    def __post_init__(self):
        if not -90.0 <= self.latitude <= 90.0:
            raise ValueError(f"latitude out of range: {self.latitude}")
        if not -180.0 <= self.longitude <= 180.0:
            raise ValueError(f"longitude out of range: {self.longitude}")


@dataclass(frozen=True)
class LocalPoint:
    """Meters east (x), north (y) and above sea level (z) in a map's frame."""

    x: float
    y: float
    z: float = 0.0


class LocalFrame:
    """Tangent-plane mapping between GeoPoints and LocalPoints.

    Longitude/latitude offsets are scaled by the prime-vertical and
    meridional radii of curvature at the origin, so the geo -> local -> geo
    round trip is exact to machine precision.
    """

    def __init__(self, origin: GeoPoint):
        self.origin = origin
        lat0 = math.radians(origin.latitude)
        s2 = math.sin(lat0) ** 2
        n = WGS84_A / math.sqrt(1.0 - _E2 * s2)
        m = WGS84_A * (1.0 - _E2) / (1.0 - _E2 * s2) ** 1.5
        self._meters_per_deg_lon = math.radians(1.0) * n * math.cos(lat0)
        self._meters_per_deg_lat = math.radians(1.0) * m

    def to_local(self, p: GeoPoint) -> LocalPoint:
        return LocalPoint(
            x=(p.longitude - self.origin.longitude) * self._meters_per_deg_lon,
            y=(p.latitude - self.origin.latitude) * self._meters_per_deg_lat,
            z=p.altitude if p.altitude is not None else 0.0,
        )

    def to_geo(self, p: LocalPoint) -> GeoPoint:
        return GeoPoint(
            latitude=self.origin.latitude + p.y / self._meters_per_deg_lat,
            longitude=self.origin.longitude + p.x / self._meters_per_deg_lon,
            altitude=p.z,
        )

    def lonlat_to_xy(self, lon, lat):
        """Vectorized degrees -> local meters (no altitude)."""
        x = (lon - self.origin.longitude) * self._meters_per_deg_lon
        y = (lat - self.origin.latitude) * self._meters_per_deg_lat
        return x, y

    def xy_to_lonlat(self, x, y):
        """Vectorized local meters -> degrees."""
        lon = self.origin.longitude + x / self._meters_per_deg_lon
        lat = self.origin.latitude + y / self._meters_per_deg_lat
        return lon, lat
