"""Geodesic distance on the WGS-84 ellipsoid (Vincenty's inverse method)."""

from __future__ import annotations

import math

from ..errors import NonConvergence
from .frame import WGS84_A, WGS84_B, WGS84_F, GeoPoint

#: Convergence tolerance on the longitude difference iterate, in radians.
VINCENTY_TOL = 1e-12
VINCENTY_MAX_ITER = 200

#: Mean Earth radius used by the documented spherical fallback.
SPHERICAL_RADIUS = 6371008.8


def vincenty_distance(a: GeoPoint, b: GeoPoint,
                      tol: float = VINCENTY_TOL,
                      max_iter: int = VINCENTY_MAX_ITER) -> float:
    """Geodesic distance in meters between two WGS-84 points.

    Raises NonConvergence for near-antipodal pairs; callers that must stay
    total should fall back to spherical_distance and flag the result.
    """
    if a.latitude == b.latitude and a.longitude == b.longitude:
        return 0.0

    phi1, phi2 = math.radians(a.latitude), math.radians(b.latitude)
    dlon = math.radians(b.longitude - a.longitude)
    # Reduced latitudes.
    tan_u1 = (1.0 - WGS84_F) * math.tan(phi1)
    tan_u2 = (1.0 - WGS84_F) * math.tan(phi2)
    cos_u1 = 1.0 / math.sqrt(1.0 + tan_u1 * tan_u1)
    cos_u2 = 1.0 / math.sqrt(1.0 + tan_u2 * tan_u2)
    sin_u1, sin_u2 = tan_u1 * cos_u1, tan_u2 * cos_u2

    lam = dlon
    converged = False
    sin_sigma = cos_sigma = sigma = cos_sq_alpha = cos_2sm = 0.0
    for _ in range(max_iter):
        sin_lam, cos_lam = math.sin(lam), math.cos(lam)
        sin_sigma = math.hypot(
            cos_u2 * sin_lam,
            cos_u1 * sin_u2 - sin_u1 * cos_u2 * cos_lam,
        )
        if sin_sigma == 0.0:
            return 0.0
        cos_sigma = sin_u1 * sin_u2 + cos_u1 * cos_u2 * cos_lam
        sigma = math.atan2(sin_sigma, cos_sigma)
        sin_alpha = cos_u1 * cos_u2 * sin_lam / sin_sigma
        cos_sq_alpha = 1.0 - sin_alpha * sin_alpha
        if cos_sq_alpha != 0.0:
            cos_2sm = cos_sigma - 2.0 * sin_u1 * sin_u2 / cos_sq_alpha
        else:
            cos_2sm = 0.0  # equatorial geodesic
        c = WGS84_F / 16.0 * cos_sq_alpha * (
            4.0 + WGS84_F * (4.0 - 3.0 * cos_sq_alpha))
        lam_new = dlon + (1.0 - c) * WGS84_F * sin_alpha * (
            sigma + c * sin_sigma * (
                cos_2sm + c * cos_sigma * (2.0 * cos_2sm * cos_2sm - 1.0)))
        if abs(lam_new - lam) <= tol:
            lam = lam_new
            converged = True
            break
        lam = lam_new
    if not converged:
        raise NonConvergence(
            "Vincenty inverse did not converge (near-antipodal pair?)")

    u_sq = cos_sq_alpha * (WGS84_A**2 - WGS84_B**2) / WGS84_B**2
    big_a = 1.0 + u_sq / 16384.0 * (
        4096.0 + u_sq * (-768.0 + u_sq * (320.0 - 175.0 * u_sq)))
    big_b = u_sq / 1024.0 * (
        256.0 + u_sq * (-128.0 + u_sq * (74.0 - 47.0 * u_sq)))
    delta_sigma = big_b * sin_sigma * (
        cos_2sm + 0.25 * big_b * (
            cos_sigma * (2.0 * cos_2sm**2 - 1.0)
            - big_b / 6.0 * cos_2sm
            * (4.0 * sin_sigma**2 - 3.0) * (4.0 * cos_2sm**2 - 3.0)))
    return WGS84_B * big_a * (sigma - delta_sigma)


def spherical_distance(a: GeoPoint, b: GeoPoint) -> float:
    """Haversine great-circle distance on a mean-radius sphere.

    Documented fallback for the rare Vincenty non-convergence case; accuracy
    is ~0.5% rather than sub-millimeter.
    """
    phi1, phi2 = math.radians(a.latitude), math.radians(b.latitude)
    dphi = phi2 - phi1
    dlam = math.radians(b.longitude - a.longitude)
    h = math.sin(dphi / 2.0) ** 2 + math.cos(phi1) * math.cos(phi2) * math.sin(
        dlam / 2.0) ** 2
    return 2.0 * SPHERICAL_RADIUS * math.asin(math.sqrt(h))


def distance_with_fallback(a: GeoPoint, b: GeoPoint) -> tuple[float, bool]:
    """(distance, used_spherical_fallback) — total over all point pairs."""
    try:
        return vincenty_distance(a, b), False
    except NonConvergence:
        return spherical_distance(a, b), True
