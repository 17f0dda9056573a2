"""Reference geodesic distance, kept independent of the package under test.

Plain scalar transcription of Vincenty's published inverse formulas for the
WGS-84 ellipsoid (nested-equation form, as in T. Vincenty, Survey Review
XXIII(176), 1975).  Written before the production implementation and never
refactored to share code with it.
"""

from math import atan, atan2, cos, radians, sin, sqrt, tan

_A = 6378137.0
_B = 6356752.314245
_F = 1.0 / 298.257223563


def reference_distance(lat1, lon1, lat2, lon2, tol=1e-13, max_iter=500):
    """Geodesic distance in meters between two WGS-84 points."""
    L = radians(lon2 - lon1)
    u1 = atan((1.0 - _F) * tan(radians(lat1)))
    u2 = atan((1.0 - _F) * tan(radians(lat2)))
    sin_u1, cos_u1 = sin(u1), cos(u1)
    sin_u2, cos_u2 = sin(u2), cos(u2)

    lam = L
    for _ in range(max_iter):
        sin_lam, cos_lam = sin(lam), cos(lam)
        sin_sigma = sqrt(
            (cos_u2 * sin_lam) ** 2
            + (cos_u1 * sin_u2 - sin_u1 * cos_u2 * cos_lam) ** 2
        )
        if sin_sigma == 0.0:
            return 0.0  # coincident points
        cos_sigma = sin_u1 * sin_u2 + cos_u1 * cos_u2 * cos_lam
        sigma = atan2(sin_sigma, cos_sigma)
        sin_alpha = cos_u1 * cos_u2 * sin_lam / sin_sigma
        cos2_alpha = 1.0 - sin_alpha * sin_alpha
        if cos2_alpha == 0.0:
            cos_2sigma_m = 0.0  # both points on the equator
        else:
            cos_2sigma_m = cos_sigma - 2.0 * sin_u1 * sin_u2 / cos2_alpha
        c = _F / 16.0 * cos2_alpha * (4.0 + _F * (4.0 - 3.0 * cos2_alpha))
        lam_prev = lam
        lam = L + (1.0 - c) * _F * sin_alpha * (
            sigma
            + c
            * sin_sigma
            * (cos_2sigma_m + c * cos_sigma * (-1.0 + 2.0 * cos_2sigma_m**2))
        )
        if abs(lam - lam_prev) <= tol:
            break
    else:
        raise ArithmeticError("reference Vincenty did not converge")

    u_sq = cos2_alpha * (_A * _A - _B * _B) / (_B * _B)
    big_a = 1.0 + u_sq / 16384.0 * (
        4096.0 + u_sq * (-768.0 + u_sq * (320.0 - 175.0 * u_sq))
    )
    big_b = u_sq / 1024.0 * (256.0 + u_sq * (-128.0 + u_sq * (74.0 - 47.0 * u_sq)))
    delta_sigma = (
        big_b
        * sin_sigma
        * (
            cos_2sigma_m
            + big_b
            / 4.0
            * (
                cos_sigma * (-1.0 + 2.0 * cos_2sigma_m**2)
                - big_b
                / 6.0
                * cos_2sigma_m
                * (-3.0 + 4.0 * sin_sigma**2)
                * (-3.0 + 4.0 * cos_2sigma_m**2)
            )
        )
    )
    return _B * big_a * (sigma - delta_sigma)
