"""Raster and vector export of prediction results.

PNG rasters use the documented 10-bin chromatic scale (one pixel per lattice
node, north at the top) and come with a sidecar text file carrying the
georeferencing: corner coordinates, steps and grid size.  The coverage
boundary can also be exported as geo-interchange polygons.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np
from PIL import Image
from shapely.geometry import box as _shapely_box
from shapely.ops import unary_union

from ..geodata import EnvironmentMap
from .raster import (
    LEGEND_BINS,
    NO_COVERAGE_COLOR,
    SERVER_PALETTE,
    CoverageRaster,
    value_to_bin,
)


def _hex_to_rgba(color: str) -> tuple[int, int, int, int]:
    color = color.lstrip("#")
    return (int(color[0:2], 16), int(color[2:4], 16), int(color[4:6], 16), 255)


def _to_image(pixel_colors: np.ndarray) -> Image.Image:
    # Grid row 0 is the southern edge; image row 0 must be the north edge.
    return Image.fromarray(pixel_colors[::-1], "RGBA")


def write_rss_png(raster: CoverageRaster, path,
                  layer: int | None = None) -> Path:
    """Signal-strength map for one concentrator (layer index) or the merged
    strongest-signal view (layer=None); uncovered nodes use the no-coverage
    color.  Writes the georeferencing sidecar next to the image."""
    if layer is None:
        values = raster.merged_rss
    else:
        lay = raster.layers[layer]
        values = np.where(lay.covered, lay.rss, np.nan)
    ny, nx = values.shape
    pixels = np.zeros((ny, nx, 4), dtype=np.uint8)
    pixels[:, :] = _hex_to_rgba(NO_COVERAGE_COLOR)
    bin_colors = [_hex_to_rgba(b["color"]) for b in LEGEND_BINS]
    for r in range(ny):
        for c in range(nx):
            v = values[r, c]
            if not np.isnan(v):
                pixels[r, c] = bin_colors[value_to_bin(float(v))]
    path = Path(path)
    _to_image(pixels).save(path)
    write_georef_sidecar(raster, path)
    return path


def write_best_server_png(raster: CoverageRaster, path) -> Path:
    """Best-server map: one fixed color per concentrator index, the
    no-coverage color elsewhere."""
    ny, nx = raster.best_server.shape
    pixels = np.zeros((ny, nx, 4), dtype=np.uint8)
    pixels[:, :] = _hex_to_rgba(NO_COVERAGE_COLOR)
    for idx in range(len(raster.layers)):
        color = _hex_to_rgba(SERVER_PALETTE[idx % len(SERVER_PALETTE)])
        pixels[raster.best_server == idx] = color
    path = Path(path)
    _to_image(pixels).save(path)
    write_georef_sidecar(raster, path)
    return path


def write_georef_sidecar(raster: CoverageRaster, image_path) -> Path:
    """Text sidecar (<image>.georef.txt): grid corners, steps and size.
    Row 0 of the image is the northern edge."""
    image_path = Path(image_path)
    sidecar = image_path.with_suffix(image_path.suffix + ".georef.txt")
    lines = [
        f"image = {image_path.name}",
        f"corner_sw_lat = {raster.lats[0]!r}",
        f"corner_sw_lon = {raster.lons[0]!r}",
        f"corner_ne_lat = {raster.lats[-1]!r}",
        f"corner_ne_lon = {raster.lons[-1]!r}",
        f"step_x_m = {raster.lattice.step_x!r}",
        f"step_y_m = {raster.lattice.step_y!r}",
        f"nx = {len(raster.xs)}",
        f"ny = {len(raster.ys)}",
        "row0 = north",
    ]
    sidecar.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return sidecar


def coverage_boundary_geojson(raster: CoverageRaster,
                              env: EnvironmentMap) -> dict:
    """Boundary of the covered region (any concentrator's classifier
    coverage) as a FeatureCollection of WGS-84 polygons.  Each covered node
    contributes a step-sized cell; cells are unioned and the resulting
    polygon rings converted back to geographic coordinates."""
    covered = np.zeros(raster.shape, dtype=bool)
    for layer in raster.layers:
        covered |= layer.covered
    half_x = 0.5 * raster.lattice.step_x
    half_y = 0.5 * raster.lattice.step_y
    cells = [
        _shapely_box(raster.xs[c] - half_x, raster.ys[r] - half_y,
                     raster.xs[c] + half_x, raster.ys[r] + half_y)
        for r, c in zip(*np.nonzero(covered))
    ]
    features = []
    if cells:
        union = unary_union(cells)
        polygons = getattr(union, "geoms", [union])
        for poly in polygons:
            rings = [poly.exterior] + list(poly.interiors)
            coords = []
            for ring in rings:
                xs, ys = np.asarray(ring.coords).T
                lon, lat = env.frame.xy_to_lonlat(xs, ys)
                coords.append(np.column_stack([lon, lat]).tolist())
            features.append({
                "type": "Feature",
                "properties": {"kind": "coverage-boundary"},
                "geometry": {"type": "Polygon", "coordinates": coords},
            })
    return {"type": "FeatureCollection", "features": features}


def write_coverage_boundary(raster: CoverageRaster, env: EnvironmentMap,
                            path) -> Path:
    path = Path(path)
    path.write_text(json.dumps(coverage_boundary_geojson(raster, env)),
                    encoding="utf-8")
    return path
