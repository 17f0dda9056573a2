"""Prediction lattices, coverage rasters and the chromatic legend."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from ..geodata import EnvironmentMap, GeoPoint, LocalFrame

#: Discrete chromatic scale: ten 10 dBm bins spanning -120..-20 dBm.
#: Values below the range use the first bin, above it the last.
LEGEND_BINS = tuple(
    {"min": -120.0 + 10.0 * i, "max": -110.0 + 10.0 * i, "color": color}
    for i, color in enumerate((
        "#26004d", "#3b0f70", "#641a80", "#8c2981", "#b73779",
        "#de4968", "#f7705c", "#fe9f6d", "#fece91", "#fcfdbf",
    ))
)

#: Color used where no concentrator provides coverage.
NO_COVERAGE_COLOR = "#15151a"

#: Per-concentrator colors for best-server maps, by concentrator index.
SERVER_PALETTE = (
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
    "#8c564b", "#e377c2", "#17becf", "#bcbd22", "#7f7f7f",
)


def legend_payload() -> list[dict]:
    return [dict(b) for b in LEGEND_BINS]


def value_to_bin(value: float) -> int:
    """Index of the legend bin holding a dBm value (clamped to the scale)."""
    idx = int(math.floor((value - LEGEND_BINS[0]["min"]) / 10.0))
    return max(0, min(idx, len(LEGEND_BINS) - 1))


@dataclass(frozen=True)
class LatticeSpec:
    """Rectangular prediction lattice given by two opposite corners and the
    node spacing in meters."""

    corner_a: GeoPoint
    corner_b: GeoPoint
    step_x: float = 8.0
    step_y: float = 8.0

    def __post_init__(self):
        if not (self.step_x > 0.0 and self.step_y > 0.0):
            raise ValueError("lattice steps must be positive")
        if (self.corner_a.latitude == self.corner_b.latitude
                and self.corner_a.longitude == self.corner_b.longitude):
            raise ValueError("lattice corners must be distinct")

    def axes(self, frame: LocalFrame) -> tuple[np.ndarray, np.ndarray]:
        """(xs, ys) node coordinates in the map frame.  Each axis carries
        ceil(extent / step) + 1 nodes starting at the low corner; the last
        node sits at or just past the high corner."""
        a = frame.to_local(self.corner_a)
        b = frame.to_local(self.corner_b)
        x_lo, x_hi = min(a.x, b.x), max(a.x, b.x)
        y_lo, y_hi = min(a.y, b.y), max(a.y, b.y)
        nx = int(math.ceil((x_hi - x_lo) / self.step_x - 1e-9)) + 1
        ny = int(math.ceil((y_hi - y_lo) / self.step_y - 1e-9)) + 1
        xs = x_lo + self.step_x * np.arange(nx)
        ys = y_lo + self.step_y * np.arange(ny)
        return xs, ys


@dataclass(frozen=True, eq=False)
class ConcentratorLayer:
    """Per-concentrator prediction grids (row 0 = southern lattice edge)."""

    label: str
    tx_power: float
    rss: np.ndarray             # adjusted predicted dBm, shape (ny, nx)
    covered: np.ndarray         # classifier decision == +1
    budget_covered: np.ndarray  # adjusted rss >= sensitivity


@dataclass(frozen=True, eq=False)
class CoverageRaster:
    """All per-node predictions for one lattice.

    Two coverage notions are carried per layer and must not be conflated:
    `covered` is the classifier's decision (power-independent), while
    `budget_covered` marks nodes whose power-adjusted predicted RSS clears
    the receiver sensitivity.  best_server holds the index of the covering
    concentrator with the strongest adjusted RSS, or -1.
    """

    lattice: LatticeSpec
    xs: np.ndarray
    ys: np.ndarray
    lons: np.ndarray
    lats: np.ndarray
    layers: tuple[ConcentratorLayer, ...]
    best_server: np.ndarray      # (ny, nx) int, -1 where nobody covers
    inside_building: np.ndarray  # (ny, nx) bool
    sensitivity: float

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.ys), len(self.xs)

    @cached_property
    def merged_rss(self) -> np.ndarray:
        """Strongest adjusted RSS among covering concentrators; NaN where
        no concentrator covers."""
        out = np.full(self.shape, np.nan)
        for layer in self.layers:
            cand = np.where(layer.covered, layer.rss, np.nan)
            fresh = ~np.isnan(cand)
            take = fresh & (np.isnan(out) | (cand > out))
            out[take] = cand[take]
        return out

    @classmethod
    def from_payload(cls, payload: dict, env: EnvironmentMap) -> "CoverageRaster":
        """Rebuild a raster from its serialized payload (export workflows)."""
        lat_spec = payload["lattice"]
        lattice = LatticeSpec(
            corner_a=GeoPoint(latitude=lat_spec["corner_a"]["lat"],
                              longitude=lat_spec["corner_a"]["lon"]),
            corner_b=GeoPoint(latitude=lat_spec["corner_b"]["lat"],
                              longitude=lat_spec["corner_b"]["lon"]),
            step_x=lat_spec["step_x"],
            step_y=lat_spec["step_y"],
        )
        lons = np.asarray(payload["lons"], dtype=float)
        lats = np.asarray(payload["lats"], dtype=float)
        xs, _ = env.frame.lonlat_to_xy(lons, np.full_like(lons,
                                                          env.origin.latitude))
        _, ys = env.frame.lonlat_to_xy(np.full_like(lats,
                                                    env.origin.longitude), lats)
        layers = tuple(
            ConcentratorLayer(
                label=layer["label"],
                tx_power=layer["tx_power"],
                rss=np.asarray(layer["rss"], dtype=float),
                covered=np.asarray(layer["covered"], dtype=bool),
                budget_covered=np.asarray(layer["budget_covered"], dtype=bool),
            )
            for layer in payload["layers"])
        return cls(
            lattice=lattice, xs=np.asarray(xs), ys=np.asarray(ys),
            lons=lons, lats=lats, layers=layers,
            best_server=np.asarray(payload["best_server"], dtype=int),
            inside_building=np.asarray(payload["inside_building"], dtype=bool),
            sensitivity=float(payload["sensitivity"]),
        )

    def to_payload(self) -> dict:
        """JSON-ready dict; the service returns exactly this object."""
        return {
            "lattice": {
                "corner_a": {"lat": self.lattice.corner_a.latitude,
                             "lon": self.lattice.corner_a.longitude},
                "corner_b": {"lat": self.lattice.corner_b.latitude,
                             "lon": self.lattice.corner_b.longitude},
                "step_x": self.lattice.step_x,
                "step_y": self.lattice.step_y,
                "nx": len(self.xs),
                "ny": len(self.ys),
            },
            "lons": self.lons.tolist(),
            "lats": self.lats.tolist(),
            "sensitivity": self.sensitivity,
            "legend": legend_payload(),
            "no_coverage_color": NO_COVERAGE_COLOR,
            "server_palette": list(SERVER_PALETTE[:len(self.layers)]),
            "layers": [
                {
                    "label": layer.label,
                    "tx_power": layer.tx_power,
                    "rss": layer.rss.tolist(),
                    "covered": layer.covered.astype(int).tolist(),
                    "budget_covered": layer.budget_covered.astype(int).tolist(),
                }
                for layer in self.layers
            ],
            "best_server": self.best_server.tolist(),
            "inside_building": self.inside_building.astype(int).tolist(),
        }
