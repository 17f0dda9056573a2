"""Prediction modes, metrics, rasters, exports and the planning service."""

from .budget import DEFAULT_SENSITIVITY, TX_POWER_LEVELS, Concentrator, LinkBudget
from .export import (
    coverage_boundary_geojson,
    write_best_server_png,
    write_coverage_boundary,
    write_georef_sidecar,
    write_rss_png,
)
from .metrics import (
    FULL_SCALE_UPPER_DBM,
    EvaluationReport,
    compute_metrics,
    full_scale_mask,
    render_report_row,
    render_report_table,
)
from .modes import (
    DEFAULT_RX_MAST,
    Pm1Result,
    check_leakage,
    run_pm1,
    run_pm2,
    run_pm3,
)
from .raster import (
    LEGEND_BINS,
    NO_COVERAGE_COLOR,
    SERVER_PALETTE,
    ConcentratorLayer,
    CoverageRaster,
    LatticeSpec,
    legend_payload,
    value_to_bin,
)
from .service import create_app, serve

__all__ = [
    "Concentrator",
    "ConcentratorLayer",
    "CoverageRaster",
    "DEFAULT_RX_MAST",
    "DEFAULT_SENSITIVITY",
    "EvaluationReport",
    "FULL_SCALE_UPPER_DBM",
    "LEGEND_BINS",
    "LatticeSpec",
    "LinkBudget",
    "NO_COVERAGE_COLOR",
    "Pm1Result",
    "SERVER_PALETTE",
    "TX_POWER_LEVELS",
    "check_leakage",
    "compute_metrics",
    "coverage_boundary_geojson",
    "create_app",
    "full_scale_mask",
    "legend_payload",
    "render_report_row",
    "render_report_table",
    "run_pm1",
    "run_pm2",
    "run_pm3",
    "serve",
    "value_to_bin",
    "write_best_server_png",
    "write_coverage_boundary",
    "write_georef_sidecar",
    "write_rss_png",
]
