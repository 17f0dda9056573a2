"""Blind raster planning (mode 2): place two concentrators, render maps.

Uses models trained on one synthetic town to predict coverage over a
lattice, then writes the RSS maps, the best-server map, the georeferencing
sidecars and the coverage boundary into demo_output/.
"""

from pathlib import Path

import numpy as np

from radioplan.features import Antenna
from radioplan.geodata import LocalPoint
from radioplan.planner import (
    Concentrator,
    LatticeSpec,
    run_pm1,
    run_pm2,
    write_best_server_png,
    write_coverage_boundary,
    write_rss_png,
)
from radioplan.synthetic import TownSpec, TruthParams, build_town
from radioplan.tuning import GridSpec

out_dir = Path(__file__).parent / "demo_output"
out_dir.mkdir(exist_ok=True)

truth = TruthParams(tx_gain=-10.0)
donor = build_town(
    TownSpec(seed=31, n_points=700, box_half_m=3000.0, core_half_m=500.0),
    truth)
result = run_pm1(donor.env, donor.measurements, donor.tx, donor.budget,
                 seed=7, area=donor.area,
                 cls_grid=GridSpec.classification_default(step=4),
                 reg_grid=GridSpec.regression_default(step=4), folds=3)
print(f"donor models: A={result.report.accuracy:.1f}%, "
      f"RMSE={result.report.rmse:.2f} dBm")

# Plan a structurally similar target town with two candidate sites.
target = build_town(
    TownSpec(seed=32, n_points=5, box_half_m=3000.0, core_half_m=500.0),
    truth)
frame = target.env.frame
concentrators = [
    Concentrator(Antenna(frame.to_geo(LocalPoint(-350.0, 0.0)), 18.0),
                 tx_power=21.0, label="west"),
    Concentrator(Antenna(frame.to_geo(LocalPoint(350.0, 120.0)), 18.0),
                 tx_power=27.0, label="east"),
]
lattice = LatticeSpec(
    corner_a=frame.to_geo(LocalPoint(-1400.0, -1000.0)),
    corner_b=frame.to_geo(LocalPoint(1400.0, 1000.0)),
    step_x=8.0, step_y=8.0)

raster = run_pm2(target.env, concentrators, target.budget, result.models,
                 lattice)
ny, nx = raster.shape
covered = int(np.sum(raster.best_server >= 0))
print(f"lattice {nx} x {ny} nodes, {covered} covered "
      f"({100 * covered / (nx * ny):.0f}%)")
for idx, layer in enumerate(raster.layers):
    share = int(np.sum(raster.best_server == idx))
    print(f"  {layer.label}: tx {layer.tx_power:g} dBm, "
          f"best server at {share} nodes")

write_rss_png(raster, out_dir / "rss_merged.png")
for i in range(len(raster.layers)):
    write_rss_png(raster, out_dir / f"rss_{raster.layers[i].label}.png",
                  layer=i)
write_best_server_png(raster, out_dir / "best_server.png")
write_coverage_boundary(raster, target.env, out_dir / "coverage.geojson")
print(f"\nwrote rasters and the coverage boundary to {out_dir}/")
