"""A complete local train/evaluate run (mode 1) on a synthetic town.

Builds a small town with a known ground-truth signal law, runs the whole
pipeline (features, split, grid-search tuning with cross-validation, final
training, held-out evaluation) and prints the report table plus the
selected hyperparameters.
"""

from radioplan.planner import render_report_table, run_pm1
from radioplan.synthetic import TownSpec, TruthParams, build_town
from radioplan.tuning import GridSpec

town = build_town(
    TownSpec(seed=21, n_points=800, box_half_m=3000.0, core_half_m=500.0),
    TruthParams(tx_gain=-10.0))
covered = sum(1 for m in town.measurements if m.rssi > -120.0)
print(f"town: {len(town.env.buildings)} buildings, "
      f"{len(town.measurements)} measurements "
      f"({100 * covered / len(town.measurements):.0f}% covered)")

result = run_pm1(
    town.env, town.measurements, town.tx, town.budget,
    seed=7, area=town.area,
    cls_grid=GridSpec.classification_default(step=4),
    reg_grid=GridSpec.regression_default(step=4),
    folds=3)

print()
print(render_report_table([(town.area, "1", result.report)]))
print("selected hyperparameters:")
for task, params in result.models.hyperparams.items():
    print(f"  {task}: {params}")
print(f"\nclassifier support vectors: {result.models.svc.diagnostics.n_support}")
print(f"regressor support vectors:  {result.models.svr.diagnostics.n_support}")
