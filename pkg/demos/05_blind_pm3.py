"""Blind generalization (mode 3): train on one town, score on another.

Also demonstrates the leakage guard: evaluating on an area whose tag
appears in the model's training metadata is refused.
"""

from radioplan.errors import LeakageError
from radioplan.planner import render_report_table, run_pm1, run_pm3
from radioplan.synthetic import TownSpec, TruthParams, build_town
from radioplan.tuning import GridSpec

truth = TruthParams(tx_gain=-10.0)
spec = dict(n_points=700, box_half_m=3000.0, core_half_m=500.0)
town_a = build_town(TownSpec(seed=51, **spec), truth)
town_b = build_town(TownSpec(seed=52, **spec), truth)

result = run_pm1(town_a.env, town_a.measurements, town_a.tx, town_a.budget,
                 seed=7, area=town_a.area,
                 cls_grid=GridSpec.classification_default(step=4),
                 reg_grid=GridSpec.regression_default(step=4), folds=3)
print(f"trained on {town_a.area}: A={result.report.accuracy:.1f}%, "
      f"RMSE={result.report.rmse:.2f} dBm (local test)")

report = run_pm3(town_b.env, town_b.measurements, town_b.tx, town_b.budget,
                 result.models, variant="pm3", area=town_b.area)
print("\nblind evaluation on the disjoint town:")
print(render_report_table([(town_b.area, "3", report)]))

try:
    run_pm3(town_a.env, town_a.measurements, town_a.tx, town_a.budget,
            result.models, variant="pm3", area=town_a.area)
except LeakageError as exc:
    print(f"evaluating on the training town is refused: {exc}")
