import json

import numpy as np
import pytest

from radioplan.errors import LeakageError, TerrainClassMismatch
from radioplan.features import Antenna
from radioplan.geodata import GeoPoint, LocalPoint
from radioplan.planner import (
    Concentrator,
    EvaluationReport,
    LatticeSpec,
    LinkBudget,
    check_leakage,
    compute_metrics,
    render_report_row,
    render_report_table,
    run_pm2,
    run_pm3,
)
from radioplan.svm import ModelMetadata, TrainedModels

from conftest import make_map, small_town_spec


class TestLatticeSpec:
    def test_eighty_meter_extent_gives_eleven_nodes(self, small_town):
        frame = small_town.env.frame
        a = frame.to_geo(LocalPoint(0.0, 0.0))
        b = frame.to_geo(LocalPoint(80.0, 80.0))
        lattice = LatticeSpec(corner_a=a, corner_b=b, step_x=8.0, step_y=8.0)
        xs, ys = lattice.axes(frame)
        assert len(xs) == 11
        assert len(ys) == 11
        assert xs[0] == pytest.approx(0.0, abs=1e-9)
        assert xs[-1] == pytest.approx(80.0, abs=1e-6)

    def test_corner_order_irrelevant(self, small_town):
        frame = small_town.env.frame
        a = frame.to_geo(LocalPoint(0.0, 0.0))
        b = frame.to_geo(LocalPoint(80.0, 40.0))
        fwd = LatticeSpec(corner_a=a, corner_b=b).axes(frame)
        rev = LatticeSpec(corner_a=b, corner_b=a).axes(frame)
        np.testing.assert_allclose(fwd[0], rev[0])
        np.testing.assert_allclose(fwd[1], rev[1])

    def test_validation(self):
        p = GeoPoint(44.5, 11.0)
        with pytest.raises(ValueError):
            LatticeSpec(corner_a=p, corner_b=p)
        with pytest.raises(ValueError):
            LatticeSpec(corner_a=p, corner_b=GeoPoint(44.6, 11.0), step_x=0.0)


class TestComputeMetrics:
    def test_hand_enumerated_confusion_fixture(self):
        # 3 TP, 2 TN, 1 FP, 4 FN; the near-sensitivity band holds 4 samples
        # (both TNs, the FP, one TP) of which 3 are classified correctly.
        predictions = [1, 1, 1, -1, -1, 1, -1, -1, -1, -1]
        labels =      [1, 1, 1, -1, -1, -1, 1, 1, 1, 1]
        rssi = [-115.0, -90.0, -85.0, -120.0, -120.0, -120.0,
                -95.0, -100.0, -105.0, -80.0]
        report = compute_metrics(predictions, labels, rssi)
        assert report.accuracy == 50.0
        assert report.false_positive_pct == 10.0
        assert report.full_scale_accuracy == 75.0
        assert report.n_full_scale == 4

    def test_all_negative_all_correct(self):
        report = compute_metrics([-1, -1], [-1, -1], [-120.0, -120.0])
        assert report.accuracy == 100.0
        assert report.false_positive_pct == 0.0

    def test_simple_accuracy(self):
        predictions = [1] * 8 + [-1] * 2
        labels = [1] * 8 + [1] * 2
        rssi = [-90.0] * 10
        report = compute_metrics(predictions, labels, rssi)
        assert report.accuracy == 80.0

    def test_full_scale_undefined_not_zero(self):
        report = compute_metrics([1, 1], [1, 1], [-90.0, -95.0])
        assert report.full_scale_accuracy is None
        assert report.n_full_scale == 0

    def test_rmse_over_default_regression_subset(self):
        predictions = [1, 1, -1, 1]
        labels = [1, 1, 1, -1]
        rssi = [-90.0, -100.0, -95.0, -120.0]
        predicted_rss = [-93.0, -96.0, -80.0, -110.0]
        report = compute_metrics(predictions, labels, rssi,
                                 predicted_rss=predicted_rss)
        # Only the first two qualify (covered and classified covered).
        assert report.n_regression == 2
        assert report.rmse == pytest.approx(np.sqrt((9.0 + 16.0) / 2.0))


class TestReportRendering:
    def test_verbatim_table_row(self):
        report = EvaluationReport(
            accuracy=82.26, full_scale_accuracy=82.19,
            false_positive_pct=17.47, rmse=7.70,
            n_test=100, n_full_scale=40, n_regression=60)
        row = render_report_row("Bologna", "3", report)
        assert row == "| Bologna | 3 | 82.26 | 7.70 | 82.19 | 17.47 |"

    def test_undefined_cells(self):
        report = EvaluationReport(
            accuracy=90.0, full_scale_accuracy=None,
            false_positive_pct=5.0, rmse=None,
            n_test=10, n_full_scale=0, n_regression=0)
        row = render_report_row("X", "3'", report)
        assert "undefined" in row

    def test_table_has_header(self):
        report = EvaluationReport(100.0, None, 0.0, None, 1, 0, 0)
        table = render_report_table([("A", "1", report)])
        assert table.splitlines()[0] == "| area | PM | A | RMSE | A_fs | P_fp |"


class TestBudgetTypes:
    def test_tx_power_levels_enforced(self, small_town):
        from radioplan.features import Antenna
        with pytest.raises(ValueError):
            Concentrator(
                antenna=Antenna(small_town.env.origin, mast_height=2.0),
                tx_power=23.0, label="bad")

    def test_sensitivity_override_warns(self):
        with pytest.warns(UserWarning, match="sensitivity"):
            LinkBudget(sensitivity=-110.0)

    def test_power_adjustment(self):
        budget = LinkBudget(reference_tx_power=21.0)
        assert budget.power_adjustment(30.0) == 9.0
        assert budget.power_adjustment(21.0) == 0.0


class TestRunPm1Guards:
    def test_single_class_measurements_rejected(self, small_town):
        from radioplan.dataset import Measurement
        from radioplan.errors import SingleClassData
        from radioplan.planner import run_pm1
        covered_only = [
            Measurement(m.timestamp, m.position, m.speed, m.heading,
                        m.satellite_count, m.meter_address, -80.0)
            for m in small_town.measurements[:120]
        ]
        with pytest.raises(SingleClassData):
            run_pm1(small_town.env, covered_only, small_town.tx,
                    small_town.budget, seed=1, area="x")

    def test_too_few_measurements_rejected(self, small_town):
        from radioplan.errors import InsufficientData
        from radioplan.planner import run_pm1
        with pytest.raises(InsufficientData):
            run_pm1(small_town.env, small_town.measurements[:50],
                    small_town.tx, small_town.budget, seed=1, area="x")


def town_lattice(town, half=80.0, step=8.0):
    frame = town.env.frame
    return LatticeSpec(
        corner_a=frame.to_geo(LocalPoint(-half, -half)),
        corner_b=frame.to_geo(LocalPoint(half, half)),
        step_x=step, step_y=step)


def concentrator_at(town, x, y, power=21.0, label="c"):
    return Concentrator(
        antenna=Antenna(position=town.env.frame.to_geo(LocalPoint(x, y)),
                        mast_height=town.spec.tx_mast_m),
        tx_power=power, label=label)


class TestRunPm2:
    def test_grid_shape_and_single_server(self, small_town, town_models):
        raster = run_pm2(small_town.env, [small_town.tx], small_town.budget,
                         town_models, town_lattice(small_town))
        assert raster.shape == (21, 21)
        layer = raster.layers[0]
        assert layer.covered.shape == (21, 21)
        covered = layer.covered
        assert np.all(raster.best_server[covered] == 0)
        assert np.all(raster.best_server[~covered] == -1)

    def test_power_delta_shifts_rss_only(self, small_town, town_models):
        lattice = town_lattice(small_town)
        low = run_pm2(small_town.env,
                      [concentrator_at(small_town, 0, 0, power=21.0)],
                      small_town.budget, town_models, lattice)
        high = run_pm2(small_town.env,
                       [concentrator_at(small_town, 0, 0, power=30.0)],
                       small_town.budget, town_models, lattice)
        np.testing.assert_allclose(
            high.layers[0].rss - low.layers[0].rss, 9.0, atol=1e-12)
        # Classifier coverage is power-independent; budget coverage grows.
        np.testing.assert_array_equal(
            low.layers[0].covered, high.layers[0].covered)
        assert np.all(high.layers[0].budget_covered
                      >= low.layers[0].budget_covered)

    def test_symmetric_pair_splits_at_axis(self, small_town, town_models):
        # An empty flat map is mirror-symmetric; two concentrators placed
        # symmetrically about x = 0 must split the best-server map at the
        # axis, give or take one node.
        env = make_map(terrain="flat", ground=0.0,
                       origin=small_town.env.origin)
        frame = env.frame
        lattice = LatticeSpec(
            corner_a=frame.to_geo(LocalPoint(-400.0, -80.0)),
            corner_b=frame.to_geo(LocalPoint(400.0, 80.0)),
            step_x=8.0, step_y=8.0)
        pair = [
            Concentrator(antenna=Antenna(frame.to_geo(LocalPoint(-300.0, 0.0)),
                                         mast_height=18.0),
                         tx_power=21.0, label="west"),
            Concentrator(antenna=Antenna(frame.to_geo(LocalPoint(300.0, 0.0)),
                                         mast_height=18.0),
                         tx_power=21.0, label="east"),
        ]
        raster = run_pm2(env, pair, small_town.budget, town_models, lattice)
        nx = raster.shape[1]
        mid = nx // 2
        both = raster.best_server >= 0
        west = both[:, :mid] & (raster.best_server[:, :mid] == 0)
        east = both[:, mid + 1:] & (raster.best_server[:, mid + 1:] == 1)
        assert np.all(raster.best_server[:, :mid][both[:, :mid]] == 0) or \
            np.all(west | ~both[:, :mid])
        assert np.all(east | ~both[:, mid + 1:])

    def test_best_server_invariant_under_uniform_offset(
            self, small_town, town_models):
        lattice = town_lattice(small_town, half=120.0)
        pair = [concentrator_at(small_town, -60.0, 0.0, label="a"),
                concentrator_at(small_town, 60.0, 0.0, label="b")]
        base = run_pm2(small_town.env, pair, small_town.budget, town_models,
                       lattice)
        shifted_budget = LinkBudget(
            tx_gain=small_town.budget.tx_gain,
            rx_gain=small_town.budget.rx_gain,
            reference_tx_power=small_town.budget.reference_tx_power - 7.0)
        shifted = run_pm2(small_town.env, pair, shifted_budget, town_models,
                          lattice)
        np.testing.assert_allclose(
            shifted.layers[0].rss - base.layers[0].rss, 7.0, atol=1e-12)
        np.testing.assert_array_equal(base.best_server, shifted.best_server)

    def test_terrain_mismatch_refused(self, small_town, town_models):
        hilly = make_map(terrain="hilly", origin=small_town.env.origin)
        with pytest.raises(TerrainClassMismatch):
            run_pm2(hilly, [small_town.tx], small_town.budget, town_models,
                    town_lattice(small_town))

    def test_inside_building_flagged(self, small_town, town_models):
        # Lattice across the core: building footprints exist there.
        raster = run_pm2(small_town.env, [small_town.tx], small_town.budget,
                         town_models, town_lattice(small_town, half=200.0))
        assert raster.inside_building.any()
        assert not raster.inside_building.all()

    def test_workers_do_not_change_results(self, small_town, town_models):
        lattice = town_lattice(small_town)
        pair = [concentrator_at(small_town, -60.0, 0.0, label="a"),
                concentrator_at(small_town, 60.0, 0.0, label="b")]
        seq = run_pm2(small_town.env, pair, small_town.budget, town_models,
                      lattice, workers=1)
        par = run_pm2(small_town.env, pair, small_town.budget, town_models,
                      lattice, workers=4)
        assert json.dumps(seq.to_payload(), sort_keys=True) == \
            json.dumps(par.to_payload(), sort_keys=True)

    def test_payload_is_deterministic(self, small_town, town_models):
        lattice = town_lattice(small_town)
        a = run_pm2(small_town.env, [small_town.tx], small_town.budget,
                    town_models, lattice)
        b = run_pm2(small_town.env, [small_town.tx], small_town.budget,
                    town_models, lattice)
        assert json.dumps(a.to_payload(), sort_keys=True) == \
            json.dumps(b.to_payload(), sort_keys=True)

    def test_merged_rss_is_strongest_covered(self, small_town, town_models):
        lattice = town_lattice(small_town, half=120.0)
        pair = [concentrator_at(small_town, -60.0, 0.0, label="a"),
                concentrator_at(small_town, 60.0, 0.0, label="b")]
        raster = run_pm2(small_town.env, pair, small_town.budget, town_models,
                         lattice)
        merged = raster.merged_rss
        for r in range(0, raster.shape[0], 5):
            for c in range(0, raster.shape[1], 5):
                vals = [layer.rss[r, c] for layer in raster.layers
                        if layer.covered[r, c]]
                if vals:
                    assert merged[r, c] == max(vals)
                else:
                    assert np.isnan(merged[r, c])


@pytest.fixture(scope="module")
def town_b():
    from radioplan.synthetic import TruthParams, build_town
    return build_town(small_town_spec(seed=6), TruthParams(tx_gain=-10.0))


class TestRunPm3:
    def test_blind_evaluation_produces_full_report(
            self, small_town, town_models, town_b):
        report = run_pm3(town_b.env, town_b.measurements, town_b.tx,
                         town_b.budget, town_models, variant="pm3",
                         area=town_b.area)
        assert 0.0 <= report.accuracy <= 100.0
        assert report.rmse is not None
        assert report.n_test == len(town_b.measurements)

    def test_leakage_guard(self, small_town, town_models):
        with pytest.raises(LeakageError):
            run_pm3(small_town.env, small_town.measurements, small_town.tx,
                    small_town.budget, town_models, variant="pm3",
                    area=small_town.area)

    def test_pm3prime_allows_same_town_other_district(self):
        metadata = ModelMetadata(
            terrain_class="flat",
            feature_order=("distance",) * 7,
            training_areas=("modena/district1", "carpi"),
        )
        models = TrainedModels(scaler=None, svc=None, svr=None,
                               metadata=metadata)
        # Same town, different district: fine for the 3' variant only.
        with pytest.raises(LeakageError):
            check_leakage(models, "modena/district2", "pm3")
        check_leakage(models, "modena/district2", "pm3prime")
        with pytest.raises(LeakageError):
            check_leakage(models, "modena/district1", "pm3prime")
        check_leakage(models, "bologna/center", "pm3")

    def test_regression_subset_is_covered_and_predicted_covered(
            self, town_models, town_b):
        from radioplan.dataset import coverage_label
        from radioplan.features import extract_features_array
        from radioplan.svm import apply_scaler, decide

        report = run_pm3(town_b.env, town_b.measurements, town_b.tx,
                         town_b.budget, town_models, variant="pm3",
                         area=town_b.area, project_gps=False)
        lats = [m.position.latitude for m in town_b.measurements]
        lons = [m.position.longitude for m in town_b.measurements]
        feats = extract_features_array(
            town_b.env, town_b.tx.antenna, lats, lons,
            town_models.metadata.rx_mast_height)
        decisions = decide(town_models.svc,
                           apply_scaler(town_models.scaler, feats))
        labels = np.array([coverage_label(m.rssi)
                           for m in town_b.measurements])
        assert report.n_regression == int(
            np.sum((labels == 1) & (decisions == 1)))
