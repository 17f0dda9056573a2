"""Command-line front door.

Subcommands: validate, features, pm1, pm2, pm3, serve, export.  Every run
writes a manifest (resolved configuration, its hash, the seed and the model
checksum where one is involved) next to its outputs, and all outputs are
deterministic for a fixed manifest: no timestamps, stable key order.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .dataset import load_measurements
from .errors import RadioplanError
from .features import Antenna, feature_order
from .geodata import GeoPoint, load_map
from .planner import (
    Concentrator,
    LatticeSpec,
    LinkBudget,
    render_report_table,
    run_pm1,
    run_pm2,
    run_pm3,
    serve,
    write_best_server_png,
    write_coverage_boundary,
    write_rss_png,
)
from .planner.raster import CoverageRaster
from .svm import load_model, model_checksum, save_model
from .tuning import GridSpec, format_tuning_report

DEFAULT_WORKERS = int(os.environ.get("RADIOPLAN_WORKERS", "1"))


def _config_hash(config: dict) -> str:
    canonical = json.dumps(config, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()[:16]


def _write_manifest(out_dir: Path, command: str, config: dict,
                    seed=None, model_sha=None) -> dict:
    manifest = {
        "command": command,
        "config": config,
        "config_hash": _config_hash(config),
        "seed": seed,
        "model_sha256": model_sha,
        "version": __version__,
    }
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "manifest.json").write_text(
        json.dumps(manifest, sort_keys=True, indent=1), encoding="utf-8")
    return manifest


def _meta_header(manifest: dict) -> str:
    return (f"# produced_by={manifest['command']} "
            f"config={manifest['config_hash']} seed={manifest['seed']}")


def _parse_latlon(text: str) -> GeoPoint:
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError("expected LAT,LON")
    return GeoPoint(latitude=float(parts[0]), longitude=float(parts[1]))


def _parse_antenna(text: str) -> Antenna:
    parts = text.split(",")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("expected LAT,LON,MAST_M")
    return Antenna(position=GeoPoint(latitude=float(parts[0]),
                                     longitude=float(parts[1])),
                   mast_height=float(parts[2]))


def _parse_concentrator(text: str):
    parts = text.split(",")
    if len(parts) not in (4, 5):
        raise argparse.ArgumentTypeError(
            "expected LAT,LON,MAST_M,TX_POWER[,LABEL]")
    label = parts[4] if len(parts) == 5 else ""
    return (float(parts[0]), float(parts[1]), float(parts[2]),
            float(parts[3]), label)


def _add_map_args(p):
    p.add_argument("--map", required=True, help="environment map file")
    p.add_argument("--terrain", required=True, choices=["flat", "hilly"])


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="radioplan",
        description="Coverage and signal-strength planning for 169 MHz "
                    "smart-metering networks")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="validate a map and measurement log")
    _add_map_args(p)
    p.add_argument("--measurements", help="measurement CSV to validate too")

    p = sub.add_parser("features", help="dump feature vectors to CSV")
    _add_map_args(p)
    p.add_argument("--measurements", required=True)
    p.add_argument("--tx", required=True, type=_parse_antenna,
                   metavar="LAT,LON,MAST_M")
    p.add_argument("--rx-mast", type=float, default=1.5)
    p.add_argument("--no-project-gps", action="store_true")
    p.add_argument("--out", required=True, help="output directory")

    p = sub.add_parser("pm1", help="train and evaluate on one area")
    _add_map_args(p)
    p.add_argument("--measurements", required=True)
    p.add_argument("--tx", required=True, type=_parse_antenna,
                   metavar="LAT,LON,MAST_M")
    p.add_argument("--tx-power", type=float, default=21.0)
    p.add_argument("--area", required=True, help="area tag, town[/district]")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--rx-mast", type=float, default=1.5)
    p.add_argument("--grid-step", type=int, default=1,
                   help="exponent stride across the default grids")
    p.add_argument("--folds", type=int, default=5)
    p.add_argument("--workers", type=int, default=DEFAULT_WORKERS)
    p.add_argument("--no-project-gps", action="store_true")
    p.add_argument("--out", required=True)

    p = sub.add_parser("pm2", help="blind raster prediction")
    _add_map_args(p)
    p.add_argument("--model", required=True)
    p.add_argument("--concentrator", required=True, action="append",
                   type=_parse_concentrator,
                   metavar="LAT,LON,MAST_M,TX_POWER[,LABEL]")
    p.add_argument("--corner-a", required=True, type=_parse_latlon,
                   metavar="LAT,LON")
    p.add_argument("--corner-b", required=True, type=_parse_latlon,
                   metavar="LAT,LON")
    p.add_argument("--step", type=float, default=8.0)
    p.add_argument("--workers", type=int, default=DEFAULT_WORKERS)
    p.add_argument("--png", action="store_true",
                   help="also write RSS/best-server PNGs and the boundary")
    p.add_argument("--out", required=True)

    p = sub.add_parser("pm3", help="blind prediction scored on measurements")
    _add_map_args(p)
    p.add_argument("--model", required=True)
    p.add_argument("--measurements", required=True)
    p.add_argument("--tx", required=True, type=_parse_antenna,
                   metavar="LAT,LON,MAST_M")
    p.add_argument("--tx-power", type=float, default=21.0)
    p.add_argument("--area", required=True)
    p.add_argument("--variant", choices=["pm3", "pm3prime"], default="pm3")
    p.add_argument("--no-project-gps", action="store_true")
    p.add_argument("--out", required=True)

    p = sub.add_parser("serve", help="run the planning HTTP service")
    _add_map_args(p)
    p.add_argument("--model", required=True)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--workers", type=int, default=DEFAULT_WORKERS)

    p = sub.add_parser("export", help="render a saved raster payload")
    _add_map_args(p)
    p.add_argument("--raster", required=True,
                   help="raster.json produced by pm2")
    p.add_argument("--out", required=True)

    return parser


def cmd_validate(args) -> int:
    env = load_map(args.map, args.terrain)
    print(f"map ok: {len(env.buildings)} buildings, "
          f"{len(env.contours)} contours, {len(env.roads)} roads, "
          f"terrain={env.terrain_class.value}")
    if args.measurements:
        measurements = load_measurements(args.measurements)
        covered = sum(1 for m in measurements if m.rssi > -120.0)
        print(f"measurements ok: {len(measurements)} rows, "
              f"{covered} covered")
    return 0


def cmd_features(args) -> int:
    env = load_map(args.map, args.terrain)
    measurements = load_measurements(args.measurements)
    out_dir = Path(args.out)
    config = {"map": args.map, "terrain": args.terrain,
              "measurements": args.measurements,
              "tx": [args.tx.position.latitude, args.tx.position.longitude,
                     args.tx.mast_height],
              "rx_mast": args.rx_mast,
              "project_gps": not args.no_project_gps}
    manifest = _write_manifest(out_dir, "features", config)

    from .planner.modes import _measurement_features
    feats = _measurement_features(env, measurements, args.tx, args.rx_mast,
                                  not args.no_project_gps)
    names = feature_order(env.terrain_class)
    lines = [_meta_header(manifest),
             "id,lat,lon," + ",".join(names) + ",terrain"]
    for i, (m, row) in enumerate(zip(measurements, feats)):
        values = ",".join(repr(float(v)) for v in row)
        lines.append(f"{i},{m.position.latitude!r},{m.position.longitude!r},"
                     f"{values},{env.terrain_class.value}")
    (out_dir / "features.csv").write_text("\n".join(lines) + "\n",
                                          encoding="utf-8")
    print(f"wrote {out_dir / 'features.csv'} ({len(measurements)} rows)")
    return 0


def cmd_pm1(args) -> int:
    env = load_map(args.map, args.terrain)
    measurements = load_measurements(args.measurements)
    out_dir = Path(args.out)
    config = {"map": args.map, "terrain": args.terrain,
              "measurements": args.measurements,
              "tx": [args.tx.position.latitude, args.tx.position.longitude,
                     args.tx.mast_height],
              "tx_power": args.tx_power, "area": args.area,
              "seed": args.seed, "rx_mast": args.rx_mast,
              "grid_step": args.grid_step, "folds": args.folds,
              "project_gps": not args.no_project_gps}
    manifest = _write_manifest(out_dir, "pm1", config, seed=args.seed)

    tx = Concentrator(antenna=args.tx, tx_power=args.tx_power,
                      label="tx0")
    budget = LinkBudget(reference_tx_power=args.tx_power)
    result = run_pm1(
        env, measurements, tx, budget, seed=args.seed, area=args.area,
        cls_grid=GridSpec.classification_default(step=args.grid_step),
        reg_grid=GridSpec.regression_default(step=args.grid_step),
        folds=args.folds, workers=args.workers,
        rx_mast_height=args.rx_mast, project_gps=not args.no_project_gps)

    sha = save_model(result.models, out_dir / "models.json")
    manifest = _write_manifest(out_dir, "pm1", config, seed=args.seed,
                               model_sha=sha)
    report_text = _meta_header(manifest) + "\n" + render_report_table(
        [(args.area, "1", result.report)])
    (out_dir / "report.txt").write_text(report_text, encoding="utf-8")
    (out_dir / "report.json").write_text(json.dumps({
        "meta": {"command": "pm1", "config_hash": manifest["config_hash"],
                 "seed": args.seed, "model_sha256": sha},
        "area": args.area,
        "metrics": {
            "accuracy": result.report.accuracy,
            "rmse": result.report.rmse,
            "full_scale_accuracy": result.report.full_scale_accuracy,
            "false_positive_pct": result.report.false_positive_pct,
            "n_test": result.report.n_test,
            "n_regression": result.report.n_regression,
        },
        "hyperparams": result.models.hyperparams,
    }, sort_keys=True, indent=1), encoding="utf-8")
    (out_dir / "tuning_classification.txt").write_text(
        format_tuning_report(result.classification_search, "classification"),
        encoding="utf-8")
    (out_dir / "tuning_regression.txt").write_text(
        format_tuning_report(result.regression_search, "regression"),
        encoding="utf-8")
    print(report_text)
    print(f"models: {out_dir / 'models.json'} (sha256 {sha[:16]})")
    return 0


def _load_concentrators(args):
    return [
        Concentrator(
            antenna=Antenna(position=GeoPoint(latitude=lat, longitude=lon),
                            mast_height=mast),
            tx_power=power, label=label or f"c{i}")
        for i, (lat, lon, mast, power, label)
        in enumerate(args.concentrator)
    ]


def cmd_pm2(args) -> int:
    env = load_map(args.map, args.terrain)
    models = load_model(args.model)
    out_dir = Path(args.out)
    config = {"map": args.map, "terrain": args.terrain, "model": args.model,
              "concentrators": [list(c) for c in args.concentrator],
              "corner_a": [args.corner_a.latitude, args.corner_a.longitude],
              "corner_b": [args.corner_b.latitude, args.corner_b.longitude],
              "step": args.step}
    manifest = _write_manifest(out_dir, "pm2", config,
                               seed=models.metadata.seed,
                               model_sha=model_checksum(models))

    lattice = LatticeSpec(corner_a=args.corner_a, corner_b=args.corner_b,
                          step_x=args.step, step_y=args.step)
    budget = LinkBudget(
        reference_tx_power=models.metadata.reference_tx_power)
    raster = run_pm2(env, _load_concentrators(args), budget, models, lattice,
                     workers=args.workers)
    payload = raster.to_payload()
    payload["meta"] = {"command": "pm2",
                       "config_hash": manifest["config_hash"],
                       "seed": models.metadata.seed}
    (out_dir / "raster.json").write_text(
        json.dumps(payload, sort_keys=True), encoding="utf-8")
    ny, nx = raster.shape
    print(f"raster {nx}x{ny} nodes, "
          f"{int(np.sum(raster.best_server >= 0))} covered")
    if args.png:
        write_rss_png(raster, out_dir / "rss_merged.png")
        for i in range(len(raster.layers)):
            write_rss_png(raster, out_dir / f"rss_{i}.png", layer=i)
        write_best_server_png(raster, out_dir / "best_server.png")
        write_coverage_boundary(raster, env, out_dir / "coverage.geojson")
        print(f"rendered PNGs and coverage boundary in {out_dir}")
    return 0


def cmd_pm3(args) -> int:
    env = load_map(args.map, args.terrain)
    models = load_model(args.model)
    measurements = load_measurements(args.measurements)
    out_dir = Path(args.out)
    config = {"map": args.map, "terrain": args.terrain, "model": args.model,
              "measurements": args.measurements,
              "tx": [args.tx.position.latitude, args.tx.position.longitude,
                     args.tx.mast_height],
              "tx_power": args.tx_power, "area": args.area,
              "variant": args.variant,
              "project_gps": not args.no_project_gps}
    manifest = _write_manifest(out_dir, "pm3", config,
                               seed=models.metadata.seed,
                               model_sha=model_checksum(models))

    tx = Concentrator(antenna=args.tx, tx_power=args.tx_power, label="tx0")
    budget = LinkBudget(
        reference_tx_power=models.metadata.reference_tx_power)
    report = run_pm3(env, measurements, tx, budget, models,
                     variant=args.variant, area=args.area,
                     project_gps=not args.no_project_gps)
    pm_label = "3" if args.variant == "pm3" else "3'"
    report_text = _meta_header(manifest) + "\n" + render_report_table(
        [(args.area, pm_label, report)])
    (out_dir / "report.txt").write_text(report_text, encoding="utf-8")
    (out_dir / "report.json").write_text(json.dumps({
        "meta": {"command": "pm3", "config_hash": manifest["config_hash"],
                 "seed": models.metadata.seed,
                 "model_sha256": model_checksum(models)},
        "area": args.area,
        "variant": args.variant,
        "metrics": {
            "accuracy": report.accuracy,
            "rmse": report.rmse,
            "full_scale_accuracy": report.full_scale_accuracy,
            "false_positive_pct": report.false_positive_pct,
            "n_test": report.n_test,
            "n_full_scale": report.n_full_scale,
            "n_regression": report.n_regression,
        },
    }, sort_keys=True, indent=1), encoding="utf-8")
    print(report_text)
    return 0


def cmd_serve(args) -> int:
    env = load_map(args.map, args.terrain)
    models = load_model(args.model)
    budget = LinkBudget(
        reference_tx_power=models.metadata.reference_tx_power)
    print(f"serving on http://{args.host}:{args.port}")
    serve(env, models, budget, host=args.host, port=args.port,
          workers=args.workers)
    return 0


def cmd_export(args) -> int:
    env = load_map(args.map, args.terrain)
    payload = json.loads(Path(args.raster).read_text(encoding="utf-8"))
    raster = CoverageRaster.from_payload(payload, env)
    out_dir = Path(args.out)
    config = {"map": args.map, "terrain": args.terrain, "raster": args.raster}
    _write_manifest(out_dir, "export", config,
                    seed=payload.get("meta", {}).get("seed"))
    write_rss_png(raster, out_dir / "rss_merged.png")
    for i in range(len(raster.layers)):
        write_rss_png(raster, out_dir / f"rss_{i}.png", layer=i)
    write_best_server_png(raster, out_dir / "best_server.png")
    write_coverage_boundary(raster, env, out_dir / "coverage.geojson")
    print(f"rendered {len(raster.layers)} layers in {out_dir}")
    return 0


HANDLERS = {
    "validate": cmd_validate,
    "features": cmd_features,
    "pm1": cmd_pm1,
    "pm2": cmd_pm2,
    "pm3": cmd_pm3,
    "serve": cmd_serve,
    "export": cmd_export,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return HANDLERS[args.command](args)
    except RadioplanError as exc:
        print(json.dumps({"error": type(exc).__name__, "detail": str(exc)}),
              file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
