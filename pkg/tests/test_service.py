import json

import numpy as np
import pytest
from fastapi.testclient import TestClient

from radioplan.geodata import LocalPoint
from radioplan.planner import (
    LatticeSpec,
    coverage_boundary_geojson,
    create_app,
    run_pm2,
    write_best_server_png,
    write_rss_png,
)
from radioplan.planner.budget import Concentrator
from radioplan.features import Antenna


@pytest.fixture(scope="module")
def client(small_town, town_models):
    app = create_app(small_town.env, town_models, small_town.budget)
    with TestClient(app) as c:
        yield c


def predict_body(town, half=80.0, step=8.0, concentrators=None):
    frame = town.env.frame
    a = frame.to_geo(LocalPoint(-half, -half))
    b = frame.to_geo(LocalPoint(half, half))
    return {
        "concentrators": concentrators or [{
            "lat": town.tx.antenna.position.latitude,
            "lon": town.tx.antenna.position.longitude,
            "mast_height": town.tx.antenna.mast_height,
            "tx_power": town.tx.tx_power,
            "label": town.tx.label,
        }],
        "lattice": {
            "corner_a": {"lat": a.latitude, "lon": a.longitude},
            "corner_b": {"lat": b.latitude, "lon": b.longitude},
            "step": step,
        },
    }


class TestEndpoints:
    def test_health(self, client):
        response = client.get("/health")
        assert response.status_code == 200
        assert response.json() == {"status": "ok"}

    def test_map_meta(self, client, small_town):
        meta = client.get("/map/meta").json()
        assert meta["terrain_class"] == "flat"
        assert meta["layer_counts"]["buildings"] == len(
            small_town.env.buildings)
        assert meta["layer_counts"]["roads"] == len(small_town.env.roads)
        assert len(meta["bounds"]) == 4

    def test_predict_equals_direct_mode2_bit_for_bit(
            self, client, small_town, town_models):
        body = predict_body(small_town)
        response = client.post("/predict", json=body)
        assert response.status_code == 200
        frame = small_town.env.frame
        lattice = LatticeSpec(
            corner_a=frame.to_geo(LocalPoint(-80.0, -80.0)),
            corner_b=frame.to_geo(LocalPoint(80.0, 80.0)),
            step_x=8.0, step_y=8.0)
        raster = run_pm2(small_town.env, [small_town.tx], small_town.budget,
                         town_models, lattice)
        assert json.dumps(response.json(), sort_keys=True) == \
            json.dumps(raster.to_payload(), sort_keys=True)

    def test_legend_in_payload(self, client, small_town):
        payload = client.post("/predict", json=predict_body(small_town)).json()
        assert len(payload["legend"]) == 10
        assert payload["legend"][0]["min"] == -120.0
        assert payload["legend"][-1]["max"] == -20.0
        assert all(b["max"] - b["min"] == 10.0 for b in payload["legend"])

    def test_malformed_body_is_client_error(self, client):
        response = client.post("/predict", json={"concentrators": []})
        assert 400 <= response.status_code < 500
        assert response.json()["detail"]

    def test_invalid_power_level_rejected(self, client, small_town):
        body = predict_body(small_town)
        body["concentrators"][0]["tx_power"] = 23.0
        response = client.post("/predict", json=body)
        assert response.status_code == 422
        assert "tx_power" in str(response.json()["detail"])

    def test_concurrent_identical_requests_identical_bodies(
            self, client, small_town):
        from concurrent.futures import ThreadPoolExecutor
        body = predict_body(small_town, half=40.0)
        with ThreadPoolExecutor(max_workers=4) as pool:
            futures = [pool.submit(client.post, "/predict", json=body)
                       for _ in range(4)]
            texts = [f.result().text for f in futures]
        assert len(set(texts)) == 1


@pytest.fixture(scope="module")
def export_raster(small_town, town_models):
    # Coarse lattice reaching past the coverage edge, so the exports
    # show both servers and the no-coverage region.
    frame = small_town.env.frame
    lattice = LatticeSpec(
        corner_a=frame.to_geo(LocalPoint(-2800.0, -400.0)),
        corner_b=frame.to_geo(LocalPoint(2800.0, 400.0)),
        step_x=100.0, step_y=100.0)
    pair = [
        small_town.tx,
        Concentrator(
            antenna=Antenna(frame.to_geo(LocalPoint(100.0, 0.0)),
                            mast_height=18.0),
            tx_power=24.0, label="c1"),
    ]
    return run_pm2(small_town.env, pair, small_town.budget, town_models,
                   lattice)


class TestExports:
    def test_rss_png_dimensions(self, export_raster, tmp_path):
        from PIL import Image
        path = write_rss_png(export_raster, tmp_path / "rss.png")
        with Image.open(path) as img:
            assert img.size == (export_raster.shape[1], export_raster.shape[0])

    def test_georef_sidecar(self, export_raster, tmp_path):
        write_rss_png(export_raster, tmp_path / "rss.png")
        sidecar = (tmp_path / "rss.png.georef.txt").read_text(encoding="utf-8")
        assert "corner_sw_lat" in sidecar
        assert "step_x_m = 100.0" in sidecar
        assert f"nx = {export_raster.shape[1]}" in sidecar
        assert "row0 = north" in sidecar

    def test_best_server_png(self, export_raster, tmp_path):
        from PIL import Image
        path = write_best_server_png(export_raster, tmp_path / "servers.png")
        with Image.open(path) as img:
            arr = np.asarray(img)
        # At least two distinct server colors plus the no-coverage color.
        colors = {tuple(c) for c in arr.reshape(-1, 4)}
        assert len(colors) >= 3

    def test_coverage_boundary_geojson(self, export_raster, small_town):
        doc = coverage_boundary_geojson(export_raster, small_town.env)
        assert doc["type"] == "FeatureCollection"
        assert doc["features"], "covered cells must produce a boundary"
        ring = doc["features"][0]["geometry"]["coordinates"][0]
        lons = [p[0] for p in ring]
        lats = [p[1] for p in ring]
        assert all(10.9 < lon < 11.1 for lon in lons)
        assert all(44.4 < lat < 44.6 for lat in lats)
