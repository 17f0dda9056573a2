"""Stateless HTTP planning API.

Endpoints:

* ``GET /health`` -> ``{"status": "ok"}``
* ``GET /map/meta`` -> bounds, terrain class, origin, layer counts
* ``POST /predict`` -> the full coverage-raster payload for the requested
  concentrators and lattice (identical to a direct mode-2 run).
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from ..errors import BindError
from ..features import Antenna
from ..geodata import EnvironmentMap, GeoPoint
from ..svm import TrainedModels
from .budget import Concentrator, LinkBudget
from .modes import run_pm2
from .raster import LatticeSpec


class ConcentratorIn(BaseModel):
    lat: float = Field(ge=-90, le=90)
    lon: float = Field(ge=-180, le=180)
    mast_height: float = Field(ge=0)
    tx_power: float
    label: str = ""


class CornerIn(BaseModel):
    lat: float = Field(ge=-90, le=90)
    lon: float = Field(ge=-180, le=180)


class LatticeIn(BaseModel):
    corner_a: CornerIn
    corner_b: CornerIn
    step: float = Field(default=8.0, gt=0)


class PredictIn(BaseModel):
    concentrators: list[ConcentratorIn] = Field(min_length=1)
    lattice: LatticeIn


def create_app(env: EnvironmentMap, models: TrainedModels,
               budget: LinkBudget, rx_mast_height: float | None = None,
               workers: int = 1) -> FastAPI:
    """Build the service around immutable, shared state."""
    app = FastAPI(title="radioplan", docs_url=None, redoc_url=None)

    @app.get("/health")
    def health():
        return {"status": "ok"}

    @app.get("/map/meta")
    def map_meta():
        return {
            "bounds": list(env.bounds),
            "terrain_class": env.terrain_class.value,
            "origin": {"lat": env.origin.latitude,
                       "lon": env.origin.longitude},
            "ground_elevation": env.ground_elevation,
            "layer_counts": {
                "buildings": len(env.buildings),
                "contours": len(env.contours),
                "roads": len(env.roads),
            },
        }

    @app.post("/predict")
    def predict_endpoint(request: PredictIn):
        try:
            concentrators = [
                Concentrator(
                    antenna=Antenna(
                        position=GeoPoint(latitude=c.lat, longitude=c.lon),
                        mast_height=c.mast_height),
                    tx_power=c.tx_power,
                    label=c.label or f"c{i}",
                )
                for i, c in enumerate(request.concentrators)
            ]
            lattice = LatticeSpec(
                corner_a=GeoPoint(latitude=request.lattice.corner_a.lat,
                                  longitude=request.lattice.corner_a.lon),
                corner_b=GeoPoint(latitude=request.lattice.corner_b.lat,
                                  longitude=request.lattice.corner_b.lon),
                step_x=request.lattice.step,
                step_y=request.lattice.step,
            )
        except ValueError as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from exc
        raster = run_pm2(env, concentrators, budget, models, lattice,
                         rx_mast_height=rx_mast_height, workers=workers)
        return JSONResponse(raster.to_payload())

    return app


def serve(env: EnvironmentMap, models: TrainedModels, budget: LinkBudget,
          host: str = "127.0.0.1", port: int = 8000,
          rx_mast_height: float | None = None, workers: int = 1) -> None:
    """Run the service until interrupted."""
    import uvicorn

    app = create_app(env, models, budget, rx_mast_height=rx_mast_height,
                     workers=workers)
    try:
        uvicorn.run(app, host=host, port=port, log_level="warning")
    except OSError as exc:
        raise BindError(f"cannot bind {host}:{port} ({exc})") from exc
