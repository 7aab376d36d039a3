"""Stateless HTTP facade over scenario evaluation and map combination.

All shared state (model params, preloaded value maps) is immutable after
startup, so concurrent requests are safe and identical requests yield
identical responses.
"""

from __future__ import annotations

import os
from pathlib import Path

from fastapi import FastAPI, HTTPException
from fastapi.staticfiles import StaticFiles

from ..dataio import (
    DEFAULT_SMOOTHING_WINDOW,
    DataFormatError,
    parse_field_spec,
    read_value_map,
    scenario_from_record,
)
from ..epvbridge import ValueMap, ValueMapError, combine_with_orientation
from ..feasibility import (
    DEFAULT_PARAMS,
    FeasibilityError,
    ModelParams,
    evaluate_scenario,
    normalize_mode,
)
from ..geometry import ConvexPolygon, GeometryError
from .schemas import (
    BreakdownModel,
    EpvRequest,
    EpvResponse,
    EpvEntryModel,
    EvaluateRequest,
    EvaluateResponse,
    HealthResponse,
    MapsResponse,
    ReceiverGeometryModel,
)


def params_from_env(env: dict[str, str] | None = None) -> ModelParams:
    """ModelParams with PASSVIEW_PSI / PASSVIEW_NEIGHBORS overrides applied."""
    env = os.environ if env is None else env
    kwargs: dict = {}
    if "PASSVIEW_PSI" in env:
        kwargs["view_half_angle"] = float(env["PASSVIEW_PSI"])
    if "PASSVIEW_NEIGHBORS" in env:
        kwargs["neighbor_count"] = int(env["PASSVIEW_NEIGHBORS"])
    return ModelParams(**kwargs) if kwargs else DEFAULT_PARAMS


def load_maps_dir(maps_dir: str | Path) -> dict[str, ValueMap]:
    """All *.map files in the directory, keyed by file stem."""
    maps: dict[str, ValueMap] = {}
    for path in sorted(Path(maps_dir).glob("*.map")):
        try:
            maps[path.stem] = read_value_map(path)
        except DataFormatError as exc:
            raise DataFormatError(f"{path.name}: {exc}") from None
    return maps


def _coords(polygon: ConvexPolygon) -> list[tuple[float, float]]:
    return list(polygon.coords)


def create_app(params: ModelParams | None = None,
               maps: dict[str, ValueMap] | None = None,
               maps_dir: str | Path | None = None,
               smoothing_window: int | None = None,
               ui_dir: str | Path | None = None) -> FastAPI:
    """Build the service. Arguments win over environment variables
    (PASSVIEW_PSI, PASSVIEW_NEIGHBORS, PASSVIEW_SMOOTHING, PASSVIEW_MAPS_DIR,
    PASSVIEW_UI_DIR), which win over defaults."""
    if params is None:
        params = params_from_env()
    if maps is None:
        if maps_dir is None:
            maps_dir = os.environ.get("PASSVIEW_MAPS_DIR")
        maps = load_maps_dir(maps_dir) if maps_dir else {}
    if smoothing_window is None:
        smoothing_window = int(os.environ.get("PASSVIEW_SMOOTHING",
                                              DEFAULT_SMOOTHING_WINDOW))
    if ui_dir is None:
        ui_dir = os.environ.get("PASSVIEW_UI_DIR")

    app = FastAPI(title="passview", docs_url=None, redoc_url=None)

    @app.get("/health", response_model=HealthResponse)
    def health() -> HealthResponse:
        return HealthResponse(status="ok", params={
            "view_half_angle": params.view_half_angle,
            "circle_radius": params.circle_radius,
            "neighbor_count": float(params.neighbor_count),
            "view_dist_scale": params.view_dist_scale,
            "smoothing_window": float(smoothing_window),
        })

    @app.get("/api/maps", response_model=MapsResponse)
    def list_maps() -> MapsResponse:
        return MapsResponse(maps=sorted(maps))

    def parse_scenario(req: EvaluateRequest | EpvRequest):
        try:
            field = parse_field_spec(req.field.model_dump())
            return scenario_from_record(req.scenario, field)
        except DataFormatError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from None

    @app.post("/api/evaluate", response_model=EvaluateResponse)
    def evaluate(req: EvaluateRequest) -> EvaluateResponse:
        scenario, warnings = parse_scenario(req)
        try:
            mode = normalize_mode(req.mode)
            result = evaluate_scenario(scenario, params, mode, collect_geometry=True)
        except (FeasibilityError, GeometryError) as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from None
        geometry = None
        if result.geometry is not None:
            geometry = {
                rid: ReceiverGeometryModel(
                    projected_position=(geo.projected_position.x, geo.projected_position.y),
                    passer_triangle=_coords(geo.passer_triangle),
                    receiver_triangle=_coords(geo.receiver_triangle),
                    overlap=_coords(geo.overlap),
                )
                for rid, geo in result.geometry.items()
            }
        return EvaluateResponse(
            mode=result.mode,
            breakdowns=[BreakdownModel(**b.__dict__) for b in result.breakdowns],
            ranking=list(result.ranking),
            best=result.best,
            passer_neighbors={k: list(v) for k, v in result.passer_neighbors.items()},
            receiver_neighbors={k: list(v) for k, v in result.receiver_neighbors.items()},
            geometry=geometry,
            warnings=warnings,
        )

    @app.post("/api/epv-combine", response_model=EpvResponse)
    def epv_combine(req: EpvRequest) -> EpvResponse:
        if req.map not in maps:
            raise HTTPException(status_code=404, detail=f"unknown value map {req.map!r}")
        scenario, warnings = parse_scenario(req)
        try:
            ranking = combine_with_orientation(scenario, maps[req.map], params, req.kind)
        except (FeasibilityError, GeometryError, ValueMapError) as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from None
        return EpvResponse(
            kind=ranking.kind,
            map=req.map,
            entries=[EpvEntryModel(receiver_id=e.receiver_id, map_value=e.map_value,
                                   orientation=e.orientation, combined=e.combined)
                     for e in ranking.entries],
            ranking=list(ranking.ranking),
            best=ranking.best,
            warnings=warnings,
        )

    if ui_dir and Path(ui_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app
