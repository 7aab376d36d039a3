"""Wire models for the HTTP facade.

Scenario payloads are raw record dicts in the scenario-file schema; they are
validated by the same parser the file reader uses, so the service and the
files share one validation path.
"""

from __future__ import annotations

from pydantic import BaseModel, ConfigDict, Field

Coord = tuple[float, float]


class FieldModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    length: float = 105.0
    width: float = 68.0
    attack_direction: str = "+x"


class EvaluateRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    scenario: dict
    field: FieldModel = Field(default_factory=FieldModel)
    mode: str = "F"


class EpvRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    scenario: dict
    field: FieldModel = Field(default_factory=FieldModel)
    map: str
    kind: str = "VP"


class BreakdownModel(BaseModel):
    receiver_id: str
    orientation: float | None
    passer_defense: float
    receiver_defense: float
    defense: float
    proximity: float
    combined: float | None
    proximity_defense: float


class ReceiverGeometryModel(BaseModel):
    """Polygons behind one receiver's orientation score, in the passer-local
    frame (passer at the origin)."""

    projected_position: Coord
    passer_triangle: list[Coord]
    receiver_triangle: list[Coord]
    overlap: list[Coord]


class EvaluateResponse(BaseModel):
    mode: str
    breakdowns: list[BreakdownModel]
    ranking: list[str]
    best: str
    passer_neighbors: dict[str, list[str]]
    receiver_neighbors: dict[str, list[str]]
    geometry: dict[str, ReceiverGeometryModel] | None
    warnings: list[str]


class EpvEntryModel(BaseModel):
    receiver_id: str
    map_value: float
    orientation: float
    combined: float


class EpvResponse(BaseModel):
    kind: str
    map: str
    entries: list[EpvEntryModel]
    ranking: list[str]
    best: str
    warnings: list[str]


class MapsResponse(BaseModel):
    maps: list[str]


class HealthResponse(BaseModel):
    status: str
    params: dict[str, float]
