"""Grid value maps over the pitch and receiver rankings that blend the map
with the orientation score.

A ValueMap holds externally produced per-cell values (pass probability or
possession value). Each receiver gets the mean map value over a disc around
the receiver united with a tube along the passing lane; that mean times the
orientation score ranks the receivers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .feasibility import (
    DEFAULT_PARAMS,
    ModelParams,
    Scenario,
    orientation_feasibility,
)
from .geometry import FieldSpec, Point2

DEFAULT_MAP_WIDTH = 104
DEFAULT_MAP_HEIGHT = 68


class ValueMapError(ValueError):
    """Invalid map data or a region/map mismatch."""


@dataclass(frozen=True, eq=False)
class ValueMap:
    """Row-major grid of scalars whose cell centers tile the field rectangle.

    Row r, column c covers the cell centered at
    ((c + 0.5) * length / width_cells, (r + 0.5) * width / height_cells).
    """

    width: int
    height: int
    values: np.ndarray

    def __post_init__(self) -> None:
        if self.width < 1 or self.height < 1:
            raise ValueMapError("map dimensions must be positive")
        arr = np.asarray(self.values, dtype=float)
        if arr.shape != (self.height, self.width):
            raise ValueMapError(
                f"values shape {arr.shape} does not match {self.height}x{self.width}")
        if not np.all(np.isfinite(arr)):
            raise ValueMapError("map values must be finite")
        arr = arr.copy()
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ValueMap):
            return NotImplemented
        return (self.width == other.width and self.height == other.height
                and bool(np.array_equal(self.values, other.values)))

    def __hash__(self) -> int:
        return hash((self.width, self.height, self.values.tobytes()))


def uniform_map(value: float, width: int = DEFAULT_MAP_WIDTH,
                height: int = DEFAULT_MAP_HEIGHT) -> ValueMap:
    return ValueMap(width, height, np.full((height, width), value, dtype=float))


@dataclass(frozen=True)
class ReceiverRegion:
    """Resolved cell set for one receiver: disc around the receiver plus a
    tube along the passer-receiver segment. Cells are (row, col), sorted."""

    map_width: int
    map_height: int
    cells: tuple[tuple[int, int], ...]
    disc_center: Point2
    disc_radius: float
    tube_start: Point2
    tube_end: Point2
    tube_width: float

    def __post_init__(self) -> None:
        if not self.cells:
            raise ValueMapError("region outside map")
        if not (self.disc_radius > 0.0 and self.tube_width > 0.0):
            raise ValueMapError("disc radius and tube width must be positive")


def receiver_region(passer: Point2, receiver: Point2, vmap: ValueMap,
                    field: FieldSpec, disc_scale: float | None = None,
                    tube_scale: float | None = None) -> ReceiverRegion:
    """Cells whose centers fall within the receiver disc or the passing tube.

    ``disc_scale`` and ``tube_scale`` are fractions of the field length;
    the defaults are 5 and 2 cells of the map's width axis.
    """
    if passer.x == receiver.x and passer.y == receiver.y:
        raise ValueMapError("passer and receiver are coincident")
    if disc_scale is None:
        disc_scale = 5.0 / vmap.width
    if tube_scale is None:
        tube_scale = 2.0 / vmap.width
    radius = disc_scale * field.length
    tube_width = tube_scale * field.length
    if radius <= 0.0 or tube_width <= 0.0:
        raise ValueMapError("disc radius and tube width must be positive")

    xs = (np.arange(vmap.width) + 0.5) * (field.length / vmap.width)
    ys = (np.arange(vmap.height) + 0.5) * (field.width / vmap.height)
    gx, gy = np.meshgrid(xs, ys)  # shape (height, width)

    in_disc = (gx - receiver.x) ** 2 + (gy - receiver.y) ** 2 <= radius * radius

    seg_x, seg_y = receiver.x - passer.x, receiver.y - passer.y
    seg_len2 = seg_x * seg_x + seg_y * seg_y
    t = ((gx - passer.x) * seg_x + (gy - passer.y) * seg_y) / seg_len2
    t = np.clip(t, 0.0, 1.0)
    dx = gx - (passer.x + t * seg_x)
    dy = gy - (passer.y + t * seg_y)
    half = tube_width / 2.0
    in_tube = dx * dx + dy * dy <= half * half

    rows, cols = np.nonzero(in_disc | in_tube)
    cells = tuple(zip(rows.tolist(), cols.tolist()))  # nonzero is row-major sorted
    return ReceiverRegion(vmap.width, vmap.height, cells, receiver, radius,
                          passer, receiver, tube_width)


def map_value(region: ReceiverRegion, vmap: ValueMap) -> float:
    """Mean map value over the region's cells.

    Computed as an anchored compensated mean (first cell's value plus the
    exact sum of differences over the count) so a uniform map yields its
    value bit-exactly for any region size.
    """
    if region.map_width != vmap.width or region.map_height != vmap.height:
        raise ValueMapError(
            f"region resolved for {region.map_height}x{region.map_width}, "
            f"map is {vmap.height}x{vmap.width}")
    first = vmap.values[region.cells[0]]
    return float(first + math.fsum(vmap.values[r, c] - first
                                   for r, c in region.cells) / len(region.cells))


RANKING_KINDS = ("VP", "VE")


@dataclass(frozen=True)
class ReceiverValue:
    """Map mean, orientation score, and their product for one receiver."""

    receiver_id: str
    map_value: float
    orientation: float
    combined: float
    distance: float  # passer distance, used only for tie-breaking


@dataclass(frozen=True)
class ValueRanking:
    kind: str
    entries: tuple[ReceiverValue, ...]  # input receiver order
    ranking: tuple[str, ...]            # best first

    @property
    def best(self) -> str:
        return self.ranking[0]


def rank_receiver_values(entries: tuple[ReceiverValue, ...] | list[ReceiverValue],
                         primary: str = "combined") -> tuple[str, ...]:
    """Order receiver ids by ``primary`` (``combined`` or ``map_value``),
    breaking ties by higher orientation, smaller distance, then id."""
    if primary not in ("combined", "map_value"):
        raise ValueMapError(f"unknown ranking key {primary!r}")
    ordered = sorted(entries, key=lambda e: (-getattr(e, primary), -e.orientation,
                                             e.distance, e.receiver_id))
    return tuple(e.receiver_id for e in ordered)


def combine_with_orientation(scenario: Scenario, vmap: ValueMap,
                             params: ModelParams = DEFAULT_PARAMS,
                             kind: str = "VP") -> ValueRanking:
    """Per-receiver map mean times orientation score, ranked best-first.

    ``kind`` only labels the output ("VP" for pass-probability maps, "VE"
    for possession-value maps); the math is identical.
    """
    if kind not in RANKING_KINDS:
        raise ValueMapError(f"unknown ranking kind {kind!r}; expected VP or VE")
    entries = []
    for receiver in scenario.receivers:
        region = receiver_region(scenario.passer.position, receiver.position,
                                 vmap, scenario.field)
        value = map_value(region, vmap)
        orientation = orientation_feasibility(scenario.passer, receiver, params)
        entries.append(ReceiverValue(
            receiver_id=receiver.id,
            map_value=value,
            orientation=orientation,
            combined=value * orientation,
            distance=scenario.passer.position.distance_to(receiver.position),
        ))
    return ValueRanking(kind, tuple(entries), rank_receiver_values(entries))
