"""Per-receiver pass feasibility scores and the ranking over candidate receivers.

Three independent scores are combined multiplicatively:

* orientation  -- how well the passer's and receiver's view triangles overlap
  once the receiver is projected onto a circle around the passer,
* defense      -- pressure from the defenders nearest the passer and nearest
  the receiver, weighted by how close each sits to the passing line,
* proximity    -- plain distance decay between passer and receiver.

``proximity_defense`` (defense times proximity, no orientation) is kept as the
baseline used throughout the evaluation harness.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field

from .geometry import (
    ConvexPolygon,
    FieldSpec,
    GeometryError,
    Point2,
    angle_of,
    angular_diff,
    build_view_triangle,
    integrate_pair_weights,
    intersect_convex,
)

ROLES = ("defender", "midfielder", "forward", "goalkeeper")

MAX_RECEIVERS = 10
MAX_DEFENDERS = 11

# Canonical mode names plus the short aliases accepted on the CLI / wire.
MODES = ("combined", "proximity_defense", "orientation", "defense", "proximity")
_MODE_ALIASES = {
    "f": "combined",
    "fpd": "proximity_defense",
    "f_pd": "proximity_defense",
    "fo": "orientation",
    "f_o": "orientation",
    "fd": "defense",
    "f_d": "defense",
    "fp": "proximity",
    "f_p": "proximity",
}


class FeasibilityError(ValueError):
    """Invalid scenario or parameters for a feasibility computation."""


def normalize_mode(mode: str) -> str:
    """Map a mode name or short alias to its canonical name."""
    key = mode.strip().lower()
    if key in MODES:
        return key
    if key in _MODE_ALIASES:
        return _MODE_ALIASES[key]
    raise FeasibilityError(f"unknown mode {mode!r}; expected one of {', '.join(MODES)}")


@dataclass(frozen=True)
class PlayerState:
    """One player frozen at the pass moment."""

    id: str
    position: Point2
    orientation: float | None = None  # body facing, degrees CCW from +x
    role: str | None = None

    def __post_init__(self) -> None:
        if not self.id:
            raise FeasibilityError("player id must be non-empty")
        if self.orientation is not None and not math.isfinite(self.orientation):
            raise FeasibilityError(f"player {self.id!r}: non-finite orientation")
        if self.role is not None and self.role not in ROLES:
            raise FeasibilityError(f"player {self.id!r}: unknown role {self.role!r}")


@dataclass(frozen=True)
class Scenario:
    """A single pass event frozen at kick time."""

    field: FieldSpec
    passer: PlayerState
    receivers: tuple[PlayerState, ...]
    defenders: tuple[PlayerState, ...] = ()
    ground_truth_receiver: str | None = None
    success: bool | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "receivers", tuple(self.receivers))
        object.__setattr__(self, "defenders", tuple(self.defenders))
        if not self.receivers:
            raise FeasibilityError("scenario needs at least one receiver")
        if len(self.receivers) > MAX_RECEIVERS:
            raise FeasibilityError(f"at most {MAX_RECEIVERS} receivers allowed")
        if len(self.defenders) > MAX_DEFENDERS:
            raise FeasibilityError(f"at most {MAX_DEFENDERS} defenders allowed")
        ids = [self.passer.id] + [p.id for p in self.receivers] + [p.id for p in self.defenders]
        seen: set[str] = set()
        for pid in ids:
            if pid in seen:
                raise FeasibilityError(f"duplicate player id {pid!r}")
            seen.add(pid)
        if (self.ground_truth_receiver is not None
                and self.ground_truth_receiver not in {r.id for r in self.receivers}):
            raise FeasibilityError(
                f"ground_truth_receiver {self.ground_truth_receiver!r} is not a receiver")

    def receiver_by_id(self, receiver_id: str) -> PlayerState:
        for r in self.receivers:
            if r.id == receiver_id:
                return r
        raise FeasibilityError(f"unknown receiver {receiver_id!r}")


def _reference_integral(view_half_angle: float, circle_radius: float,
                        dist_scale: float) -> float:
    """Pair-weight integral for the head-on reference pose: receiver on the
    view axis at the projection circle, facing straight back at the passer."""
    z = circle_radius
    apex = Point2(0.0, 0.0)
    target = Point2(z, 0.0)
    passer_tri = build_view_triangle(apex, 0.0, view_half_angle, 2.0 * z).as_polygon()
    receiver_tri = build_view_triangle(target, 180.0, view_half_angle, z).as_polygon()
    overlap = intersect_convex(passer_tri, receiver_tri)
    return integrate_pair_weights(overlap, apex, target, dist_scale)


@dataclass(frozen=True)
class ModelParams:
    """Model constants.

    ``norm_constant`` rescales the view-overlap integral so the head-on
    reference pose scores exactly 1; it is derived from the other parameters
    when not given explicitly.
    """

    view_half_angle: float = 30.0      # degrees each side of the body axis
    circle_radius: float = 1.0         # projection circle radius (local units)
    neighbor_count: int = 3            # defenders scored per side of the pass
    view_dist_scale: float | None = None   # integrand distance scale; default 2*circle_radius
    norm_constant: float | None = None

    def __post_init__(self) -> None:
        if not (0.0 < self.view_half_angle < 90.0):
            raise FeasibilityError("view_half_angle must be in (0, 90)")
        if not self.circle_radius > 0.0:
            raise FeasibilityError("circle_radius must be positive")
        if self.neighbor_count < 1:
            raise FeasibilityError("neighbor_count must be >= 1")
        if self.view_dist_scale is None:
            object.__setattr__(self, "view_dist_scale", 2.0 * self.circle_radius)
        if self.view_dist_scale <= 0.0:
            raise FeasibilityError("view_dist_scale must be positive")
        if self.norm_constant is None:
            ref = _reference_integral(self.view_half_angle, self.circle_radius,
                                      self.view_dist_scale)
            object.__setattr__(self, "norm_constant", ref)
        if not self.norm_constant > 0.0:
            raise FeasibilityError("norm_constant must be positive")


DEFAULT_PARAMS = ModelParams()


@dataclass(frozen=True)
class FeasibilityBreakdown:
    """All per-receiver scores. ``orientation`` and ``combined`` are None when
    the scenario carries no orientations and the mode does not need them."""

    receiver_id: str
    orientation: float | None
    passer_defense: float
    receiver_defense: float
    defense: float
    proximity: float
    combined: float | None
    proximity_defense: float

    def score(self, mode: str) -> float:
        value = getattr(self, normalize_mode(mode))
        if value is None:
            raise FeasibilityError(
                f"receiver {self.receiver_id!r} has no {mode} score (no orientations)")
        return value


@dataclass(frozen=True)
class OrientationGeometry:
    """The exact polygons behind one receiver's orientation score, in the
    passer-local frame (passer at the origin, projection circle radius
    ``circle_radius``)."""

    projected_position: Point2
    passer_triangle: ConvexPolygon
    receiver_triangle: ConvexPolygon
    overlap: ConvexPolygon


@dataclass(frozen=True)
class ScenarioEvaluation:
    """Breakdown per receiver (input order) plus the ranking, best first."""

    mode: str
    breakdowns: tuple[FeasibilityBreakdown, ...]
    ranking: tuple[str, ...]
    passer_neighbors: dict[str, tuple[str, ...]] = dc_field(default_factory=dict)
    receiver_neighbors: dict[str, tuple[str, ...]] = dc_field(default_factory=dict)
    geometry: dict[str, OrientationGeometry] | None = None

    @property
    def best(self) -> str:
        return self.ranking[0]

    def rank_of(self, receiver_id: str) -> int:
        return self.ranking.index(receiver_id) + 1

    def breakdown_for(self, receiver_id: str) -> FeasibilityBreakdown:
        for b in self.breakdowns:
            if b.receiver_id == receiver_id:
                return b
        raise FeasibilityError(f"unknown receiver {receiver_id!r}")


def project_to_circle(passer: PlayerState, receivers: list[PlayerState] | tuple[PlayerState, ...],
                      radius: float = 1.0) -> list[PlayerState]:
    """Move every receiver to distance ``radius`` from the passer while keeping
    its bearing and orientation. Fails on a receiver coincident with the passer."""
    out = []
    for r in receivers:
        try:
            bearing = angle_of(passer.position, r.position)
        except GeometryError:
            raise FeasibilityError(f"coincident players {passer.id!r} and {r.id!r}") from None
        rad = math.radians(bearing)
        pos = Point2(passer.position.x + radius * math.cos(rad),
                     passer.position.y + radius * math.sin(rad))
        out.append(PlayerState(r.id, pos, r.orientation, r.role))
    return out


def orientation_geometry(passer: PlayerState, receiver: PlayerState,
                         params: ModelParams = DEFAULT_PARAMS) -> tuple[float, OrientationGeometry]:
    """Orientation score plus the polygons it was computed from."""
    if passer.orientation is None:
        raise FeasibilityError(f"player {passer.id!r} has no orientation")
    if receiver.orientation is None:
        raise FeasibilityError(f"player {receiver.id!r} has no orientation")
    try:
        bearing = angle_of(passer.position, receiver.position)
    except GeometryError:
        raise FeasibilityError(f"coincident players {passer.id!r} and {receiver.id!r}") from None

    z = params.circle_radius
    rad = math.radians(bearing)
    projected = Point2(z * math.cos(rad), z * math.sin(rad))
    origin = Point2(0.0, 0.0)
    passer_tri = build_view_triangle(origin, passer.orientation,
                                     params.view_half_angle, 2.0 * z).as_polygon()
    receiver_tri = build_view_triangle(projected, receiver.orientation,
                                       params.view_half_angle, z).as_polygon()
    overlap = intersect_convex(passer_tri, receiver_tri)
    integral = integrate_pair_weights(overlap, origin, projected, params.view_dist_scale)
    score = min(1.0, integral / params.norm_constant)
    return score, OrientationGeometry(projected, passer_tri, receiver_tri, overlap)


def orientation_feasibility(passer: PlayerState, receiver: PlayerState,
                            params: ModelParams = DEFAULT_PARAMS) -> float:
    """View-overlap score in [0, 1]; 0 when the view triangles do not meet."""
    score, _ = orientation_geometry(passer, receiver, params)
    return score


def defender_weight(defender_bearing: float, pass_bearing: float) -> float:
    """Angular pressure weight: small for defenders near the passing line."""
    alpha = angular_diff(defender_bearing, pass_bearing)
    if alpha < 22.5:
        return 0.25
    if alpha < 45.0:
        return 0.5
    return 2.0


def _defense_score(origin: Point2, pass_bearing: float,
                   candidates: tuple[PlayerState, ...], field: FieldSpec,
                   neighbor_count: int) -> tuple[float, frozenset[str]]:
    """Shared core of the two defensive scores: pick the ``neighbor_count``
    defenders nearest to ``origin`` under the angle-weighted distance and fold
    their pressure into an exponential decay."""
    if not candidates:
        return 1.0, frozenset()
    entries = []
    for d in candidates:
        dist = field.normalized_distance(origin, d.position)
        if d.position.x == origin.x and d.position.y == origin.y:
            bearing = pass_bearing  # sitting on the origin: treat as on the passing line
        else:
            bearing = angle_of(origin, d.position)
        w = defender_weight(bearing, pass_bearing)
        entries.append((w * dist, dist, d.id, w))
    entries.sort(key=lambda e: (e[0], e[1], e[2]))
    chosen = entries[:min(neighbor_count, len(entries))]
    # (1 - dist) floors at 0 so defenders beyond one field diagonal exert no pull
    total = sum(w * max(0.0, 1.0 - dist) for _, dist, _, w in chosen)
    score = math.exp(-total / len(chosen))
    return score, frozenset(e[2] for e in chosen)


def passer_defense_feasibility(scenario: Scenario, receiver_id: str,
                               params: ModelParams = DEFAULT_PARAMS) -> tuple[float, frozenset[str]]:
    """Pressure on the passer toward this receiver; also returns the defender
    ids charged here so the receiver-side score can exclude them."""
    receiver = scenario.receiver_by_id(receiver_id)
    pass_bearing = angle_of(scenario.passer.position, receiver.position)
    return _defense_score(scenario.passer.position, pass_bearing,
                          scenario.defenders, scenario.field, params.neighbor_count)


def receiver_defense_feasibility(scenario: Scenario, receiver_id: str,
                                 excluded: frozenset[str] | set[str],
                                 params: ModelParams = DEFAULT_PARAMS) -> float:
    """Pressure around the receiver from defenders not already charged to the
    passer side. Bearings are still compared against the passing line."""
    receiver = scenario.receiver_by_id(receiver_id)
    pass_bearing = angle_of(scenario.passer.position, receiver.position)
    candidates = tuple(d for d in scenario.defenders if d.id not in excluded)
    score, _ = _defense_score(receiver.position, pass_bearing,
                              candidates, scenario.field, params.neighbor_count)
    return score


def proximity_feasibility(passer: PlayerState, receiver: PlayerState,
                          field: FieldSpec) -> float:
    """Distance decay, normalized so the far corner of the field gives e**-1."""
    return math.exp(-field.normalized_distance(passer.position, receiver.position))


def evaluate_scenario(scenario: Scenario, params: ModelParams = DEFAULT_PARAMS,
                      mode: str = "combined",
                      collect_geometry: bool = False) -> ScenarioEvaluation:
    """Score every receiver and rank them under ``mode``.

    Orientation scores are filled in whenever the passer and all receivers
    carry orientations; otherwise they are None, which is an error only for
    the orientation-dependent modes. Ties are broken by higher orientation
    score, then smaller passer distance, then id, so rankings are total and
    deterministic.
    """
    mode = normalize_mode(mode)
    needs_orientation = mode in ("combined", "orientation")

    missing = [p.id for p in (scenario.passer, *scenario.receivers) if p.orientation is None]
    if missing and needs_orientation:
        raise FeasibilityError(
            f"player {missing[0]!r} has no orientation (required for mode {mode!r})")
    with_orientation = not missing

    breakdowns: list[FeasibilityBreakdown] = []
    passer_neighbors: dict[str, tuple[str, ...]] = {}
    receiver_neighbors: dict[str, tuple[str, ...]] = {}
    geometry: dict[str, OrientationGeometry] = {}
    distances: dict[str, float] = {}

    for receiver in scenario.receivers:
        fdp, charged = passer_defense_feasibility(scenario, receiver.id, params)
        pass_bearing = angle_of(scenario.passer.position, receiver.position)
        remaining = tuple(d for d in scenario.defenders if d.id not in charged)
        fdr, receiver_side = _defense_score(receiver.position, pass_bearing,
                                            remaining, scenario.field, params.neighbor_count)
        defense = fdp * fdr
        proximity = proximity_feasibility(scenario.passer, receiver, scenario.field)

        orientation: float | None = None
        combined: float | None = None
        if with_orientation:
            orientation, geo = orientation_geometry(scenario.passer, receiver, params)
            combined = orientation * defense * proximity
            if collect_geometry:
                geometry[receiver.id] = geo

        breakdowns.append(FeasibilityBreakdown(
            receiver_id=receiver.id,
            orientation=orientation,
            passer_defense=fdp,
            receiver_defense=fdr,
            defense=defense,
            proximity=proximity,
            combined=combined,
            proximity_defense=proximity * defense,
        ))
        passer_neighbors[receiver.id] = tuple(sorted(charged))
        receiver_neighbors[receiver.id] = tuple(sorted(receiver_side))
        distances[receiver.id] = scenario.passer.position.distance_to(receiver.position)

    def sort_key(b: FeasibilityBreakdown):
        primary = getattr(b, mode)
        tiebreak = b.orientation if b.orientation is not None else 0.0
        return (-primary, -tiebreak, distances[b.receiver_id], b.receiver_id)

    ranking = tuple(b.receiver_id for b in sorted(breakdowns, key=sort_key))
    return ScenarioEvaluation(
        mode=mode,
        breakdowns=tuple(breakdowns),
        ranking=ranking,
        passer_neighbors=passer_neighbors,
        receiver_neighbors=receiver_neighbors,
        geometry=geometry if (collect_geometry and with_orientation) else None,
    )
