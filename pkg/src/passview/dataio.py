"""File formats and data preparation.

* orientation streams and the windowed circular-median smoother,
* line-delimited scenario files (one JSON header line, one JSON record per
  pass event),
* value-map text files,
* a deterministic synthetic scenario generator.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .epvbridge import ValueMap
from .feasibility import (
    DEFAULT_PARAMS,
    FeasibilityError,
    ModelParams,
    PlayerState,
    ROLES,
    Scenario,
    evaluate_scenario,
)
from .geometry import FieldSpec, GeometryError, Point2, wrap_degrees

FILE_FORMAT = "passview-scenarios"
FILE_VERSION = 1
UNITS = {"length": "meters", "angle": "degrees"}

DEFAULT_SMOOTHING_WINDOW = 2


class DataFormatError(ValueError):
    """Schema violation with optional line/field context baked into str()."""

    def __init__(self, message: str, line: int | None = None, field: str | None = None):
        self.line = line
        self.field = field
        parts = []
        if line is not None:
            parts.append(f"line {line}")
        if field is not None:
            parts.append(f"field {field!r}")
        prefix = ": ".join(parts)
        super().__init__(f"{prefix}: {message}" if prefix else message)


# ---------------------------------------------------------------------------
# Orientation streams

@dataclass(frozen=True)
class OrientationSeries:
    """Per-frame orientation observations for one player."""

    player_id: str
    samples: tuple[tuple[int, float], ...]  # (frame index, degrees in [0, 360))

    def __post_init__(self) -> None:
        object.__setattr__(self, "samples", tuple((int(f), float(v)) for f, v in self.samples))
        last = None
        for frame, value in self.samples:
            if last is not None and frame <= last:
                raise DataFormatError(f"frame indices must be strictly increasing (at {frame})")
            last = frame
            if not math.isfinite(value) or not (0.0 <= value < 360.0):
                raise DataFormatError(f"orientation {value} out of [0, 360) at frame {frame}")


def circular_mean(values: list[float]) -> float:
    """Mean direction of angles in degrees, in [0, 360)."""
    s = math.fsum(math.sin(math.radians(v)) for v in values)
    c = math.fsum(math.cos(math.radians(v)) for v in values)
    return wrap_degrees(math.degrees(math.atan2(s, c)))


def smooth_orientation(series: OrientationSeries, frame: int,
                       window: int = DEFAULT_SMOOTHING_WINDOW) -> float:
    """Circular median of the samples within ``window`` frames of ``frame``.

    Samples are unwrapped around their circular mean and the middle one is
    taken; with an even count, the one nearer the circular mean wins.
    The result is always one of the observed sample values (mod 360).
    """
    if window < 0:
        raise DataFormatError("window must be >= 0")
    values = [v for f, v in series.samples if abs(f - frame) <= window]
    if not values:
        raise DataFormatError(
            f"no orientation samples within {window} frames of frame {frame}")
    mean = circular_mean(values)
    # sort on the unwrap around the mean but return the original sample, so
    # the result is bit-for-bit one of the inputs
    keyed = sorted((((v - mean + 180.0) % 360.0) - 180.0, v) for v in values)
    n = len(keyed)
    if n % 2 == 1:
        return keyed[n // 2][1]
    lo, hi = keyed[n // 2 - 1], keyed[n // 2]
    return lo[1] if abs(lo[0]) <= abs(hi[0]) else hi[1]


# ---------------------------------------------------------------------------
# Scenario files

_HEADER_KEYS = {"format", "version", "field", "units"}
_FIELD_KEYS = {"length", "width", "attack_direction"}
_RECORD_KEYS = {"passer", "receivers", "defenders", "ground_truth", "success"}
_PLAYER_KEYS = {"id", "x", "y", "orientation", "role"}


def _require_number(obj: dict, key: str, line: int | None, where: str) -> float:
    if key not in obj:
        raise DataFormatError("missing", line=line, field=f"{where}.{key}")
    value = obj[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
        raise DataFormatError("not a finite number", line=line, field=f"{where}.{key}")
    return float(value)


def _reject_unknown(obj: dict, allowed: set[str], line: int | None, where: str) -> None:
    for key in obj:
        if key not in allowed:
            raise DataFormatError("unknown field", line=line,
                                  field=f"{where}.{key}" if where else key)


def _parse_player(obj: object, line: int | None, where: str) -> PlayerState:
    if not isinstance(obj, dict):
        raise DataFormatError("expected an object", line=line, field=where)
    _reject_unknown(obj, _PLAYER_KEYS, line, where)
    pid = obj.get("id")
    if not isinstance(pid, str) or not pid:
        raise DataFormatError("missing or invalid id", line=line, field=f"{where}.id")
    x = _require_number(obj, "x", line, where)
    y = _require_number(obj, "y", line, where)
    orientation = None
    if "orientation" in obj and obj["orientation"] is not None:
        orientation = _require_number(obj, "orientation", line, where)
        if not (0.0 <= orientation < 360.0):
            raise DataFormatError(f"orientation {orientation} out of [0, 360)",
                                  line=line, field=f"{where}.orientation")
    role = obj.get("role")
    if role is not None and role not in ROLES:
        raise DataFormatError(f"unknown role {role!r}", line=line, field=f"{where}.role")
    try:
        return PlayerState(pid, Point2(x, y), orientation, role)
    except (FeasibilityError, GeometryError) as exc:
        raise DataFormatError(str(exc), line=line, field=where) from None


def parse_field_spec(obj: object, line: int | None = None,
                     where: str = "field") -> FieldSpec:
    if not isinstance(obj, dict):
        raise DataFormatError("expected an object", line=line, field=where)
    _reject_unknown(obj, _FIELD_KEYS, line, where)
    length = _require_number(obj, "length", line, where)
    width = _require_number(obj, "width", line, where)
    direction = obj.get("attack_direction", "+x")
    try:
        return FieldSpec(length, width, direction)
    except GeometryError as exc:
        raise DataFormatError(str(exc), line=line, field=where) from None


def scenario_from_record(record: object, field_spec: FieldSpec,
                         line: int | None = None) -> tuple[Scenario, list[str]]:
    """Validate one record dict into a Scenario.

    Goalkeeper receivers are dropped (they are never pass candidates here)
    with a warning per drop. Raises DataFormatError naming the offending
    line and field otherwise.
    """
    if not isinstance(record, dict):
        raise DataFormatError("expected an object", line=line)
    _reject_unknown(record, _RECORD_KEYS, line, "")
    if "passer" not in record:
        raise DataFormatError("missing", line=line, field="passer")
    passer = _parse_player(record["passer"], line, "passer")

    raw_receivers = record.get("receivers")
    if not isinstance(raw_receivers, list) or not raw_receivers:
        raise DataFormatError("must be a non-empty list", line=line, field="receivers")
    warnings: list[str] = []
    receivers: list[PlayerState] = []
    for i, raw in enumerate(raw_receivers):
        p = _parse_player(raw, line, f"receivers[{i}]")
        if p.role == "goalkeeper":
            prefix = f"line {line}: " if line is not None else ""
            warnings.append(f"{prefix}dropped goalkeeper receiver {p.id!r}")
            continue
        receivers.append(p)
    if not receivers:
        raise DataFormatError("no receivers left after dropping goalkeepers",
                              line=line, field="receivers")

    raw_defenders = record.get("defenders", [])
    if not isinstance(raw_defenders, list):
        raise DataFormatError("must be a list", line=line, field="defenders")
    defenders = [_parse_player(raw, line, f"defenders[{i}]")
                 for i, raw in enumerate(raw_defenders)]

    ground_truth = record.get("ground_truth")
    if ground_truth is not None and not isinstance(ground_truth, str):
        raise DataFormatError("must be a string", line=line, field="ground_truth")
    success = record.get("success")
    if success is not None and not isinstance(success, bool):
        raise DataFormatError("must be a boolean", line=line, field="success")

    try:
        scenario = Scenario(field_spec, passer, tuple(receivers), tuple(defenders),
                            ground_truth, success)
    except (FeasibilityError, GeometryError) as exc:
        raise DataFormatError(str(exc), line=line) from None
    return scenario, warnings


def read_scenario_file(path: str | Path) -> tuple[FieldSpec, list[Scenario], list[str]]:
    """Parse a scenario file; returns (field, scenarios, warnings)."""
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    field_spec: FieldSpec | None = None
    scenarios: list[Scenario] = []
    warnings: list[str] = []
    for lineno, raw in enumerate(lines, start=1):
        if not raw.strip():
            continue
        try:
            obj = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise DataFormatError(f"invalid JSON ({exc.msg})", line=lineno) from None
        if field_spec is None:
            field_spec = _parse_header(obj, lineno)
            continue
        scenario, record_warnings = scenario_from_record(obj, field_spec, lineno)
        scenarios.append(scenario)
        warnings.extend(record_warnings)
    if field_spec is None:
        raise DataFormatError("empty file: missing header line")
    return field_spec, scenarios, warnings


def _parse_header(obj: object, lineno: int) -> FieldSpec:
    if not isinstance(obj, dict):
        raise DataFormatError("header must be an object", line=lineno)
    _reject_unknown(obj, _HEADER_KEYS, lineno, "")
    if obj.get("format") != FILE_FORMAT:
        raise DataFormatError(f"format must be {FILE_FORMAT!r}", line=lineno, field="format")
    if obj.get("version") != FILE_VERSION:
        raise DataFormatError(f"unsupported version {obj.get('version')!r}",
                              line=lineno, field="version")
    if obj.get("units", UNITS) != UNITS:
        raise DataFormatError(f"unsupported units {obj.get('units')!r}",
                              line=lineno, field="units")
    if "field" not in obj:
        raise DataFormatError("missing", line=lineno, field="field")
    return parse_field_spec(obj["field"], lineno)


def _player_to_dict(p: PlayerState) -> dict:
    out: dict = {"id": p.id, "x": p.position.x, "y": p.position.y}
    if p.orientation is not None:
        out["orientation"] = p.orientation
    if p.role is not None:
        out["role"] = p.role
    return out


def scenario_to_record(scenario: Scenario) -> dict:
    record: dict = {
        "passer": _player_to_dict(scenario.passer),
        "receivers": [_player_to_dict(r) for r in scenario.receivers],
        "defenders": [_player_to_dict(d) for d in scenario.defenders],
    }
    if scenario.ground_truth_receiver is not None:
        record["ground_truth"] = scenario.ground_truth_receiver
    if scenario.success is not None:
        record["success"] = scenario.success
    return record


def save_scenario_file(path: str | Path, field_spec: FieldSpec,
                       scenarios: list[Scenario]) -> None:
    """Write header + one record per scenario. Output bytes are a pure
    function of the inputs (no timestamps)."""
    header = {
        "format": FILE_FORMAT,
        "version": FILE_VERSION,
        "field": {"length": field_spec.length, "width": field_spec.width,
                  "attack_direction": field_spec.attack_direction},
        "units": UNITS,
    }
    out = [json.dumps(header, separators=(",", ":"))]
    for scenario in scenarios:
        for receiver in scenario.receivers:
            if receiver.role == "goalkeeper":
                raise DataFormatError(
                    f"receiver {receiver.id!r} is a goalkeeper; not representable")
        out.append(json.dumps(scenario_to_record(scenario), separators=(",", ":")))
    Path(path).write_text("\n".join(out) + "\n", encoding="utf-8")


# ---------------------------------------------------------------------------
# Value-map files

def read_value_map(path: str | Path) -> ValueMap:
    """Parse the "width height" header line plus height rows of width floats."""
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    rows = [(i + 1, line) for i, line in enumerate(lines) if line.strip()]
    if not rows:
        raise DataFormatError("empty map file")
    lineno, header = rows[0]
    parts = header.split()
    if len(parts) != 2:
        raise DataFormatError("header must be 'width height'", line=lineno)
    try:
        width, height = int(parts[0]), int(parts[1])
    except ValueError:
        raise DataFormatError("header must be 'width height'", line=lineno) from None
    if width < 1 or height < 1:
        raise DataFormatError("map dimensions must be positive", line=lineno)
    if len(rows) - 1 != height:
        raise DataFormatError(f"expected {height} data rows, found {len(rows) - 1}")
    values = np.empty((height, width), dtype=float)
    for r, (lineno, line) in enumerate(rows[1:]):
        tokens = line.split()
        if len(tokens) != width:
            raise DataFormatError(f"expected {width} values, found {len(tokens)}",
                                  line=lineno)
        try:
            row = [float(t) for t in tokens]
        except ValueError:
            raise DataFormatError("not a number", line=lineno) from None
        if not all(math.isfinite(v) for v in row):
            raise DataFormatError("values must be finite", line=lineno)
        values[r] = row
    return ValueMap(width, height, values)


def write_value_map(path: str | Path, vmap: ValueMap) -> None:
    lines = [f"{vmap.width} {vmap.height}"]
    for r in range(vmap.height):
        lines.append(" ".join(repr(float(v)) for v in vmap.values[r]))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


# ---------------------------------------------------------------------------
# Synthetic scenarios

SYNTH_FIELD = FieldSpec(105.0, 68.0, "+x")


@dataclass(frozen=True)
class SynthConfig:
    """Knobs for the generator. ``pressure`` in [0, 1] pulls defenders toward
    offensive players; ``planted_best`` makes the model's own top pick the
    ground truth (and the pass successful)."""

    count: int = 100
    seed: int = 0
    pressure: float = 0.5
    orientation_noise: float = 10.0  # degrees, std of facing jitter
    planted_best: bool = False
    temperature: float = 0.08        # softmax temperature for sampled ground truth

    def __post_init__(self) -> None:
        if self.count < 1:
            raise DataFormatError("count must be >= 1")
        if not (0.0 <= self.pressure <= 1.0):
            raise DataFormatError("pressure must be in [0, 1]")
        if self.orientation_noise < 0.0:
            raise DataFormatError("orientation_noise must be >= 0")
        if self.temperature <= 0.0:
            raise DataFormatError("temperature must be positive")


def generate_synthetic(config: SynthConfig,
                       params: ModelParams = DEFAULT_PARAMS) -> list[Scenario]:
    """Deterministic corpus: three offensive rows (defender/midfielder/forward)
    against three defensive rows plus a goalkeeper, jittered per event."""
    rng = np.random.default_rng(config.seed)
    return [_one_event(rng, config, params) for _ in range(config.count)]


def _clip(value: float, lo: float, hi: float) -> float:
    return min(hi, max(lo, value))


def _one_event(rng: np.random.Generator, config: SynthConfig,
               params: ModelParams) -> Scenario:
    field = SYNTH_FIELD
    anchor = rng.uniform(30.0, 56.0)
    gap = rng.uniform(8.0, 13.0)
    row_ys = (16.0, 34.0, 52.0)

    offense: list[tuple[str, float, float, str]] = []
    for row, (dx, role) in enumerate(((-1.0, "defender"), (0.6, "midfielder"),
                                      (1.9, "forward"))):
        for slot in range(3):
            x = anchor + dx * gap + rng.normal(0.0, 2.0)
            y = row_ys[slot] + rng.normal(0.0, 3.5)
            offense.append((f"o{3 * row + slot + 1}",
                            _clip(x, 2.0, 103.0), _clip(y, 2.0, 66.0), role))

    defense: list[tuple[str, float, float, str]] = []
    for row in range(3):
        for slot in range(3):
            x = anchor + row * gap + rng.normal(0.0, 1.5)
            y = row_ys[slot] + rng.normal(0.0, 2.5)
            if rng.random() < 0.8 * config.pressure:
                target = offense[int(rng.integers(0, len(offense)))]
                pull = config.pressure * rng.uniform(0.2, 0.5)
                x += (target[1] - x) * pull
                y += (target[2] - y) * pull
            defense.append((f"d{3 * row + slot + 1}",
                            _clip(x, 2.0, 103.0), _clip(y, 2.0, 66.0), "defender"))
    defense.append(("dgk", _clip(102.0 + rng.normal(0.0, 1.0), 95.0, 104.0),
                    _clip(34.0 + rng.normal(0.0, 4.0), 10.0, 58.0), "goalkeeper"))

    # nudge apart any coincident pair so bearings stay well-defined
    placed = offense + defense
    for i in range(len(placed)):
        for j in range(i):
            if (abs(placed[i][1] - placed[j][1]) < 0.05
                    and abs(placed[i][2] - placed[j][2]) < 0.05):
                pid, x, y, role = placed[i]
                placed[i] = (pid, _clip(x + 0.61, 2.0, 103.0),
                             _clip(y + 0.43, 2.0, 66.0), role)
    offense, defense = placed[:9], placed[9:]

    passer_idx = int(rng.integers(0, 9))
    receiver_rows = [p for i, p in enumerate(offense) if i != passer_idx]
    passer_row = offense[passer_idx]

    target = receiver_rows[int(rng.integers(0, len(receiver_rows)))]
    passer_orientation = wrap_degrees(_bearing(passer_row, target)
                                      + rng.normal(0.0, config.orientation_noise))
    receiver_orientations = []
    for row in receiver_rows:
        if rng.random() < 0.75:
            angle = _bearing(row, passer_row) + rng.normal(0.0, 1.5 * config.orientation_noise)
        else:
            angle = rng.uniform(0.0, 360.0)
        receiver_orientations.append(wrap_degrees(angle))

    passer = PlayerState(passer_row[0], Point2(passer_row[1], passer_row[2]),
                         float(passer_orientation), passer_row[3])
    receivers = tuple(
        PlayerState(row[0], Point2(row[1], row[2]), float(angle), row[3])
        for row, angle in zip(receiver_rows, receiver_orientations))
    defenders = tuple(PlayerState(pid, Point2(x, y), None, role)
                      for pid, x, y, role in defense)

    base = Scenario(field, passer, receivers, defenders)
    evaluation = evaluate_scenario(base, params, mode="combined")
    if config.planted_best:
        ground_truth = evaluation.best
        success = True
    else:
        scores = np.array([b.combined for b in evaluation.breakdowns])
        logits = scores / config.temperature
        probs = np.exp(logits - logits.max())
        probs /= probs.sum()
        ids = [b.receiver_id for b in evaluation.breakdowns]
        ground_truth = str(rng.choice(np.array(ids), p=probs))
        top = float(scores.max())
        chosen = float(scores[ids.index(ground_truth)])
        success = bool(rng.random() < 0.25 + 0.65 * (chosen / top if top > 0 else 1.0))
    return Scenario(field, passer, receivers, defenders, ground_truth, success)


def _bearing(a: tuple[str, float, float, str], b: tuple[str, float, float, str]) -> float:
    return wrap_degrees(math.degrees(math.atan2(b[2] - a[2], b[1] - a[1])))
