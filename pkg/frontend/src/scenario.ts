/**
 * Editor state and the pure operations the interaction layer calls.
 *
 * Every edit returns a new state with a bumped revision; the revision is the
 * staleness token for evaluation responses. File import/export speaks the
 * scenario-file line format (header line + one JSON record per event), so an
 * exported file feeds straight into the batch tooling.
 */

import type { FieldBlock, PlayerRecord, ScenarioRecord } from "./types.js";

export type InteractionMode = "move" | "rotate" | "set-passer";

export interface EditorState {
  field: FieldBlock;
  scenario: ScenarioRecord;
  mode: InteractionMode;
  selectedMap: string | null;
  /** Bumped on every scenario edit; responses for older revisions are stale. */
  revision: number;
}

export const FILE_FORMAT = "passview-scenarios";
export const FILE_VERSION = 1;

const DEFAULT_FIELD: FieldBlock = { length: 105, width: 68, attack_direction: "+x" };

export function wrapDegrees(angle: number): number {
  const wrapped = ((angle % 360) + 360) % 360;
  return wrapped < 360 ? wrapped : 0;
}

function clonePlayer(p: PlayerRecord): PlayerRecord {
  const out: PlayerRecord = { id: p.id, x: p.x, y: p.y };
  if (p.orientation !== undefined) out.orientation = p.orientation;
  if (p.role !== undefined) out.role = p.role;
  return out;
}

function cloneScenario(s: ScenarioRecord): ScenarioRecord {
  const out: ScenarioRecord = {
    passer: clonePlayer(s.passer),
    receivers: s.receivers.map(clonePlayer),
    defenders: s.defenders.map(clonePlayer),
  };
  if (s.ground_truth !== undefined) out.ground_truth = s.ground_truth;
  if (s.success !== undefined) out.success = s.success;
  return out;
}

/** Opening position: one passer, three receivers, four defenders. */
export function demoScenario(): ScenarioRecord {
  return {
    passer: { id: "p", x: 50, y: 34, orientation: 0 },
    receivers: [
      { id: "r1", x: 70, y: 34, orientation: 180, role: "forward" },
      { id: "r2", x: 60, y: 20, orientation: 90, role: "midfielder" },
      { id: "r3", x: 58, y: 50, orientation: 200, role: "midfielder" },
    ],
    defenders: [
      { id: "d1", x: 58, y: 33, orientation: 200 },
      { id: "d2", x: 66, y: 40, orientation: 180 },
      { id: "d3", x: 63, y: 24, orientation: 150 },
      { id: "d4", x: 75, y: 30, orientation: 170 },
    ],
  };
}

export function initialState(): EditorState {
  return {
    field: { ...DEFAULT_FIELD },
    scenario: demoScenario(),
    mode: "move",
    selectedMap: null,
    revision: 0,
  };
}

export function allPlayers(s: ScenarioRecord): PlayerRecord[] {
  return [s.passer, ...s.receivers, ...s.defenders];
}

export function findPlayer(s: ScenarioRecord, id: string): PlayerRecord | null {
  return allPlayers(s).find((p) => p.id === id) ?? null;
}

function bump(state: EditorState, scenario: ScenarioRecord): EditorState {
  return { ...state, scenario, revision: state.revision + 1 };
}

export function movePlayer(state: EditorState, id: string, x: number, y: number): EditorState {
  const scenario = cloneScenario(state.scenario);
  const player = findPlayer(scenario, id);
  if (!player) throw new Error(`no player '${id}'`);
  player.x = x;
  player.y = y;
  return bump(state, scenario);
}

export function rotatePlayer(state: EditorState, id: string, orientation: number): EditorState {
  const scenario = cloneScenario(state.scenario);
  const player = findPlayer(scenario, id);
  if (!player) throw new Error(`no player '${id}'`);
  player.orientation = wrapDegrees(orientation);
  return bump(state, scenario);
}

/** Promote a receiver to passer; the old passer takes its place in the
 * receiver list, so the offensive head count never changes. */
export function setPasser(state: EditorState, id: string): EditorState {
  const scenario = cloneScenario(state.scenario);
  const index = scenario.receivers.findIndex((r) => r.id === id);
  if (index < 0) throw new Error(`'${id}' is not a receiver`);
  const promoted = scenario.receivers[index];
  scenario.receivers[index] = scenario.passer;
  scenario.passer = promoted;
  return bump(state, scenario);
}

function nextId(s: ScenarioRecord, prefix: string): string {
  const taken = new Set(allPlayers(s).map((p) => p.id));
  let n = 1;
  while (taken.has(`${prefix}${n}`)) n += 1;
  return `${prefix}${n}`;
}

export function addReceiver(state: EditorState, x: number, y: number): EditorState {
  const scenario = cloneScenario(state.scenario);
  scenario.receivers.push({ id: nextId(scenario, "r"), x, y, orientation: 0 });
  return bump(state, scenario);
}

export function addDefender(state: EditorState, x: number, y: number): EditorState {
  const scenario = cloneScenario(state.scenario);
  scenario.defenders.push({ id: nextId(scenario, "d"), x, y, orientation: 0 });
  return bump(state, scenario);
}

export function removePlayer(state: EditorState, id: string): EditorState {
  const scenario = cloneScenario(state.scenario);
  if (scenario.passer.id === id) throw new Error("cannot remove the passer");
  const receivers = scenario.receivers.filter((r) => r.id !== id);
  const defenders = scenario.defenders.filter((d) => d.id !== id);
  if (receivers.length === scenario.receivers.length
      && defenders.length === scenario.defenders.length) {
    throw new Error(`no player '${id}'`);
  }
  if (receivers.length === 0) throw new Error("at least one receiver is required");
  scenario.receivers = receivers;
  scenario.defenders = defenders;
  return bump(state, scenario);
}

// ---------------------------------------------------------------------------
// File format

/** One-event scenario file: header line plus a single record line. */
export function exportScenario(state: EditorState): string {
  const header = {
    format: FILE_FORMAT,
    version: FILE_VERSION,
    field: {
      length: state.field.length,
      width: state.field.width,
      attack_direction: state.field.attack_direction,
    },
    units: { length: "meters", angle: "degrees" },
  };
  return `${JSON.stringify(header)}\n${JSON.stringify(state.scenario)}\n`;
}

function asPlayer(raw: unknown, where: string): PlayerRecord {
  if (typeof raw !== "object" || raw === null) throw new Error(`${where}: not an object`);
  const obj = raw as Record<string, unknown>;
  if (typeof obj.id !== "string") throw new Error(`${where}: missing id`);
  if (typeof obj.x !== "number" || !Number.isFinite(obj.x)) throw new Error(`${where}: bad x`);
  if (typeof obj.y !== "number" || !Number.isFinite(obj.y)) throw new Error(`${where}: bad y`);
  const player: PlayerRecord = { id: obj.id, x: obj.x, y: obj.y };
  if (obj.orientation !== undefined) {
    const o = obj.orientation;
    if (typeof o !== "number" || !Number.isFinite(o) || o < 0 || o >= 360) {
      throw new Error(`${where}: orientation out of [0, 360)`);
    }
    player.orientation = o;
  }
  if (obj.role !== undefined) {
    if (typeof obj.role !== "string") throw new Error(`${where}: bad role`);
    player.role = obj.role;
  }
  return player;
}

/** Parse a scenario file; the editor loads its first event. */
export function importScenario(text: string, base?: EditorState): EditorState {
  const lines = text.split("\n").filter((line) => line.trim().length > 0);
  if (lines.length < 2) throw new Error("expected a header line and at least one record");

  const header = JSON.parse(lines[0]) as Record<string, unknown>;
  if (header.format !== FILE_FORMAT) throw new Error(`unknown format '${String(header.format)}'`);
  if (header.version !== FILE_VERSION) throw new Error(`unsupported version ${String(header.version)}`);
  const fieldRaw = header.field as Record<string, unknown> | undefined;
  if (!fieldRaw || typeof fieldRaw.length !== "number" || typeof fieldRaw.width !== "number"
      || (fieldRaw.attack_direction !== "+x" && fieldRaw.attack_direction !== "-x")) {
    throw new Error("bad field block in header");
  }
  const field: FieldBlock = {
    length: fieldRaw.length,
    width: fieldRaw.width,
    attack_direction: fieldRaw.attack_direction,
  };

  const record = JSON.parse(lines[1]) as Record<string, unknown>;
  if (!Array.isArray(record.receivers) || record.receivers.length === 0) {
    throw new Error("record needs at least one receiver");
  }
  if (!Array.isArray(record.defenders)) throw new Error("record needs a defenders list");
  const scenario: ScenarioRecord = {
    passer: asPlayer(record.passer, "passer"),
    receivers: record.receivers.map((r, i) => asPlayer(r, `receivers[${i}]`)),
    defenders: record.defenders.map((d, i) => asPlayer(d, `defenders[${i}]`)),
  };
  if (typeof record.ground_truth === "string") scenario.ground_truth = record.ground_truth;
  if (typeof record.success === "boolean") scenario.success = record.success;

  const ids = allPlayers(scenario).map((p) => p.id);
  if (new Set(ids).size !== ids.length) throw new Error("duplicate player ids");

  return {
    field,
    scenario,
    mode: base?.mode ?? "move",
    selectedMap: base?.selectedMap ?? null,
    revision: (base?.revision ?? 0) + 1,
  };
}
