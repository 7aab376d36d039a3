/**
 * Wire types mirroring the scenario-file record schema and the HTTP facade.
 *
 * The editor never does feasibility math of its own: every number it shows
 * is copied out of one of these response payloads.
 */

export interface PlayerRecord {
  id: string;
  x: number;
  y: number;
  orientation?: number;
  role?: string;
}

export interface ScenarioRecord {
  passer: PlayerRecord;
  receivers: PlayerRecord[];
  defenders: PlayerRecord[];
  ground_truth?: string;
  success?: boolean;
}

export interface FieldBlock {
  length: number;
  width: number;
  attack_direction: "+x" | "-x";
}

export interface EvaluateRequest {
  scenario: ScenarioRecord;
  field?: FieldBlock;
  mode?: string;
}

export interface EpvRequest {
  scenario: ScenarioRecord;
  field?: FieldBlock;
  map: string;
  kind?: string;
}

export interface Breakdown {
  receiver_id: string;
  orientation: number | null;
  passer_defense: number;
  receiver_defense: number;
  defense: number;
  proximity: number;
  combined: number | null;
  proximity_defense: number;
}

export type Coord = [number, number];

/** Overlap polygons are reported in the passer-local frame (passer at the
 * origin, field axes); the renderer translates them back onto the pitch. */
export interface ReceiverGeometry {
  projected_position: Coord;
  passer_triangle: Coord[];
  receiver_triangle: Coord[];
  overlap: Coord[];
}

export interface EvaluateResponse {
  mode: string;
  breakdowns: Breakdown[];
  ranking: string[];
  best: string;
  passer_neighbors: Record<string, string[]>;
  receiver_neighbors: Record<string, string[]>;
  geometry: Record<string, ReceiverGeometry> | null;
  warnings: string[];
}

export interface EpvEntry {
  receiver_id: string;
  map_value: number;
  orientation: number;
  combined: number;
}

export interface EpvResponse {
  kind: string;
  map: string;
  entries: EpvEntry[];
  ranking: string[];
  best: string;
  warnings: string[];
}

export interface MapsResponse {
  maps: string[];
}
