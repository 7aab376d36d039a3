/**
 * Pure SVG/HTML string builders. No DOM access and no math beyond unit
 * conversion, so the whole rendering layer is testable in plain node.
 *
 * Field coordinates have y growing up the pitch; SVG y grows down, so every
 * point is flipped through fieldToSvg. Orientation arrows keep the field
 * convention (degrees counterclockwise from the +x goal line).
 */

import type {
  Breakdown,
  Coord,
  EpvResponse,
  EvaluateResponse,
  FieldBlock,
  ReceiverGeometry,
  ScenarioRecord,
} from "./types.js";

export const PLAYER_RADIUS = 1.3;
export const ARROW_LENGTH = 3.2;

export function esc(value: string): string {
  return value
    .replaceAll("&", "&amp;")
    .replaceAll("<", "&lt;")
    .replaceAll(">", "&gt;")
    .replaceAll('"', "&quot;")
    .replaceAll("'", "&#39;");
}

export function fieldToSvg(field: FieldBlock, x: number, y: number): Coord {
  return [x, field.width - y];
}

export function svgToField(field: FieldBlock, x: number, y: number): Coord {
  return [x, field.width - y];
}

/** "x1,y1 x2,y2 ..." for a polygon given in field coordinates, optionally
 * shifted by an offset first (overlap polygons arrive passer-relative). */
export function polygonPoints(field: FieldBlock, coords: Coord[],
                              offset: Coord = [0, 0]): string {
  return coords
    .map(([x, y]) => fieldToSvg(field, x + offset[0], y + offset[1]))
    .map(([x, y]) => `${x},${y}`)
    .join(" ");
}

export function clamp01(value: number): number {
  if (Number.isNaN(value)) return 0;
  return Math.min(1, Math.max(0, value));
}

/** Bar width in percent for a unit-interval score. */
export function barWidth(value: number | null): string {
  return `${(clamp01(value ?? 0) * 100).toFixed(2)}%`;
}

function arrow(field: FieldBlock, x: number, y: number, orientation: number | undefined,
               cls: string): string {
  if (orientation === undefined) return "";
  const rad = (orientation * Math.PI) / 180;
  const [x1, y1] = fieldToSvg(field, x, y);
  const [x2, y2] = fieldToSvg(field, x + ARROW_LENGTH * Math.cos(rad),
                              y + ARROW_LENGTH * Math.sin(rad));
  return `<line class="${cls}" x1="${x1}" y1="${y1}" x2="${x2}" y2="${y2}"/>`;
}

export function pitchMarkup(field: FieldBlock): string {
  const L = field.length;
  const W = field.width;
  const boxDepth = Math.min(16.5, L / 4);
  const boxWidth = Math.min(40.32, W * 0.6);
  const boxY = (W - boxWidth) / 2;
  const arrowY = 2.5;
  const arrowSpan = 6;
  const [ax0, ax1] = field.attack_direction === "+x"
    ? [L / 2 - arrowSpan / 2, L / 2 + arrowSpan / 2]
    : [L / 2 + arrowSpan / 2, L / 2 - arrowSpan / 2];
  const tip = field.attack_direction === "+x" ? ax1 - 1 : ax1 + 1;
  return [
    `<rect class="pitch" x="0" y="0" width="${L}" height="${W}"/>`,
    `<line class="mark" x1="${L / 2}" y1="0" x2="${L / 2}" y2="${W}"/>`,
    `<circle class="mark" cx="${L / 2}" cy="${W / 2}" r="9.15"/>`,
    `<circle class="spot" cx="${L / 2}" cy="${W / 2}" r="0.4"/>`,
    `<rect class="mark" x="0" y="${boxY}" width="${boxDepth}" height="${boxWidth}"/>`,
    `<rect class="mark" x="${L - boxDepth}" y="${boxY}" width="${boxDepth}" height="${boxWidth}"/>`,
    `<line class="attack" x1="${ax0}" y1="${arrowY}" x2="${ax1}" y2="${arrowY}"/>`,
    `<path class="attack" d="M ${tip} ${arrowY - 1} L ${ax1} ${arrowY} L ${tip} ${arrowY + 1}" fill="none"/>`,
  ].join("");
}

/** View triangles and their intersection for one receiver, translated from
 * the passer-local frame back onto the pitch. */
export function geometryMarkup(field: FieldBlock, scenario: ScenarioRecord,
                               geometry: ReceiverGeometry): string {
  const offset: Coord = [scenario.passer.x, scenario.passer.y];
  const parts = [
    `<polygon class="view-passer" points="${polygonPoints(field, geometry.passer_triangle, offset)}"/>`,
    `<polygon class="view-receiver" points="${polygonPoints(field, geometry.receiver_triangle, offset)}"/>`,
  ];
  if (geometry.overlap.length >= 3) {
    parts.push(`<polygon class="view-overlap" points="${polygonPoints(field, geometry.overlap, offset)}"/>`);
  }
  const [px, py] = fieldToSvg(field, geometry.projected_position[0] + offset[0],
                              geometry.projected_position[1] + offset[1]);
  parts.push(`<circle class="projected" cx="${px}" cy="${py}" r="0.5"/>`);
  return parts.join("");
}

function playerCircle(field: FieldBlock, p: { id: string; x: number; y: number; orientation?: number },
                      classes: string[], label: string): string {
  const [cx, cy] = fieldToSvg(field, p.x, p.y);
  const cls = classes.join(" ");
  return [
    `<g class="player-group" data-player-id="${esc(p.id)}">`,
    `<circle class="${cls}" data-player-id="${esc(p.id)}" cx="${cx}" cy="${cy}" r="${PLAYER_RADIUS}"/>`,
    arrow(field, p.x, p.y, p.orientation, "orient"),
    `<text class="label" x="${cx}" y="${cy - PLAYER_RADIUS - 0.6}">${esc(label)}</text>`,
    `</g>`,
  ].join("");
}

export function playersMarkup(field: FieldBlock, scenario: ScenarioRecord,
                              response: EvaluateResponse | null,
                              focusId: string | null,
                              selectedId: string | null): string {
  const charged = new Set(response && focusId ? response.passer_neighbors[focusId] ?? [] : []);
  const marking = new Set(response && focusId ? response.receiver_neighbors[focusId] ?? [] : []);
  const parts: string[] = [];
  for (const d of scenario.defenders) {
    const classes = ["player", "defender"];
    if (charged.has(d.id)) classes.push("pressure-passer");
    if (marking.has(d.id)) classes.push("pressure-receiver");
    if (d.id === selectedId) classes.push("selected");
    parts.push(playerCircle(field, d, classes, d.id));
  }
  for (const r of scenario.receivers) {
    const classes = ["player", "receiver"];
    if (response && response.best === r.id) classes.push("best");
    if (r.id === focusId) classes.push("focus");
    if (r.id === selectedId) classes.push("selected");
    parts.push(playerCircle(field, r, classes, r.id));
  }
  const passerClasses = ["player", "passer"];
  if (scenario.passer.id === selectedId) passerClasses.push("selected");
  parts.push(playerCircle(field, scenario.passer, passerClasses, scenario.passer.id));
  return parts.join("");
}

export function svgDocument(field: FieldBlock, inner: string): string {
  return `<svg id="pitch-svg" viewBox="0 0 ${field.length} ${field.width}" `
    + `preserveAspectRatio="xMidYMid meet">${inner}</svg>`;
}

const COMPONENT_LABELS: Array<[keyof Breakdown, string]> = [
  ["orientation", "view"],
  ["defense", "pressure"],
  ["proximity", "distance"],
];

function scoreOf(b: Breakdown, mode: string): number | null {
  switch (mode) {
    case "combined": return b.combined;
    case "proximity_defense": return b.proximity_defense;
    case "orientation": return b.orientation;
    case "defense": return b.defense;
    case "proximity": return b.proximity;
    default: return b.combined;
  }
}

/**
 * Ranked feasibility rows. data-score carries the response value verbatim
 * (String() round-trips doubles exactly), so what the page displays is
 * byte-comparable with batch CSV output.
 */
export function barsMarkup(response: EvaluateResponse, focusId: string | null): string {
  const byId = new Map(response.breakdowns.map((b) => [b.receiver_id, b]));
  const rows = response.ranking.map((id, index) => {
    const b = byId.get(id);
    if (!b) return "";
    const score = scoreOf(b, response.mode);
    const focus = id === focusId ? " focus" : "";
    const cells = COMPONENT_LABELS.map(([key, label]) => {
      const value = b[key] as number | null;
      if (value === null) return "";
      return `<div class="component"><span class="component-name">${label}</span>`
        + `<div class="track"><div class="fill fill-${key}" style="width:${barWidth(value)}"`
        + ` data-score="${String(value)}"></div></div></div>`;
    }).join("");
    const components = cells ? `<div class="components">${cells}</div>` : "";
    return `<div class="bar-row${focus}" data-receiver-id="${esc(id)}">`
      + `<div class="bar-head"><span class="rank">#${index + 1}</span>`
      + `<span class="receiver">${esc(id)}</span>`
      + `<span class="score" data-score="${score === null ? "" : String(score)}">`
      + `${score === null ? "n/a" : score.toFixed(4)}</span></div>`
      + `<div class="track main"><div class="fill fill-main" style="width:${barWidth(score)}"></div></div>`
      + components
      + `</div>`;
  });
  return rows.join("");
}

export function epvMarkup(epv: EpvResponse): string {
  const byId = new Map(epv.entries.map((e) => [e.receiver_id, e]));
  const rows = epv.ranking.map((id, index) => {
    const e = byId.get(id);
    if (!e) return "";
    return `<div class="epv-row" data-receiver-id="${esc(id)}">`
      + `<span class="rank">#${index + 1}</span>`
      + `<span class="receiver">${esc(id)}</span>`
      + `<span class="epv-value" data-score="${String(e.combined)}">${e.combined.toFixed(5)}</span>`
      + `<span class="epv-parts">${e.map_value.toFixed(4)} x ${e.orientation.toFixed(3)}</span>`
      + `</div>`;
  });
  return `<div class="epv-head">${esc(epv.kind)} x view, map '${esc(epv.map)}'</div>${rows.join("")}`;
}

export function warningsMarkup(warnings: string[]): string {
  return warnings.map((w) => `<div class="warning">${esc(w)}</div>`).join("");
}
