/**
 * Browser entry point: owns the DOM, feeds edits into the pure state ops,
 * and keeps exactly one debounced evaluation in flight. Everything testable
 * lives in scenario.ts / client.ts / render.ts; this file is glue.
 */

import { DebouncedEvaluator, ServiceClient } from "./client.js";
import {
  EditorState,
  InteractionMode,
  addDefender,
  addReceiver,
  exportScenario,
  findPlayer,
  importScenario,
  initialState,
  movePlayer,
  removePlayer,
  rotatePlayer,
  setPasser,
  wrapDegrees,
} from "./scenario.js";
import {
  barsMarkup,
  epvMarkup,
  geometryMarkup,
  pitchMarkup,
  playersMarkup,
  svgDocument,
  warningsMarkup,
} from "./render.js";
import type { EpvResponse, EvaluateRequest, EvaluateResponse } from "./types.js";

const client = new ServiceClient("");

let state: EditorState = initialState();
let lastResponse: EvaluateResponse | null = null;
let lastEpv: EpvResponse | null = null;
let focusId: string | null = null;
let selectedId: string | null = null;
let dragging: { id: string; rotate: boolean } | null = null;

const pitchHost = document.getElementById("pitch") as HTMLDivElement;
const barsHost = document.getElementById("bars") as HTMLDivElement;
const epvHost = document.getElementById("epv") as HTMLDivElement;
const warningsHost = document.getElementById("warnings") as HTMLDivElement;
const errorHost = document.getElementById("error") as HTMLDivElement;
const mapSelect = document.getElementById("map-select") as HTMLSelectElement;
const importInput = document.getElementById("import-file") as HTMLInputElement;

const pendingRevisions = new Map<number, number>();

function request(): EvaluateRequest {
  return { scenario: state.scenario, field: state.field, mode: "F" };
}

const evaluator = new DebouncedEvaluator<EvaluateRequest, EvaluateResponse>(
  (req) => client.evaluate(req),
  (response, seq) => {
    if (pendingRevisions.get(seq) !== state.revision) return;
    pendingRevisions.delete(seq);
    lastResponse = response;
    errorHost.textContent = "";
    if (focusId === null || !response.ranking.includes(focusId)) {
      focusId = response.best;
    }
    render();
    if (state.selectedMap !== null) scheduleEpv();
  },
  (error) => {
    errorHost.textContent = error.message;
  },
);

const epvEvaluator = new DebouncedEvaluator<EvaluateRequest, EpvResponse>(
  (req) => client.epvCombine({ ...req, map: state.selectedMap ?? "" }),
  (response) => {
    lastEpv = response;
    renderEpv();
  },
  (error) => {
    errorHost.textContent = error.message;
  },
);

function scheduleEvaluate(): void {
  const seq = evaluator.schedule(request());
  pendingRevisions.set(seq, state.revision);
}

function scheduleEpv(): void {
  epvEvaluator.flush(request());
}

function setState(next: EditorState): void {
  state = next;
  render();
  scheduleEvaluate();
}

// --------------------------------------------------------------- rendering

function render(): void {
  const parts = [pitchMarkup(state.field)];
  if (lastResponse?.geometry && focusId && lastResponse.geometry[focusId]) {
    parts.push(geometryMarkup(state.field, state.scenario, lastResponse.geometry[focusId]));
  }
  parts.push(playersMarkup(state.field, state.scenario, lastResponse, focusId, selectedId));
  pitchHost.innerHTML = svgDocument(state.field, parts.join(""));
  barsHost.innerHTML = lastResponse ? barsMarkup(lastResponse, focusId) : "";
  warningsHost.innerHTML = lastResponse ? warningsMarkup(lastResponse.warnings) : "";
  renderEpv();
}

function renderEpv(): void {
  epvHost.innerHTML = state.selectedMap && lastEpv ? epvMarkup(lastEpv) : "";
}

// ------------------------------------------------------------ interactions

function svgPoint(event: PointerEvent): { x: number; y: number } | null {
  const svg = pitchHost.querySelector("svg");
  if (!svg) return null;
  const ctm = svg.getScreenCTM();
  if (!ctm) return null;
  const point = new DOMPoint(event.clientX, event.clientY).matrixTransform(ctm.inverse());
  // svg y runs down the screen; field y runs up the pitch
  return { x: point.x, y: state.field.width - point.y };
}

function playerIdAt(event: Event): string | null {
  const target = event.target as Element | null;
  const holder = target?.closest("[data-player-id]");
  return holder?.getAttribute("data-player-id") ?? null;
}

pitchHost.addEventListener("pointerdown", (event) => {
  const id = playerIdAt(event);
  if (!id) {
    selectedId = null;
    render();
    return;
  }
  selectedId = id;
  if (state.mode === "set-passer") {
    if (state.scenario.receivers.some((r) => r.id === id)) {
      setState(setPasser(state, id));
    }
    return;
  }
  if (state.scenario.receivers.some((r) => r.id === id)) {
    focusId = id;
  }
  dragging = { id, rotate: state.mode === "rotate" };
  pitchHost.setPointerCapture(event.pointerId);
  render();
});

pitchHost.addEventListener("pointermove", (event) => {
  if (!dragging) return;
  const at = svgPoint(event);
  if (!at) return;
  if (dragging.rotate) {
    const player = findPlayer(state.scenario, dragging.id);
    if (!player) return;
    const angle = (Math.atan2(at.y - player.y, at.x - player.x) * 180) / Math.PI;
    setState(rotatePlayer(state, dragging.id, wrapDegrees(angle)));
  } else {
    setState(movePlayer(state, dragging.id, at.x, at.y));
  }
});

pitchHost.addEventListener("pointerup", (event) => {
  dragging = null;
  if (pitchHost.hasPointerCapture(event.pointerId)) {
    pitchHost.releasePointerCapture(event.pointerId);
  }
});

pitchHost.addEventListener("wheel", (event) => {
  if (!selectedId) return;
  const player = findPlayer(state.scenario, selectedId);
  if (!player || player.orientation === undefined) return;
  event.preventDefault();
  const step = event.deltaY > 0 ? -5 : 5;
  setState(rotatePlayer(state, selectedId, player.orientation + step));
});

document.addEventListener("keydown", (event) => {
  if (event.key !== "Delete" && event.key !== "Backspace") return;
  if (!selectedId || selectedId === state.scenario.passer.id) return;
  try {
    const id = selectedId;
    selectedId = null;
    if (focusId === id) focusId = null;
    setState(removePlayer(state, id));
  } catch (error) {
    errorHost.textContent = (error as Error).message;
  }
});

barsHost.addEventListener("click", (event) => {
  const target = event.target as Element | null;
  const row = target?.closest("[data-receiver-id]");
  const id = row?.getAttribute("data-receiver-id");
  if (id) {
    focusId = id;
    render();
  }
});

// ----------------------------------------------------------------- toolbar

for (const mode of ["move", "rotate", "set-passer"] as InteractionMode[]) {
  document.getElementById(`mode-${mode}`)?.addEventListener("click", () => {
    state = { ...state, mode };
    for (const other of ["move", "rotate", "set-passer"]) {
      document.getElementById(`mode-${other}`)?.classList.toggle("active", other === mode);
    }
  });
}

document.getElementById("add-receiver")?.addEventListener("click", () => {
  setState(addReceiver(state, state.field.length / 2, state.field.width / 2));
});

document.getElementById("add-defender")?.addEventListener("click", () => {
  setState(addDefender(state, state.field.length / 2 + 8, state.field.width / 2));
});

document.getElementById("export")?.addEventListener("click", () => {
  const blob = new Blob([exportScenario(state)], { type: "application/jsonl" });
  const link = document.createElement("a");
  link.href = URL.createObjectURL(blob);
  link.download = "scenario.jsonl";
  link.click();
  URL.revokeObjectURL(link.href);
});

importInput?.addEventListener("change", async () => {
  const file = importInput.files?.[0];
  if (!file) return;
  try {
    const next = importScenario(await file.text(), state);
    lastEpv = null;
    focusId = null;
    selectedId = null;
    setState(next);
  } catch (error) {
    errorHost.textContent = (error as Error).message;
  } finally {
    importInput.value = "";
  }
});

mapSelect?.addEventListener("change", () => {
  state = { ...state, selectedMap: mapSelect.value || null };
  lastEpv = null;
  renderEpv();
  if (state.selectedMap !== null) scheduleEpv();
});

// -------------------------------------------------------------------- boot

async function boot(): Promise<void> {
  try {
    const maps = await client.maps();
    for (const name of maps) {
      const option = document.createElement("option");
      option.value = name;
      option.textContent = name;
      mapSelect.appendChild(option);
    }
  } catch {
    // maps are optional; the editor works without them
  }
  render();
  const seq = evaluator.flush(request());
  pendingRevisions.set(seq, state.revision);
}

void boot();
