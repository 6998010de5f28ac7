/** Browser entry point: wires the API client, roll, panels, and playback. */

import { ApiClient, BatchDoc, PieceDoc, SessionDoc } from "./api.js";
import { browserRows } from "./batchBrowser.js";
import { DEFAULT_LAYOUT, cellAt, rollSize } from "./layout.js";
import {
  BOUNDS,
  buildRequest,
  defaultTrackParams,
  freshPanelState,
  validatePanel,
} from "./params.js";
import { PlaybackClient, WebAudioSynth } from "./playback.js";
import { drawPianoRoll, emptyState } from "./pianoRoll.js";
import { SelectionModel } from "./selection.js";

const api = new ApiClient("");
const panel = freshPanelState();

let session: SessionDoc | null = null;
let piece: PieceDoc | null = null;
let selection = new SelectionModel(0, 0);
let batch: BatchDoc | null = null;
let playback: PlaybackClient | null = null;
let threshold: number | undefined;

const $ = <T extends HTMLElement>(id: string): T => document.getElementById(id) as T;
const canvas = $("roll") as unknown as HTMLCanvasElement;
const ctx = canvas.getContext("2d")!;

function redraw(): void {
  if (!piece) {
    emptyState(ctx, canvas.width, canvas.height);
    return;
  }
  const size = rollSize(piece, DEFAULT_LAYOUT);
  canvas.width = size.width;
  canvas.height = size.height;
  drawPianoRoll(ctx, piece, selection, DEFAULT_LAYOUT);
}

function setStatus(text: string): void {
  $("status").textContent = text;
}

function refreshErrors(): void {
  const errors = piece ? validatePanel(panel, selection) : [];
  $("errors").textContent = errors.map((e) => e.message).join(" • ");
  ($("generate") as HTMLButtonElement).disabled = errors.length > 0 || !piece;
}

async function loadSession(doc: SessionDoc): Promise<void> {
  session = doc;
  piece = doc.piece;
  selection = new SelectionModel(piece.tracks.length, piece.bars.length);
  playback?.detach();
  playback = new PlaybackClient(api, doc.id, new WebAudioSynth(new AudioContext()));
  $("session-id").textContent = doc.id;
  renderTrackPanel();
  redraw();
  refreshErrors();
}

function renderTrackPanel(): void {
  const host = $("tracks");
  host.innerHTML = "";
  piece?.tracks.forEach((track, t) => {
    const row = document.createElement("div");
    row.className = "track-row";
    const name = document.createElement("input");
    name.value = track.name;
    name.title = "track name";
    name.addEventListener("change", async () => {
      if (!session) return;
      piece = await api.patchTrack(session.id, t, { name: name.value });
      redraw();
    });
    const program = document.createElement("input");
    program.type = "number";
    program.min = String(BOUNDS.gm_program.min);
    program.max = String(BOUNDS.gm_program.max);
    program.value = String(track.program);
    program.title = "GM program";
    program.addEventListener("change", async () => {
      if (!session) return;
      piece = await api.patchTrack(session.id, t, { program: Number(program.value) });
      redraw();
    });
    const density = document.createElement("input");
    density.type = "range";
    density.min = String(BOUNDS.note_density.min);
    density.max = String(BOUNDS.note_density.max ?? 10);
    density.value = String(panel.perTrack.get(t)?.note_density ?? 0);
    density.title = "note density (0 = random)";
    density.addEventListener("input", () => {
      const params = panel.perTrack.get(t) ?? defaultTrackParams();
      params.note_density = Number(density.value);
      panel.perTrack.set(t, params);
      refreshErrors();
    });
    row.append(`#${t} `, name, program, density);
    host.append(row);
  });
}

function renderBatch(): void {
  const host = $("outputs");
  host.innerHTML = "";
  if (!batch) return;
  if (batch.status !== "done") {
    host.textContent = batch.status === "failed" ? `failed: ${batch.error}` : batch.status;
    return;
  }
  for (const row of browserRows(batch, threshold)) {
    const div = document.createElement("div");
    div.className = "output-row" + (row.isBest ? " best" : "");
    const badge = document.createElement("span");
    badge.className = "badge";
    badge.textContent = row.badge;
    const distance = document.createElement("span");
    distance.textContent = row.distance.toFixed(4);
    const audition = document.createElement("button");
    audition.textContent = "▶";
    audition.addEventListener("click", () => playback?.play({ outputId: row.outputId }));
    const promote = document.createElement("button");
    promote.textContent = "promote";
    promote.addEventListener("click", async () => {
      const next = await api.promoteOutput(row.outputId);
      batch = null;
      renderBatch();
      await loadSession(next);
      setStatus(`promoted ${row.outputId} → session ${next.id}`);
    });
    const download = document.createElement("a");
    download.textContent = "midi";
    download.href = api.midiDownloadUrl("output", row.outputId);
    download.setAttribute("download", `${row.outputId}.mid`);
    div.append(badge, distance, audition, promote, download);
    host.append(div);
  }
}

function wireGlobalInputs(): void {
  const bind = (id: string, field: keyof typeof panel.globalParams, step = "1") => {
    const input = $(id) as HTMLInputElement;
    const bounds = (BOUNDS as Record<string, { min?: number; max?: number }>)[field];
    if (bounds?.min !== undefined) input.min = String(bounds.min);
    if (bounds?.max !== undefined) input.max = String(bounds.max);
    input.step = step;
    input.value = String(panel.globalParams[field]);
    input.addEventListener("input", () => {
      panel.globalParams[field] = Number(input.value);
      refreshErrors();
    });
  };
  bind("temperature", "temperature", "0.01");
  bind("polyphony-hard-limit", "polyphony_hard_limit");
  bind("percentage", "percentage");
  bind("model-dim", "model_dim");
  bind("tracks-per-step", "tracks_per_step");
  bind("bars-per-step", "bars_per_step");
  bind("max-steps", "max_steps");
  bind("tempo", "tempo");

  const batchSize = $("batch-size") as HTMLInputElement;
  batchSize.value = String(panel.batchSize);
  batchSize.addEventListener("input", () => {
    panel.batchSize = Number(batchSize.value);
    refreshErrors();
  });
  const seed = $("seed") as HTMLInputElement;
  seed.value = String(panel.seed);
  seed.addEventListener("input", () => {
    panel.seed = Number(seed.value);
  });
  const thresholdInput = $("threshold") as HTMLInputElement;
  thresholdInput.addEventListener("input", () => {
    threshold = thresholdInput.value === "" ? undefined : Number(thresholdInput.value);
    renderBatch();
  });
}

function wirePointer(): void {
  const position = (event: MouseEvent) => {
    const rect = canvas.getBoundingClientRect();
    return { x: event.clientX - rect.left, y: event.clientY - rect.top };
  };
  canvas.addEventListener("mousedown", (event) => {
    if (!piece) return;
    const { x, y } = position(event);
    const cell = cellAt(piece, x, y, DEFAULT_LAYOUT);
    if (cell) {
      selection.beginDrag(cell[0], cell[1]);
      redraw();
      refreshErrors();
    }
  });
  canvas.addEventListener("mousemove", (event) => {
    if (!piece || !selection.dragging) return;
    const { x, y } = position(event);
    const cell = cellAt(piece, x, y, DEFAULT_LAYOUT);
    if (cell) {
      selection.dragTo(cell[0], cell[1]);
      redraw();
    }
  });
  window.addEventListener("mouseup", () => {
    if (selection.dragging) {
      selection.endDrag();
      refreshErrors();
    }
  });
}

async function wireActions(): Promise<void> {
  ($("upload") as HTMLInputElement).addEventListener("change", async (event) => {
    const input = event.target as HTMLInputElement;
    const file = input.files?.[0];
    if (!file) return;
    try {
      await loadSession(await api.createSession(file, file.name));
      setStatus(`session ${session!.id}`);
    } catch (error) {
      setStatus(String(error));
    }
  });

  $("generate").addEventListener("click", async () => {
    if (!session) return;
    try {
      batch = await api.generate(session.id, buildRequest(panel, selection));
      setStatus(`batch ${batch.id} ${batch.status}`);
      renderBatch();
      batch = await api.waitForBatch(batch.id);
      setStatus(`batch ${batch.id} ${batch.status}`);
      renderBatch();
    } catch (error) {
      setStatus(String(error));
    }
  });

  $("play").addEventListener("click", () => playback?.play());
  $("stop").addEventListener("click", () => playback?.stop());
  $("export").addEventListener("click", () => {
    if (session) window.open(api.midiDownloadUrl("session", session.id));
  });
}

wireGlobalInputs();
wirePointer();
void wireActions();
redraw();
refreshErrors();
