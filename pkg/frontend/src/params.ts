/** Parameter panel state with validation mirrored from the shared bounds. */

import boundsJson from "./bounds.json" assert { type: "json" };
import type { GenerateRequestDoc, GlobalParamsDoc, TrackParamsDoc } from "./api.js";
import type { SelectionModel } from "./selection.js";

interface Range {
  min: number;
  max?: number;
  default?: number;
}

export const BOUNDS = boundsJson as unknown as {
  temperature: Range;
  polyphony_hard_limit: Range;
  percentage: Range;
  model_dim: Range;
  tracks_per_step: Range;
  bars_per_step: Range;
  max_steps: Range;
  tempo: Range;
  note_density: Range;
  polyphony_range: Range;
  duration_scale: string[];
  gm_program: Range;
  instrument_group: Range;
  batch_size: Range;
};

export interface FieldError {
  field: string;
  message: string;
}

function checkRange(field: string, value: number, range: Range, errors: FieldError[]): void {
  if (Number.isNaN(value)) {
    errors.push({ field, message: `${field} is not a number` });
    return;
  }
  const max = range.max;
  if (value < range.min || (max !== undefined && value > max)) {
    const upper = max !== undefined ? `${max}` : "∞";
    errors.push({ field, message: `${field} must be within [${range.min}, ${upper}]` });
  }
}

export function defaultGlobalParams(): GlobalParamsDoc {
  return {
    temperature: 1.0,
    polyphony_hard_limit: BOUNDS.polyphony_hard_limit.max ?? 6,
    percentage: 100,
    model_dim: BOUNDS.model_dim.default ?? 4,
    tracks_per_step: BOUNDS.tracks_per_step.default ?? 4,
    bars_per_step: BOUNDS.bars_per_step.default ?? 2,
    max_steps: BOUNDS.max_steps.default ?? 0,
    tempo: BOUNDS.tempo.default ?? 120,
  };
}

export function defaultTrackParams(): TrackParamsDoc {
  return {
    note_density: 0,
    polyphony_min: BOUNDS.polyphony_range.min,
    polyphony_max: BOUNDS.polyphony_range.max ?? 6,
    duration_min: "any",
    duration_max: "any",
  };
}

export function validateGlobalParams(params: GlobalParamsDoc): FieldError[] {
  const errors: FieldError[] = [];
  checkRange("temperature", params.temperature, BOUNDS.temperature, errors);
  checkRange("polyphony_hard_limit", params.polyphony_hard_limit, BOUNDS.polyphony_hard_limit, errors);
  checkRange("percentage", params.percentage, BOUNDS.percentage, errors);
  checkRange("model_dim", params.model_dim, BOUNDS.model_dim, errors);
  checkRange("tracks_per_step", params.tracks_per_step, BOUNDS.tracks_per_step, errors);
  checkRange("bars_per_step", params.bars_per_step, BOUNDS.bars_per_step, errors);
  checkRange("max_steps", params.max_steps, BOUNDS.max_steps, errors);
  checkRange("tempo", params.tempo, BOUNDS.tempo, errors);
  if (params.bars_per_step > params.model_dim) {
    errors.push({
      field: "bars_per_step",
      message: `bars_per_step ${params.bars_per_step} exceeds model_dim ${params.model_dim}`,
    });
  }
  return errors;
}

export function validateTrackParams(params: TrackParamsDoc): FieldError[] {
  const errors: FieldError[] = [];
  checkRange("note_density", params.note_density, BOUNDS.note_density, errors);
  checkRange("polyphony_min", params.polyphony_min, BOUNDS.polyphony_range, errors);
  checkRange("polyphony_max", params.polyphony_max, BOUNDS.polyphony_range, errors);
  if (params.polyphony_min > params.polyphony_max) {
    errors.push({ field: "polyphony_min", message: "polyphony_min exceeds polyphony_max" });
  }
  const scale = BOUNDS.duration_scale;
  for (const side of ["duration_min", "duration_max"] as const) {
    if (!scale.includes(params[side])) {
      errors.push({ field: side, message: `${side} must be one of ${scale.join(", ")}` });
    }
  }
  const lo = scale.indexOf(params.duration_min);
  const hi = scale.indexOf(params.duration_max);
  if (lo > 0 && hi > 0 && lo > hi) {
    errors.push({ field: "duration_min", message: "duration range is inverted" });
  }
  if (params.program != null) checkRange("program", params.program, BOUNDS.gm_program, errors);
  if (params.group != null) checkRange("group", params.group, BOUNDS.instrument_group, errors);
  if (params.program != null && params.group != null) {
    errors.push({ field: "program", message: "choose a program or a group, not both" });
  }
  return errors;
}

export function validateBatchSize(batchSize: number): FieldError[] {
  const errors: FieldError[] = [];
  checkRange("batch_size", batchSize, BOUNDS.batch_size, errors);
  if (!Number.isInteger(batchSize)) {
    errors.push({ field: "batch_size", message: "batch_size must be an integer" });
  }
  return errors;
}

export interface PanelState {
  globalParams: GlobalParamsDoc;
  perTrack: Map<number, TrackParamsDoc>;
  batchSize: number;
  seed: number;
}

export function freshPanelState(): PanelState {
  return {
    globalParams: defaultGlobalParams(),
    perTrack: new Map(),
    batchSize: 5,
    seed: Math.floor(Math.random() * 2 ** 31),
  };
}

/** Validate the whole panel against a selection; [] means submit-ready. */
export function validatePanel(state: PanelState, selection: SelectionModel): FieldError[] {
  const errors: FieldError[] = [];
  if (selection.size === 0) {
    errors.push({ field: "selection", message: "select at least one bar" });
  }
  errors.push(...validateGlobalParams(state.globalParams));
  errors.push(...validateBatchSize(state.batchSize));
  for (const track of selection.selectedTracks()) {
    const params = state.perTrack.get(track) ?? defaultTrackParams();
    for (const error of validateTrackParams(params)) {
      errors.push({ field: `track ${track}: ${error.field}`, message: error.message });
    }
  }
  return errors;
}

export function buildRequest(state: PanelState, selection: SelectionModel): GenerateRequestDoc {
  const perTrack: Record<string, TrackParamsDoc> = {};
  for (const track of selection.selectedTracks()) {
    perTrack[String(track)] = state.perTrack.get(track) ?? defaultTrackParams();
  }
  return {
    selection: selection.toSelection(),
    global_params: { ...state.globalParams },
    per_track: perTrack,
    batch_size: state.batchSize,
    seed: state.seed,
  };
}
