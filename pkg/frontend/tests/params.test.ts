import { describe, expect, it } from "vitest";

import {
  BOUNDS,
  buildRequest,
  defaultGlobalParams,
  defaultTrackParams,
  freshPanelState,
  validateBatchSize,
  validateGlobalParams,
  validateTrackParams,
} from "../src/params.js";
import { SelectionModel } from "../src/selection.js";

describe("defaults", () => {
  it("match the documented model defaults", () => {
    const params = defaultGlobalParams();
    expect(params.model_dim).toBe(4);
    expect(params.tracks_per_step).toBe(4);
    expect(params.bars_per_step).toBe(2);
    expect(params.max_steps).toBe(0);
  });
});

describe("global validation", () => {
  it("accepts boundary temperatures", () => {
    expect(validateGlobalParams({ ...defaultGlobalParams(), temperature: 0.8 })).toEqual([]);
    expect(validateGlobalParams({ ...defaultGlobalParams(), temperature: 1.2 })).toEqual([]);
  });

  it("rejects out-of-range temperature with the server's bounds", () => {
    const errors = validateGlobalParams({ ...defaultGlobalParams(), temperature: 1.5 });
    expect(errors).toHaveLength(1);
    expect(errors[0].field).toBe("temperature");
    expect(errors[0].message).toContain("[0.8, 1.2]");
  });

  it("rejects bars_per_step above model_dim", () => {
    const errors = validateGlobalParams({
      ...defaultGlobalParams(),
      model_dim: 2,
      bars_per_step: 4,
    });
    expect(errors.some((e) => e.field === "bars_per_step")).toBe(true);
  });

  it("bounds come from the shared document", () => {
    expect(BOUNDS.temperature).toEqual({ min: 0.8, max: 1.2 });
    expect(BOUNDS.duration_scale[0]).toBe("any");
  });
});

describe("track validation", () => {
  it("accepts defaults", () => {
    expect(validateTrackParams(defaultTrackParams())).toEqual([]);
  });

  it("rejects inverted polyphony and duration ranges", () => {
    expect(
      validateTrackParams({ ...defaultTrackParams(), polyphony_min: 5, polyphony_max: 2 }),
    ).not.toEqual([]);
    expect(
      validateTrackParams({ ...defaultTrackParams(), duration_min: "1/2", duration_max: "1/8" }),
    ).not.toEqual([]);
  });

  it("allows any on either side of the duration range", () => {
    expect(
      validateTrackParams({ ...defaultTrackParams(), duration_min: "1/4", duration_max: "any" }),
    ).toEqual([]);
  });

  it("rejects program and group together", () => {
    expect(
      validateTrackParams({ ...defaultTrackParams(), program: 3, group: 2 }),
    ).not.toEqual([]);
  });
});

describe("batch size", () => {
  it("blocks zero", () => {
    expect(validateBatchSize(0)).not.toEqual([]);
    expect(validateBatchSize(5)).toEqual([]);
  });

  it("blocks fractions", () => {
    expect(validateBatchSize(2.5)).not.toEqual([]);
  });
});

describe("request building", () => {
  it("covers every selected track with params", () => {
    const selection = new SelectionModel(4, 4);
    selection.toggle(0, 1);
    selection.toggle(2, 3);
    const state = freshPanelState();
    state.batchSize = 5;
    const request = buildRequest(state, selection);
    expect(Object.keys(request.per_track).sort()).toEqual(["0", "2"]);
    expect(request.selection).toEqual([
      [0, 1],
      [2, 3],
    ]);
    expect(request.batch_size).toBe(5);
  });
});
