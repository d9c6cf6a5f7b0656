import { describe, expect, it } from "vitest";

import { LassoState } from "../src/lasso.js";

function drawnStroke(state: LassoState, points: [number, number][]) {
  state.beginStroke(points[0]);
  for (const p of points.slice(1)) state.extendStroke(p);
  return state.commitStroke();
}

describe("lasso state", () => {
  it("ignores strokes outside select mode", () => {
    const state = new LassoState();
    state.beginStroke([0, 0]);
    expect(state.drawing).toBe(false);
  });

  it("closes a stroke into the mask on commit", () => {
    const state = new LassoState();
    state.mode = "select";
    const polygon = drawnStroke(state, [[0, 0], [4, 0], [4, 4]]);
    expect(polygon).toHaveLength(3);
    expect(state.maskPolygons).toHaveLength(1);
    expect(state.stroke).toHaveLength(0);
  });

  it("discards degenerate strokes without touching the mask", () => {
    const state = new LassoState();
    state.mode = "select";
    expect(drawnStroke(state, [[0, 0], [1, 1]])).toBeNull();
    expect(state.maskPolygons).toHaveLength(0);
  });

  it("accumulates strokes into a mask union", () => {
    const state = new LassoState();
    state.mode = "select";
    drawnStroke(state, [[0, 0], [2, 0], [2, 2]]);
    drawnStroke(state, [[10, 10], [12, 10], [12, 12]]);
    expect(state.maskPolygons).toHaveLength(2);
  });

  it("clears mask and stroke together", () => {
    const state = new LassoState();
    state.mode = "select";
    drawnStroke(state, [[0, 0], [2, 0], [2, 2]]);
    state.clearMask();
    expect(state.maskPolygons).toHaveLength(0);
    expect(state.drawing).toBe(false);
  });
});
