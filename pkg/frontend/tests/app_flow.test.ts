import { beforeEach, describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { ExplorerApp } from "../src/app.js";
import { pointInAnyPolygon } from "../src/polygon.js";
import { toScreen } from "../src/viewport.js";
import type { Metadata, Point } from "../src/types.js";

/** In-memory stand-in for the engine, speaking the same JSON protocol and
 * selection semantics. Projection is the identity over the two continuous
 * columns so expectations below are hand-checkable. */
class FakeServer {
  metadata: Metadata = {
    separator: ",",
    missing_value: "?",
    description: "two planar clusters",
    class_attribute: "kind",
    attributes: [
      { name: "x", kind: "continuous", domain: [], skip: false, description: "", missing_value_override: null },
      { name: "y", kind: "continuous", domain: [], skip: false, description: "", missing_value_override: null },
      { name: "note", kind: "nominal", domain: ["n"], skip: true, description: "", missing_value_override: null },
      { name: "kind", kind: "nominal", domain: ["a", "b"], skip: false, description: "", missing_value_override: null },
    ],
  };
  rows: { row_id: number; cells: (number | string | null)[] }[] = [
    { row_id: 0, cells: [0.0, 0.0, "n", "a"] },
    { row_id: 1, cells: [1.0, 0.0, "n", "a"] },
    { row_id: 2, cells: [0.0, 1.0, "n", "a"] },
    { row_id: 3, cells: [1.0, 1.0, "n", "a"] },
    { row_id: 4, cells: [0.5, 0.5, "n", "a"] },
    { row_id: 5, cells: [10.0, 10.0, "n", "b"] },
    { row_id: 6, cells: [11.0, 10.0, "n", "b"] },
    { row_id: 7, cells: [10.0, 11.0, "n", "b"] },
  ];
  selection = new Set<number>();
  hasProjection = false;
  selectionCalls = 0;
  projectCalls = 0;
  failProjects = false;

  private projectionPayload() {
    return {
      row_ids: this.rows.map((r) => r.row_id),
      coordinates: this.rows.map((r) => [r.cells[0], r.cells[1]]),
      pivot_ids: [[0, 0], [0, 0]],
      converged_axes: 2,
      classes: this.rows.map((r) => r.cells[3]),
      selected: [...this.selection].sort((a, b) => a - b),
      options: { k: 2, pivot_iterations: 5, seed: 42, epsilon: 1e-12 },
    };
  }

  fetch = async (url: string, init?: RequestInit): Promise<Response> => {
    const path = url.replace(/^https?:\/\/[^/]+/, "");
    const body = init?.body ? JSON.parse(String(init.body)) : null;
    const method = init?.method ?? "GET";
    const json = (payload: unknown, status = 200) =>
      new Response(JSON.stringify(payload), { status });

    if (method === "POST" && path === "/sessions") {
      return json({ id: "fake", rows: this.rows.length, row_errors: [], metadata: this.metadata });
    }
    if (path === "/sessions/fake/metadata") return json(this.metadata);
    if (path.startsWith("/sessions/fake/rows?")) {
      return json({ total: this.rows.length, offset: 0, rows: this.rows });
    }
    if (method === "POST" && path === "/sessions/fake/project") {
      if (this.failProjects) {
        return json({ detail: "need at least 2 objects to project" }, 409);
      }
      this.projectCalls += 1;
      this.hasProjection = true;
      return json(this.projectionPayload());
    }
    if (method === "POST" && path === "/sessions/fake/selection") {
      this.selectionCalls += 1;
      if (!this.hasProjection) return json({ detail: "no projection computed yet" }, 409);
      const polygons = body.polygons as Point[][];
      const hit = new Set<number>(
        this.rows
          .filter((r) => pointInAnyPolygon(r.cells[0] as number, r.cells[1] as number, polygons))
          .map((r) => r.row_id),
      );
      this.selection = body.mode === "add" ? new Set([...this.selection, ...hit]) : hit;
      return json({ selected: [...this.selection].sort((a, b) => a - b) });
    }
    if (method === "POST" && path === "/sessions/fake/crop") {
      if (this.selection.size === 0) return json({ detail: "crop needs a non-empty selection" }, 409);
      this.rows = this.rows.filter((r) => this.selection.has(r.row_id));
      this.selection = new Set();
      this.hasProjection = false;
      return json({ rows: this.rows.length, row_ids: this.rows.map((r) => r.row_id) });
    }
    if (method === "POST" && path === "/sessions/fake/delete-selected") {
      if (this.selection.size === 0) return json({ detail: "delete needs a non-empty selection" }, 409);
      this.rows = this.rows.filter((r) => !this.selection.has(r.row_id));
      this.selection = new Set();
      this.hasProjection = false;
      return json({ rows: this.rows.length, row_ids: this.rows.map((r) => r.row_id) });
    }
    const objectMatch = path.match(/^\/sessions\/fake\/object\/(\d+)$/);
    if (objectMatch) {
      const row = this.rows.find((r) => r.row_id === Number(objectMatch[1]));
      if (!row) return json({ detail: "no such row" }, 404);
      const values = this.metadata.attributes
        .map((attr, i) => ({ attr, value: row.cells[i] }))
        .filter(({ attr }) => !attr.skip)
        .map(({ attr, value }) => ({ attribute: attr.name, value: String(value) }));
      return json({ row_id: row.row_id, values });
    }
    if (path === "/sessions/fake/stats") {
      return json({ attributes: [], clusters: null, note: "fake" });
    }
    if (path === "/sessions/fake/options" && method === "PATCH") return json(body);
    return json({ detail: `unhandled ${method} ${path}` }, 500);
  };
}

function makeApp() {
  const server = new FakeServer();
  const app = new ExplorerApp(new ApiClient("http://fake", server.fetch));
  return { server, app };
}

function lassoAround(app: ExplorerApp, dataRect: [number, number, number, number]) {
  const scene = app.currentScene()!;
  const [x0, y0, x1, y1] = dataRect;
  const corners: Point[] = [
    [x0, y0],
    [x1, y0],
    [x1, y1],
    [x0, y1],
  ];
  const screen = corners.map((c) => toScreen(scene.transform, c));
  app.lassoBegin(screen[0]);
  for (const p of screen.slice(1)) app.lassoExtend(p);
  return app.lassoCommit();
}

describe("explorer application flow", () => {
  let server: FakeServer;
  let app: ExplorerApp;

  beforeEach(async () => {
    ({ server, app } = makeApp());
    await app.load({ names_path: "fake.names", data_path: "fake.data" });
  });

  it("renders nothing before a projection and everything after", async () => {
    expect(app.renderedCount()).toBe(0);
    await app.project();
    expect(app.renderedCount()).toBe(8);
    expect(app.renderedCount()).toBe(server.rows.length);
  });

  it("lasso selects exactly the objects inside the polygon", async () => {
    await app.project();
    app.setMode("select");
    await lassoAround(app, [-0.5, -0.5, 1.5, 1.5]);
    // the five cluster-a objects sit inside that rectangle, the rest outside
    expect([...app.selection].sort((a, b) => a - b)).toEqual([0, 1, 2, 3, 4]);
    expect(app.lasso.maskPolygons).toHaveLength(1);
  });

  it("second lasso in add mode unions the selection", async () => {
    await app.project();
    app.setMode("select");
    await lassoAround(app, [-0.5, -0.5, 0.2, 0.2]); // just object 0
    expect([...app.selection]).toEqual([0]);
    await lassoAround(app, [9.5, 9.5, 11.5, 11.5]); // cluster b
    expect([...app.selection].sort((a, b) => a - b)).toEqual([0, 5, 6, 7]);
  });

  it("degenerate strokes are discarded without an API call", async () => {
    await app.project();
    app.setMode("select");
    const scene = app.currentScene()!;
    app.lassoBegin(toScreen(scene.transform, [0, 0]));
    app.lassoExtend(toScreen(scene.transform, [1, 1]));
    await app.lassoCommit();
    expect(server.selectionCalls).toBe(0);
    expect(app.lasso.maskPolygons).toHaveLength(0);
  });

  it("crop reduces the rendered count to the selection size", async () => {
    await app.project();
    app.setMode("select");
    await lassoAround(app, [-0.5, -0.5, 1.5, 1.5]);
    const selected = app.selection.size;
    await app.crop();
    expect(server.rows.length).toBe(selected);
    expect(app.renderedCount()).toBe(selected);
    expect(app.selection.size).toBe(0);
    expect(app.lasso.maskPolygons).toHaveLength(0);
  });

  it("delete removes the selected objects and re-projects the rest", async () => {
    await app.project();
    app.setMode("select");
    await lassoAround(app, [9.5, 9.5, 11.5, 11.5]); // cluster b
    await app.deleteSelected();
    expect(server.rows.map((r) => r.row_id)).toEqual([0, 1, 2, 3, 4]);
    expect(app.renderedCount()).toBe(5);
  });

  it("hover shows every non-skipped attribute of the hit object", async () => {
    await app.project();
    app.setMode("point");
    const scene = app.currentScene()!;
    const target = scene.circles.find((c) => c.rowId === 5)!;
    await app.pointerMove([target.x, target.y]);
    expect(app.hover.rowId).toBe(5);
    const names = app.hover.details!.values.map((v) => v.attribute);
    expect(names).toEqual(["x", "y", "kind"]); // "note" is skipped
    const byName = Object.fromEntries(app.hover.details!.values.map((v) => [v.attribute, v.value]));
    expect(byName.kind).toBe("b");
  });

  it("hover clears in empty space", async () => {
    await app.project();
    app.setMode("point");
    await app.pointerMove([1, 1]); // margin corner, far from any circle
    expect(app.hover.rowId).toBeNull();
    expect(app.hover.details).toBeNull();
  });

  it("render option changes do not re-project, algorithm options mark stale", async () => {
    await app.project();
    const runs = server.projectCalls;
    app.setRenderOption("pointRadius", 9);
    app.setRenderOption("alpha", 0.3);
    expect(server.projectCalls).toBe(runs);
    expect(app.needsReproject).toBe(false);
    const scene = app.currentScene()!;
    expect(scene.circles[0].radius).toBe(9);
    expect(scene.alpha).toBe(0.3);

    app.setAlgorithmOption("pivotIterations", 9);
    expect(app.needsReproject).toBe(true);
    expect(server.projectCalls).toBe(runs); // still waits for the explicit run
    await app.project();
    expect(app.needsReproject).toBe(false);
  });

  it("class colors come from the domain order", async () => {
    await app.project();
    const scene = app.currentScene()!;
    const colorOf = (rowId: number) => scene.circles.find((c) => c.rowId === rowId)!.color;
    expect(colorOf(0)).toBe(scene.legend[0].color); // class "a"
    expect(colorOf(5)).toBe(scene.legend[1].color); // class "b"
    expect(scene.legend.map((e) => e.token)).toEqual(["a", "b"]);
  });

  it("selected objects are outlined in the scene", async () => {
    await app.project();
    app.setMode("select");
    await lassoAround(app, [-0.5, -0.5, 0.2, 0.2]);
    const scene = app.currentScene()!;
    expect(scene.circles.find((c) => c.rowId === 0)!.outlined).toBe(true);
    expect(scene.circles.find((c) => c.rowId === 5)!.outlined).toBe(false);
  });
});

describe("failure handling", () => {
  it("never draws a stale projection when the post-crop re-project fails", async () => {
    const server = new FakeServer();
    const app = new ExplorerApp(new ApiClient("http://fake", server.fetch));
    await app.load({ names_path: "f", data_path: "f" });
    await app.project();
    app.setMode("select");
    await lassoAround(app, [-0.5, -0.5, 0.2, 0.2]); // one object
    // force the re-project to fail like the engine does for N < 2
    server.failProjects = true;
    await expect(app.crop()).rejects.toThrow(/at least 2 objects/);
    expect(app.renderedCount()).toBe(0); // old scene gone, not stale
  });
});
