/** Page wiring: builds the DOM, binds events to the ExplorerApp state
 * machine and repaints canvases on every state change. */

import { ApiClient, ApiError } from "./api.js";
import { ExplorerApp } from "./app.js";
import { paintBars, paintPie, type PieSlice } from "./charts.js";
import { PALETTE } from "./colors.js";
import { cellToText, classPatch, metadataPatch, textToCell } from "./grid.js";
import { paintMask, paintScene, paintStroke } from "./render.js";
import type { Point } from "./types.js";

const apiBase =
  new URLSearchParams(window.location.search).get("api") ?? "http://127.0.0.1:8000";
const app = new ExplorerApp(new ApiClient(apiBase));

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  ...children: (HTMLElement | string)[]
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) node.setAttribute(key, value);
  for (const child of children) node.append(child);
  return node;
}

function button(label: string, onClick: () => void, cls = ""): HTMLButtonElement {
  const b = el("button", cls ? { class: cls } : {}, label);
  b.addEventListener("click", onClick);
  return b;
}

async function guard(action: () => Promise<void>): Promise<void> {
  try {
    await action();
  } catch (exc) {
    statusBar.textContent = exc instanceof ApiError ? `error ${exc.status}: ${exc.message}` : String(exc);
  }
}

// --------------------------------------------------------------------------
// layout
// --------------------------------------------------------------------------

const statusBar = el("div", { id: "status" }, "no session");

const namesInput = el("input", { placeholder: "heart.names", value: "heart.names" });
const dataInput = el("input", { placeholder: "heart.data", value: "heart.data" });
const loadButton = button("Load", () =>
  guard(async () => {
    await app.load({ names_path: namesInput.value, data_path: dataInput.value });
  }),
);

const projectButton = button("FastMap", () => guard(() => app.project()), "primary");
const pointModeButton = button("Point", () => app.setMode("point"));
const selectModeButton = button("Select", () => app.setMode("select"));
const cropButton = button("Crop", () => guard(() => app.crop()));
const deleteButton = button("Delete", () => guard(() => app.deleteSelected()));
const exportButton = button("Save...", () =>
  guard(async () => {
    if (!app.sessionId) return;
    const api = new ApiClient(apiBase);
    const out = await api.exportDataset(app.sessionId, "data_names");
    for (const [suffix, content] of Object.entries(out.files)) {
      const link = el("a", {
        href: URL.createObjectURL(new Blob([content], { type: "text/plain" })),
        download: `extract${suffix}`,
      });
      link.click();
    }
  }),
);

const toolbar = el(
  "header",
  { id: "toolbar" },
  namesInput,
  dataInput,
  loadButton,
  projectButton,
  pointModeButton,
  selectModeButton,
  cropButton,
  deleteButton,
  exportButton,
);

const tabNames = ["Data", "Metadata", "Visualization", "Statistics"] as const;
type TabName = (typeof tabNames)[number];
let activeTab: TabName = "Visualization";
const tabBar = el("nav", { id: "tabs" });
const tabButtons = new Map<TabName, HTMLButtonElement>();
for (const name of tabNames) {
  const b = button(name, () => {
    activeTab = name;
    if (name === "Statistics") void guard(() => app.refreshStats());
    repaint();
  });
  tabButtons.set(name, b);
  tabBar.append(b);
}

const dataPane = el("section", { id: "data-pane", class: "pane" });
const metaPane = el("section", { id: "meta-pane", class: "pane" });
const vizPane = el("section", { id: "viz-pane", class: "pane" });
const statsPane = el("section", { id: "stats-pane", class: "pane" });

// visualization pane pieces
const canvas = el("canvas", { width: "800", height: "560", id: "scene" });
const maskCanvas = el("canvas", { width: "160", height: "112", id: "mask" });
const legendBox = el("div", { id: "legend" });
const hoverBox = el("div", { id: "hover" }, "Point mode: move the cursor near an object.");
const optionsBox = el("div", { id: "options" });
vizPane.append(
  el("div", { class: "viz-row" }, canvas, el("aside", {}, legendBox, hoverBox, el("h4", {}, "Selection mask"), maskCanvas)),
  optionsBox,
);

const root = el("main", {}, toolbar, tabBar, dataPane, metaPane, vizPane, statsPane, statusBar);
document.body.append(root);

// --------------------------------------------------------------------------
// options panel
// --------------------------------------------------------------------------

function numberField(
  label: string,
  value: number,
  onChange: (v: number) => void,
  step = "1",
): HTMLElement {
  const input = el("input", { type: "number", value: String(value), step });
  input.addEventListener("change", () => onChange(Number(input.value)));
  return el("label", {}, `${label} `, input);
}

function selectField(label: string, value: string, choices: string[], onChange: (v: string) => void): HTMLElement {
  const select = el("select");
  for (const choice of choices) {
    const option = el("option", { value: choice }, choice);
    if (choice === value) option.setAttribute("selected", "selected");
    select.append(option);
  }
  select.addEventListener("change", () => onChange(select.value));
  return el("label", {}, `${label} `, select);
}

function rebuildOptions(): void {
  optionsBox.replaceChildren(
    el("h4", {}, "Display"),
    numberField("object radius", app.render.pointRadius, (v) => app.setRenderOption("pointRadius", v)),
    numberField("alpha blending", app.render.alpha, (v) => app.setRenderOption("alpha", v), "0.05"),
    el("h4", {}, "Algorithm (applies on FastMap)"),
    numberField("dimensions k", app.algorithm.k, (v) => app.setAlgorithmOption("k", v)),
    numberField("pivot search steps", app.algorithm.pivotIterations, (v) =>
      app.setAlgorithmOption("pivotIterations", v),
    ),
    numberField("seed", app.algorithm.seed, (v) => app.setAlgorithmOption("seed", v)),
    selectField("z-normalization", app.algorithm.znorm, ["none", "sigma", "mad"], (v) =>
      app.setAlgorithmOption("znorm", v as typeof app.algorithm.znorm),
    ),
    selectField("missing values", app.algorithm.impute, ["none", "drop", "mean", "class-mean"], (v) =>
      app.setAlgorithmOption("impute", v as typeof app.algorithm.impute),
    ),
  );
}

// --------------------------------------------------------------------------
// canvas interaction
// --------------------------------------------------------------------------

function cursorOf(event: MouseEvent): Point {
  const rect = canvas.getBoundingClientRect();
  return [event.clientX - rect.left, event.clientY - rect.top];
}

canvas.addEventListener("mousemove", (event) => {
  const cursor = cursorOf(event);
  if (app.mode === "point") void app.pointerMove(cursor);
  else if (app.lasso.drawing) app.lassoExtend(cursor);
});
canvas.addEventListener("mousedown", (event) => {
  if (app.mode === "select") app.lassoBegin(cursorOf(event));
});
window.addEventListener("mouseup", () => {
  if (app.mode === "select") void guard(() => app.lassoCommit());
});

// --------------------------------------------------------------------------
// grids
// --------------------------------------------------------------------------

function rebuildDataGrid(): void {
  dataPane.replaceChildren();
  if (!app.metadata || !app.rowsPage) {
    dataPane.append(el("p", {}, "Load a dataset first."));
    return;
  }
  const meta = app.metadata;
  const table = el("table", { class: "grid" });
  const head = el("tr", {}, el("th", {}, "id"));
  for (const attr of meta.attributes) head.append(el("th", {}, attr.name));
  head.append(el("th", {}, ""));
  table.append(head);
  for (const record of app.rowsPage.rows) {
    const tr = el("tr", {}, el("td", {}, String(record.row_id)));
    record.cells.forEach((cell, i) => {
      const attr = meta.attributes[i];
      const input = el("input", { value: cellToText(cell, attr, meta) });
      input.addEventListener("change", () => {
        const parsed = textToCell(input.value, attr, meta);
        if ("error" in parsed) {
          statusBar.textContent = parsed.error;
          return;
        }
        const cells = record.cells.slice();
        cells[i] = parsed.cell;
        void guard(() => app.putRow(record.row_id, cells));
      });
      tr.append(el("td", {}, input));
    });
    tr.append(el("td", {}, button("del", () => guard(() => app.deleteRow(record.row_id)))));
    table.append(tr);
  }
  dataPane.append(table);
}

function rebuildMetadataGrid(): void {
  metaPane.replaceChildren();
  if (!app.metadata) {
    metaPane.append(el("p", {}, "Load a dataset first."));
    return;
  }
  const meta = app.metadata;
  const classChoices = ["(none)", ...meta.attributes.filter((a) => a.kind === "nominal" && !a.skip).map((a) => a.name)];
  metaPane.append(
    selectField("class attribute", meta.class_attribute ?? "(none)", classChoices, (v) =>
      guard(() => app.patchMetadata(classPatch(v === "(none)" ? null : v))),
    ),
  );
  const table = el("table", { class: "grid" });
  table.append(
    el("tr", {}, el("th", {}, "name"), el("th", {}, "type"), el("th", {}, "domain"), el("th", {}, "skip"), el("th", {}, "description")),
  );
  for (const attr of meta.attributes) {
    const tr = el("tr", {}, el("td", {}, attr.name));
    const kind = el("select");
    for (const k of ["nominal", "continuous"]) {
      const option = el("option", { value: k }, k);
      if (k === attr.kind) option.setAttribute("selected", "selected");
      kind.append(option);
    }
    kind.addEventListener("change", () =>
      guard(() => app.patchMetadata(metadataPatch(meta, attr.name, { kind: kind.value as "nominal" | "continuous" }))),
    );
    tr.append(el("td", {}, kind));

    const domain = el("input", { value: attr.domain.join(",") });
    domain.addEventListener("change", () =>
      guard(() => app.patchMetadata(metadataPatch(meta, attr.name, { domainText: domain.value }))),
    );
    tr.append(el("td", {}, domain));

    const skip = el("input", { type: "checkbox" });
    skip.checked = attr.skip;
    skip.addEventListener("change", () =>
      guard(() => app.patchMetadata(metadataPatch(meta, attr.name, { skip: skip.checked }))),
    );
    tr.append(el("td", {}, skip));
    tr.append(el("td", {}, attr.description));
    table.append(tr);
  }
  metaPane.append(table);
}

// --------------------------------------------------------------------------
// statistics pane
// --------------------------------------------------------------------------

function rebuildStats(): void {
  statsPane.replaceChildren();
  if (!app.stats) {
    statsPane.append(el("p", {}, "Open this tab after loading (and ideally projecting) a dataset."));
    return;
  }
  const stats = app.stats;
  if (stats.clusters) {
    const labels = stats.clusters.clusters.map((c) => c.label);
    const colors = labels.map((_, i) => PALETTE[i % PALETTE.length]);
    const row = el("div", { class: "charts-row" });
    const pies: [string, (PieSlice | null)[]][] = [
      ["Cluster diameters before", stats.clusters.clusters.map((c, i) =>
        c.diameter_base === null ? null : { label: c.label, value: c.diameter_base, color: colors[i] })],
      ["Cluster diameters after FastMap", stats.clusters.clusters.map((c, i) =>
        c.diameter_projected === null ? null : { label: c.label, value: c.diameter_projected, color: colors[i] })],
    ];
    for (const [title, maybeSlices] of pies) {
      const slices = maybeSlices.filter((s): s is PieSlice => s !== null);
      if (slices.length === 0) continue;
      const block = el("div", {}, el("h4", {}, title));
      const pie = el("canvas", { width: "220", height: "220" });
      paintPie(pie.getContext("2d")!, slices, 110, 110, 100);
      block.append(pie);
      for (const s of slices) {
        block.append(
          el("div", { class: "legend-entry" },
            el("span", { class: "swatch", style: `background:${s.color}` }),
            `${s.label}: D=${s.value.toFixed(2)}`),
        );
      }
      row.append(block);
    }
    const weighted = el("div", {});
    if (stats.clusters.weighted_base) {
      weighted.append(el("p", {}, `weighted D before: ${stats.clusters.weighted_base.diameter.toFixed(2)}`));
    }
    if (stats.clusters.weighted_projected) {
      weighted.append(el("p", {}, `weighted D after: ${stats.clusters.weighted_projected.diameter.toFixed(2)}`));
    }
    statsPane.append(row, weighted);
  } else if (stats.note) {
    statsPane.append(el("p", {}, stats.note));
  }

  const continuous = stats.attributes.filter((a) => a.kind === "continuous" && a.mean !== null);
  if (continuous.length > 0) {
    statsPane.append(el("h4", {}, "Continuous attributes: mean and standard deviation"));
    const bars = el("canvas", { width: "640", height: "220" });
    paintBars(
      bars.getContext("2d")!,
      continuous.map((a) => ({ label: a.name, mean: a.mean ?? 0, std: a.std_population ?? 0 })),
      640,
      220,
    );
    statsPane.append(bars, el("p", {}, continuous.map((a) => a.name).join(" | ")));
  }

  for (const attr of stats.attributes) {
    if (attr.kind !== "nominal" || !attr.histogram) continue;
    const entries = Object.entries(attr.histogram).filter(([, count]) => count > 0);
    if (entries.length === 0) continue;
    const block = el("div", {}, el("h4", {}, `${attr.name} value counts`));
    const pie = el("canvas", { width: "160", height: "160" });
    paintPie(
      pie.getContext("2d")!,
      entries.map(([token, count], i) => ({ label: token, value: count, color: PALETTE[i % PALETTE.length] })),
      80,
      80,
      70,
    );
    block.append(pie);
    block.append(el("div", {}, entries.map(([token, count]) => `${token}: ${count}`).join(", ")));
    statsPane.append(block);
  }
}

// --------------------------------------------------------------------------
// repaint
// --------------------------------------------------------------------------

function repaint(): void {
  for (const [name, b] of tabButtons) b.classList.toggle("active", name === activeTab);
  dataPane.style.display = activeTab === "Data" ? "block" : "none";
  metaPane.style.display = activeTab === "Metadata" ? "block" : "none";
  vizPane.style.display = activeTab === "Visualization" ? "block" : "none";
  statsPane.style.display = activeTab === "Statistics" ? "block" : "none";
  pointModeButton.classList.toggle("active", app.mode === "point");
  selectModeButton.classList.toggle("active", app.mode === "select");
  statusBar.textContent = app.status + (app.needsReproject ? " - options changed, run FastMap" : "");

  if (activeTab === "Data") rebuildDataGrid();
  if (activeTab === "Metadata") rebuildMetadataGrid();
  if (activeTab === "Statistics") rebuildStats();

  const ctx = canvas.getContext("2d")!;
  const scene = app.currentScene();
  if (scene) {
    paintScene(ctx, scene, canvas.width, canvas.height);
    if (app.lasso.drawing) paintStroke(ctx, app.lasso.stroke, scene.transform);
    paintMask(
      maskCanvas.getContext("2d")!,
      app.lasso.maskPolygons,
      scene.transform,
      [canvas.width, canvas.height],
      [maskCanvas.width, maskCanvas.height],
    );
    legendBox.replaceChildren(
      el("h4", {}, "Legend"),
      ...scene.legend.map((entry) =>
        el("div", { class: "legend-entry" },
          el("span", { class: "swatch", style: `background:${entry.color}` }),
          entry.token),
      ),
    );
  } else {
    ctx.clearRect(0, 0, canvas.width, canvas.height);
    ctx.fillStyle = "#f7f7f7";
    ctx.fillRect(0, 0, canvas.width, canvas.height);
    ctx.fillStyle = "#555555";
    ctx.fillText("Load a dataset and press FastMap.", 20, 30);
  }

  if (app.hover.details) {
    hoverBox.replaceChildren(
      el("h4", {}, `Object ${app.hover.details.row_id}`),
      ...app.hover.details.values.map((pair) =>
        el("div", { class: "pair" }, el("b", {}, pair.attribute), `: ${pair.value}`),
      ),
    );
  } else if (app.hover.error) {
    hoverBox.replaceChildren(el("p", { class: "error" }, app.hover.error));
  } else if (app.mode === "point") {
    hoverBox.replaceChildren(el("p", {}, "Point mode: move the cursor near an object."));
  } else {
    hoverBox.replaceChildren(el("p", {}, "Select mode: draw closed curves; Crop keeps, Delete removes."));
  }
}

app.onChange(repaint);
rebuildOptions();
app.onChange(() => {
  // options inputs only need rebuilding when values change elsewhere
  if (!optionsBox.matches(":focus-within")) rebuildOptions();
});
repaint();
