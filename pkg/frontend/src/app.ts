/** Application state and flows, kept free of DOM so the whole interaction
 * model is unit-testable. The page layer (main.ts) subscribes to change
 * events and repaints.
 *
 * All dataset mutations travel through the API client; local caches are
 * re-fetched afterwards, so the rendered object count always equals the
 * server's row count once a projection is back.
 */

import type { ApiClient, ProjectOptions } from "./api.js";
import { buildColorMap } from "./colors.js";
import { hitTest } from "./hover.js";
import { LassoState, type InteractionMode } from "./lasso.js";
import {
  DEFAULT_ALGORITHM,
  DEFAULT_RENDER,
  effectOf,
  validateRender,
  type AlgorithmOptions,
  type RenderOptions,
} from "./options.js";
import { buildScene, type Scene } from "./render.js";
import { toData } from "./viewport.js";
import type {
  Metadata,
  ObjectDetails,
  Point,
  ProjectionPayload,
  RowsPage,
  StatsPayload,
} from "./types.js";

export const HIT_THRESHOLD_PX = 8;

export interface HoverState {
  rowId: number | null;
  details: ObjectDetails | null;
  error: string | null;
}

export class ExplorerApp {
  sessionId: string | null = null;
  metadata: Metadata | null = null;
  rowsPage: RowsPage | null = null;
  projection: ProjectionPayload | null = null;
  selection = new Set<number>();
  lasso = new LassoState();
  render: RenderOptions = { ...DEFAULT_RENDER };
  algorithm: AlgorithmOptions = { ...DEFAULT_ALGORITHM };
  hover: HoverState = { rowId: null, details: null, error: null };
  stats: StatsPayload | null = null;
  status = "no session";
  needsReproject = false;
  sceneWidth = 800;
  sceneHeight = 560;

  private scene: Scene | null = null;
  private listeners: (() => void)[] = [];

  constructor(private readonly api: ApiClient) {}

  onChange(listener: () => void): void {
    this.listeners.push(listener);
  }

  private changed(): void {
    this.scene = null;
    for (const listener of this.listeners) listener();
  }

  get mode(): InteractionMode {
    return this.lasso.mode;
  }

  setMode(mode: InteractionMode): void {
    this.lasso.mode = mode;
    this.changed();
  }

  /** Screen-space scene for the current projection; null before one runs. */
  currentScene(): Scene | null {
    if (!this.projection || !this.metadata) return null;
    if (!this.scene) {
      const classAttr = this.metadata.attributes.find(
        (a) => a.name === this.metadata!.class_attribute,
      );
      const colorMap = buildColorMap(classAttr ? classAttr.domain : []);
      this.scene = buildScene(
        this.projection,
        colorMap,
        this.render,
        this.selection,
        this.sceneWidth,
        this.sceneHeight,
      );
    }
    return this.scene;
  }

  renderedCount(): number {
    const scene = this.currentScene();
    return scene ? scene.circles.length : 0;
  }

  // -- session lifecycle ---------------------------------------------------

  async load(body: {
    names_path?: string;
    data_path?: string;
    names_text?: string;
    data_text?: string;
  }): Promise<void> {
    const created = await this.api.createSession(body);
    this.sessionId = created.id;
    this.metadata = created.metadata;
    this.projection = null;
    this.selection = new Set();
    this.lasso.clearMask();
    this.stats = null;
    this.status =
      created.row_errors.length === 0
        ? `loaded ${created.rows} objects`
        : `loaded ${created.rows} objects (${created.row_errors.length} rejected lines)`;
    await this.refreshRows();
    this.changed();
  }

  private need(): string {
    if (this.sessionId === null) throw new Error("no session loaded");
    return this.sessionId;
  }

  async refreshRows(offset = 0, limit = 500): Promise<void> {
    this.rowsPage = await this.api.getRows(this.need(), offset, limit);
    this.changed();
  }

  async refreshMetadata(): Promise<void> {
    this.metadata = await this.api.getMetadata(this.need());
    this.changed();
  }

  async patchMetadata(patch: Partial<Metadata>): Promise<void> {
    this.metadata = await this.api.patchMetadata(this.need(), patch);
    this.projection = null; // server invalidated it; mirror that
    this.needsReproject = true;
    await this.refreshRows();
    this.changed();
  }

  async putRow(rowId: number, cells: (number | string | null)[]): Promise<void> {
    await this.api.putRow(this.need(), rowId, cells);
    this.projection = null;
    this.needsReproject = true;
    await this.refreshRows(this.rowsPage?.offset ?? 0);
    this.changed();
  }

  async deleteRow(rowId: number): Promise<void> {
    await this.api.deleteRow(this.need(), rowId);
    this.projection = null;
    this.needsReproject = true;
    await this.refreshRows(this.rowsPage?.offset ?? 0);
    this.changed();
  }

  // -- projection ----------------------------------------------------------

  async project(): Promise<void> {
    const body: ProjectOptions = {
      k: this.algorithm.k,
      pivot_iterations: this.algorithm.pivotIterations,
      seed: this.algorithm.seed,
      znorm: this.algorithm.znorm,
      impute: this.algorithm.impute === "none" ? null : this.algorithm.impute,
    };
    this.projection = await this.api.project(this.need(), body);
    this.selection = new Set(this.projection.selected);
    this.needsReproject = false;
    this.status = `projected ${this.projection.row_ids.length} objects`;
    this.changed();
  }

  // -- options -------------------------------------------------------------

  setRenderOption<K extends keyof RenderOptions>(key: K, value: RenderOptions[K]): void {
    const next = { ...this.render, [key]: value };
    const problem = validateRender(next);
    if (problem) {
      this.status = problem;
      this.changed();
      return;
    }
    this.render = next;
    if (this.sessionId) {
      void this.api
        .patchOptions(this.sessionId, { point_radius: this.render.pointRadius, alpha: this.render.alpha })
        .catch(() => undefined); // persistence is best-effort; drawing is local
    }
    if (effectOf(key) === "re-render") this.changed();
  }

  setAlgorithmOption<K extends keyof AlgorithmOptions>(key: K, value: AlgorithmOptions[K]): void {
    this.algorithm = { ...this.algorithm, [key]: value };
    if (effectOf(key) === "re-project") {
      this.needsReproject = true; // takes effect on the next explicit run
    }
    this.changed();
  }

  // -- point mode (hover) ----------------------------------------------------

  async pointerMove(screen: Point): Promise<void> {
    if (this.lasso.mode !== "point") return;
    const scene = this.currentScene();
    if (!scene || !this.projection) return;
    const points: Point[] = scene.circles.map((c) => [c.x, c.y]);
    const rowIds = scene.circles.map((c) => c.rowId);
    const hit = hitTest(points, rowIds, screen, HIT_THRESHOLD_PX + this.render.pointRadius);
    if (hit === this.hover.rowId) return;
    if (hit === null) {
      this.hover = { rowId: null, details: null, error: null };
      this.changed();
      return;
    }
    try {
      const details = await this.api.objectDetails(this.need(), hit);
      this.hover = { rowId: hit, details, error: null };
    } catch (exc) {
      this.hover = { rowId: hit, details: null, error: String(exc) };
    }
    this.changed();
  }

  // -- select mode (lasso, crop, delete) -------------------------------------

  lassoBegin(screen: Point): void {
    const scene = this.currentScene();
    if (!scene || this.lasso.mode !== "select") return;
    this.lasso.beginStroke(toData(scene.transform, screen));
  }

  lassoExtend(screen: Point): void {
    const scene = this.currentScene();
    if (!scene) return;
    this.lasso.extendStroke(toData(scene.transform, screen));
    this.changed();
  }

  /** Close the stroke; non-degenerate strokes go to the server in add mode. */
  async lassoCommit(): Promise<void> {
    const polygon = this.lasso.commitStroke();
    if (!polygon) {
      this.changed(); // degenerate stroke: discarded, no API call
      return;
    }
    const response = await this.api.select(this.need(), [polygon], "add");
    this.selection = new Set(response.selected);
    this.changed();
  }

  async crop(): Promise<void> {
    await this.api.crop(this.need());
    await this.afterSubsetChange();
  }

  async deleteSelected(): Promise<void> {
    await this.api.deleteSelected(this.need());
    await this.afterSubsetChange();
  }

  private async afterSubsetChange(): Promise<void> {
    this.projection = null; // the server invalidated it; never draw stale
    this.selection = new Set();
    this.lasso.clearMask();
    await this.refreshRows();
    await this.project(); // the next run sees only the surviving objects
  }

  // -- statistics ------------------------------------------------------------

  async refreshStats(): Promise<void> {
    this.stats = await this.api.stats(this.need());
    this.changed();
  }
}
