/** Thin typed client over the engine's session endpoints.
 *
 * Every data mutation in the app goes through this class; the UI never
 * edits its local copies directly.
 */

import type {
  CellValue,
  Metadata,
  ObjectDetails,
  Point,
  ProjectionPayload,
  RowsPage,
  SessionCreated,
  StatsPayload,
} from "./types.js";

export interface ProjectOptions {
  k?: number;
  pivot_iterations?: number;
  seed?: number;
  znorm?: "none" | "sigma" | "mad";
  impute?: "drop" | "mean" | "class-mean" | "const" | null;
  impute_constant?: string | null;
}

export class ApiError extends Error {
  constructor(readonly status: number, detail: string) {
    super(detail);
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  constructor(
    private readonly base: string,
    private readonly fetchImpl: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const init: RequestInit = { method, headers: { "Content-Type": "application/json" } };
    if (body !== undefined) init.body = JSON.stringify(body);
    const response = await this.fetchImpl(`${this.base}${path}`, init);
    const text = await response.text();
    const payload = text ? JSON.parse(text) : null;
    if (!response.ok) {
      const detail = payload && payload.detail ? String(payload.detail) : response.statusText;
      throw new ApiError(response.status, detail);
    }
    return payload as T;
  }

  createSession(body: {
    names_path?: string;
    data_path?: string;
    names_text?: string;
    data_text?: string;
  }): Promise<SessionCreated> {
    return this.request("POST", "/sessions", body);
  }

  getMetadata(id: string): Promise<Metadata> {
    return this.request("GET", `/sessions/${id}/metadata`);
  }

  patchMetadata(id: string, patch: Partial<Metadata>): Promise<Metadata> {
    return this.request("PATCH", `/sessions/${id}/metadata`, patch);
  }

  getRows(id: string, offset = 0, limit = 100): Promise<RowsPage> {
    return this.request("GET", `/sessions/${id}/rows?offset=${offset}&limit=${limit}`);
  }

  putRow(id: string, rowId: number, cells: CellValue[]): Promise<unknown> {
    return this.request("PUT", `/sessions/${id}/rows/${rowId}`, { cells });
  }

  deleteRow(id: string, rowId: number): Promise<{ rows: number }> {
    return this.request("DELETE", `/sessions/${id}/rows/${rowId}`);
  }

  project(id: string, options: ProjectOptions): Promise<ProjectionPayload> {
    return this.request("POST", `/sessions/${id}/project`, options);
  }

  getProjection(id: string): Promise<ProjectionPayload> {
    return this.request("GET", `/sessions/${id}/projection`);
  }

  select(id: string, polygons: Point[][], mode: "replace" | "add"): Promise<{ selected: number[] }> {
    return this.request("POST", `/sessions/${id}/selection`, { polygons, mode });
  }

  crop(id: string): Promise<{ rows: number; row_ids: number[] }> {
    return this.request("POST", `/sessions/${id}/crop`);
  }

  deleteSelected(id: string): Promise<{ rows: number; row_ids: number[] }> {
    return this.request("POST", `/sessions/${id}/delete-selected`);
  }

  objectDetails(id: string, rowId: number): Promise<ObjectDetails> {
    return this.request("GET", `/sessions/${id}/object/${rowId}`);
  }

  stats(id: string): Promise<StatsPayload> {
    return this.request("GET", `/sessions/${id}/stats`);
  }

  exportDataset(id: string, format: string): Promise<{ format: string; files: Record<string, string> }> {
    return this.request("POST", `/sessions/${id}/export`, { format });
  }

  getOptions(id: string): Promise<{ point_radius: number; alpha: number }> {
    return this.request("GET", `/sessions/${id}/options`);
  }

  patchOptions(id: string, patch: { point_radius?: number; alpha?: number }): Promise<unknown> {
    return this.request("PATCH", `/sessions/${id}/options`, patch);
  }
}
