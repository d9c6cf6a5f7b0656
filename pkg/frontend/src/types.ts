/** Payload shapes of the engine's HTTP API (see API.md in the repo root). */

export type CellValue = number | string | null;

export interface AttributeMeta {
  name: string;
  kind: "nominal" | "continuous";
  domain: string[];
  skip: boolean;
  description: string;
  missing_value_override: string | null;
}

export interface Metadata {
  separator: string;
  missing_value: string;
  description: string;
  class_attribute: string | null;
  attributes: AttributeMeta[];
}

export interface RowRecord {
  row_id: number;
  cells: CellValue[];
}

export interface RowsPage {
  total: number;
  offset: number;
  rows: RowRecord[];
}

export interface ProjectionPayload {
  row_ids: number[];
  coordinates: number[][];
  pivot_ids: number[][];
  converged_axes: number;
  classes: (string | null)[] | null;
  selected: number[];
  options: { k: number; pivot_iterations: number; seed: number; epsilon: number };
}

export interface ObjectDetails {
  row_id: number;
  values: { attribute: string; value: string }[];
}

export interface AttributeSummary {
  name: string;
  kind: "nominal" | "continuous";
  count_non_missing: number;
  histogram: Record<string, number> | null;
  mean: number | null;
  std_population: number | null;
}

export interface ClusterEntry {
  label: string;
  size: number;
  singleton: boolean;
  diameter_base: number | null;
  diameter_projected: number | null;
  radius_projected: number | null;
}

export interface WeightedAggregates {
  diameter: number;
  diameter_squared: number;
  radius: number | null;
  radius_squared: number | null;
}

export interface ClusterReport {
  clusters: ClusterEntry[];
  weighted_base: WeightedAggregates | null;
  weighted_projected: WeightedAggregates | null;
  excluded_row_ids: number[];
}

export interface StatsPayload {
  attributes: AttributeSummary[];
  clusters: ClusterReport | null;
  note: string | null;
}

export interface SessionCreated {
  id: string;
  rows: number;
  row_errors: { line: number; message: string }[];
  metadata: Metadata;
}

export type Point = [number, number];
