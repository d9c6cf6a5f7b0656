/** Conversion helpers for the data and metadata grids.
 *
 * The grids render server cells as text and turn user edits back into
 * typed JSON cells. Client-side checks mirror the engine's rules so most
 * mistakes surface before the round-trip, but the server stays the
 * authority (its 422 is displayed verbatim).
 */

import type { AttributeMeta, CellValue, Metadata } from "./types.js";

export function cellToText(value: CellValue, attr: AttributeMeta, meta: Metadata): string {
  if (value === null) return attr.missing_value_override ?? meta.missing_value;
  if (typeof value === "number") {
    return Number.isInteger(value) ? String(value) : String(value);
  }
  return value;
}

export function textToCell(
  text: string,
  attr: AttributeMeta,
  meta: Metadata,
): { cell: CellValue } | { error: string } {
  const trimmed = text.trim();
  const missingToken = attr.missing_value_override ?? meta.missing_value;
  if (trimmed === missingToken) return { cell: null };
  if (attr.kind === "continuous") {
    const value = Number(trimmed);
    if (trimmed === "" || !Number.isFinite(value)) {
      return { error: `${attr.name}: "${trimmed}" is not a number` };
    }
    return { cell: value };
  }
  if (attr.domain.length > 0 && !attr.domain.includes(trimmed)) {
    return { error: `${attr.name}: "${trimmed}" not in domain {${attr.domain.join(", ")}}` };
  }
  return { cell: trimmed };
}

export interface AttributeEdit {
  name?: string;
  kind?: "nominal" | "continuous";
  domainText?: string; // comma-separated tokens
  skip?: boolean;
  description?: string;
}

/** Build the PATCH payload for one attribute edit, leaving others intact. */
export function metadataPatch(meta: Metadata, attrName: string, edit: AttributeEdit): Partial<Metadata> {
  const attributes = meta.attributes.map((a) => {
    if (a.name !== attrName) return { ...a, domain: [...a.domain] };
    return {
      ...a,
      name: edit.name ?? a.name,
      kind: edit.kind ?? a.kind,
      domain:
        edit.domainText !== undefined
          ? edit.domainText.split(",").map((t) => t.trim()).filter((t) => t.length > 0)
          : [...a.domain],
      skip: edit.skip ?? a.skip,
      description: edit.description ?? a.description,
    };
  });
  return { attributes };
}

export function classPatch(classAttribute: string | null): Partial<Metadata> {
  return { class_attribute: classAttribute };
}
