/** Select-mode lasso state: free strokes accumulate into a mask.
 *
 * A stroke is collected while the pointer is down, auto-closed on release
 * and added to the mask polygon list; strokes with fewer than three
 * vertices are discarded without any API traffic. The mask is the union of
 * completed strokes and is what gets rendered black-on-white as the
 * selection preview.
 */

import type { Point } from "./types.js";

export type InteractionMode = "point" | "select";

export class LassoState {
  mode: InteractionMode = "point";
  stroke: Point[] = [];
  maskPolygons: Point[][] = [];
  drawing = false;

  beginStroke(p: Point): void {
    if (this.mode !== "select") return;
    this.drawing = true;
    this.stroke = [p];
  }

  extendStroke(p: Point): void {
    if (!this.drawing) return;
    this.stroke.push(p);
  }

  /** Close the stroke and add it to the mask; returns the committed
   * polygon, or null for a degenerate stroke. */
  commitStroke(): Point[] | null {
    if (!this.drawing) return null;
    this.drawing = false;
    const polygon = this.stroke;
    this.stroke = [];
    if (polygon.length < 3) return null;
    this.maskPolygons.push(polygon);
    return polygon;
  }

  clearMask(): void {
    this.maskPolygons = [];
    this.stroke = [];
    this.drawing = false;
  }
}
