/** Client-side mirror of the server's selection geometry.
 *
 * Must classify points exactly like the engine: even-odd rule with the
 * half-open edge convention (for an axis-aligned box the left and bottom
 * edges are inside, the right and top are outside). Keeping the two
 * implementations in lockstep lets the UI preview a lasso before the
 * round-trip confirms it.
 */

import type { Point } from "./types.js";

export function pointInPolygon(x: number, y: number, points: Point[]): boolean {
  let inside = false;
  const n = points.length;
  for (let i = 0; i < n; i++) {
    const [x1, y1] = points[i];
    const [x2, y2] = points[(i + 1) % n];
    if (y1 > y !== y2 > y) {
      const t = (y - y1) / (y2 - y1);
      if (x < x1 + t * (x2 - x1)) inside = !inside;
    }
  }
  return inside;
}

export function pointInAnyPolygon(x: number, y: number, polygons: Point[][]): boolean {
  return polygons.some((poly) => pointInPolygon(x, y, poly));
}
