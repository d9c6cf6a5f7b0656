/** Hit testing for Point mode, mirroring the engine's rules exactly:
 * nearest object within the threshold wins, distance ties go to the lowest
 * row id, anything farther is a miss. The panel then shows the server's
 * attribute-value pairs for the hit object. */

import type { Point } from "./types.js";

export function hitTest(
  points: Point[],
  rowIds: number[],
  cursor: Point,
  threshold: number,
): number | null {
  let best = Infinity;
  for (const [x, y] of points) {
    const d = Math.hypot(x - cursor[0], y - cursor[1]);
    if (d < best) best = d;
  }
  if (best > threshold || !isFinite(best)) return null;
  let winner: number | null = null;
  points.forEach(([x, y], i) => {
    if (Math.hypot(x - cursor[0], y - cursor[1]) === best) {
      if (winner === null || rowIds[i] < winner) winner = rowIds[i];
    }
  });
  return winner;
}
