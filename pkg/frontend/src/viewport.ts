/** Mirror of the engine's viewport mapping: the projection bounding box is
 * scaled uniformly into the margin-inset canvas rectangle and centered, so
 * cursor pixels convert back to projection coordinates with the inverse. */

import type { Point } from "./types.js";

export interface ViewTransform {
  scale: number;
  tx: number;
  ty: number;
}

export function fitViewport(
  points: Point[],
  width: number,
  height: number,
  margin: number,
): ViewTransform {
  const availW = width - 2 * margin;
  const availH = height - 2 * margin;
  if (availW <= 0 || availH <= 0) throw new Error("viewport smaller than twice the margin");
  if (points.length === 0) return { scale: 1, tx: margin + availW / 2, ty: margin + availH / 2 };
  let minX = Infinity;
  let minY = Infinity;
  let maxX = -Infinity;
  let maxY = -Infinity;
  for (const [x, y] of points) {
    minX = Math.min(minX, x);
    minY = Math.min(minY, y);
    maxX = Math.max(maxX, x);
    maxY = Math.max(maxY, y);
  }
  const extX = maxX - minX;
  const extY = maxY - minY;
  const factors: number[] = [];
  if (extX > 0) factors.push(availW / extX);
  if (extY > 0) factors.push(availH / extY);
  const scale = factors.length ? Math.min(...factors) : 1;
  return {
    scale,
    tx: margin + (availW - scale * extX) / 2 - scale * minX,
    ty: margin + (availH - scale * extY) / 2 - scale * minY,
  };
}

export function toScreen(t: ViewTransform, p: Point): Point {
  return [p[0] * t.scale + t.tx, p[1] * t.scale + t.ty];
}

export function toData(t: ViewTransform, p: Point): Point {
  return [(p[0] - t.tx) / t.scale, (p[1] - t.ty) / t.scale];
}
