/** Scatter scene construction and canvas painting.
 *
 * buildScene is pure: it turns a projection payload plus options into
 * screen-space circles with class colors and selection outlines, so tests
 * can assert on the exact set of drawn objects. paintScene pushes a scene
 * through a 2D context using native source-over compositing (the same
 * out = alpha * src + (1 - alpha) * dst arithmetic as composite.ts).
 */

import { classColor } from "./colors.js";
import type { RenderOptions } from "./options.js";
import type { Point, ProjectionPayload } from "./types.js";
import { fitViewport, toScreen, type ViewTransform } from "./viewport.js";

export interface SceneCircle {
  rowId: number;
  x: number;
  y: number;
  radius: number;
  color: string;
  outlined: boolean;
}

export interface LegendEntry {
  token: string;
  color: string;
}

export interface Scene {
  circles: SceneCircle[];
  legend: LegendEntry[];
  alpha: number;
  transform: ViewTransform;
}

export const VIEW_MARGIN = 16;

export function buildScene(
  projection: ProjectionPayload,
  colorMap: Map<string, string>,
  options: RenderOptions,
  selection: Set<number>,
  width: number,
  height: number,
): Scene {
  const points: Point[] = projection.coordinates.map((c) => [c[0], c[1] ?? 0]);
  const transform = fitViewport(points, width, height, VIEW_MARGIN);
  const circles = projection.row_ids.map((rowId, i) => {
    const [x, y] = toScreen(transform, points[i]);
    const token = projection.classes ? projection.classes[i] : null;
    return {
      rowId,
      x,
      y,
      radius: options.pointRadius,
      color: classColor(token, colorMap),
      outlined: selection.has(rowId),
    };
  });
  const legend = [...colorMap.entries()].map(([token, color]) => ({ token, color }));
  return { circles, legend, alpha: options.alpha, transform };
}

export function paintScene(ctx: CanvasRenderingContext2D, scene: Scene, width: number, height: number): void {
  ctx.clearRect(0, 0, width, height);
  ctx.fillStyle = "#ffffff";
  ctx.fillRect(0, 0, width, height);
  ctx.globalCompositeOperation = "source-over";
  ctx.globalAlpha = scene.alpha;
  for (const c of scene.circles) {
    ctx.beginPath();
    ctx.arc(c.x, c.y, c.radius, 0, Math.PI * 2);
    ctx.fillStyle = c.color;
    ctx.fill();
  }
  ctx.globalAlpha = 1;
  ctx.strokeStyle = "#000000";
  ctx.lineWidth = 1.5;
  for (const c of scene.circles) {
    if (!c.outlined) continue;
    ctx.beginPath();
    ctx.arc(c.x, c.y, c.radius + 2, 0, Math.PI * 2);
    ctx.stroke();
  }
}

/** Black-on-white thumbnail of the accumulated selection mask. */
export function paintMask(
  ctx: CanvasRenderingContext2D,
  maskPolygons: Point[][],
  sceneTransform: ViewTransform,
  sceneSize: [number, number],
  thumbSize: [number, number],
): void {
  const [sw, sh] = sceneSize;
  const [tw, th] = thumbSize;
  ctx.fillStyle = "#ffffff";
  ctx.fillRect(0, 0, tw, th);
  ctx.fillStyle = "#000000";
  const sx = tw / sw;
  const sy = th / sh;
  for (const polygon of maskPolygons) {
    ctx.beginPath();
    polygon.forEach(([px, py], i) => {
      const [cx, cy] = toScreen(sceneTransform, [px, py]);
      if (i === 0) ctx.moveTo(cx * sx, cy * sy);
      else ctx.lineTo(cx * sx, cy * sy);
    });
    ctx.closePath();
    ctx.fill("evenodd");
  }
}

/** In-progress stroke overlay while the pointer is down. */
export function paintStroke(ctx: CanvasRenderingContext2D, stroke: Point[], transform: ViewTransform): void {
  if (stroke.length < 2) return;
  ctx.strokeStyle = "#222222";
  ctx.lineWidth = 1;
  ctx.setLineDash([4, 3]);
  ctx.beginPath();
  stroke.forEach(([px, py], i) => {
    const [cx, cy] = toScreen(transform, [px, py]);
    if (i === 0) ctx.moveTo(cx, cy);
    else ctx.lineTo(cx, cy);
  });
  ctx.closePath();
  ctx.stroke();
  ctx.setLineDash([]);
}
