/** Statistics charts drawn straight onto 2D contexts: pie charts for
 * cluster diameters and nominal histograms, grouped bars for continuous
 * mean / standard deviation. The slice/bar layout helpers are pure. */

export interface PieSlice {
  label: string;
  value: number;
  color: string;
}

export interface PieArc extends PieSlice {
  start: number; // radians
  end: number;
}

export function pieArcs(slices: PieSlice[]): PieArc[] {
  const total = slices.reduce((acc, s) => acc + s.value, 0);
  if (total <= 0) return [];
  let angle = -Math.PI / 2;
  return slices.map((s) => {
    const span = (s.value / total) * Math.PI * 2;
    const arc = { ...s, start: angle, end: angle + span };
    angle += span;
    return arc;
  });
}

export function paintPie(
  ctx: CanvasRenderingContext2D,
  slices: PieSlice[],
  cx: number,
  cy: number,
  radius: number,
): void {
  for (const arc of pieArcs(slices)) {
    ctx.beginPath();
    ctx.moveTo(cx, cy);
    ctx.arc(cx, cy, radius, arc.start, arc.end);
    ctx.closePath();
    ctx.fillStyle = arc.color;
    ctx.fill();
    ctx.strokeStyle = "#ffffff";
    ctx.stroke();
  }
}

export interface BarGroup {
  label: string;
  mean: number;
  std: number;
}

export interface BarRect {
  x: number;
  y: number;
  width: number;
  height: number;
  color: string;
}

export function barLayout(
  groups: BarGroup[],
  width: number,
  height: number,
  meanColor = "#1d71b8",
  stdColor = "#f4a300",
): BarRect[] {
  if (groups.length === 0) return [];
  const peak = Math.max(...groups.flatMap((g) => [Math.abs(g.mean), Math.abs(g.std)]), 1e-12);
  const slot = width / groups.length;
  const barWidth = Math.max(2, slot * 0.35);
  const rects: BarRect[] = [];
  groups.forEach((g, i) => {
    const meanH = (Math.abs(g.mean) / peak) * (height - 2);
    const stdH = (Math.abs(g.std) / peak) * (height - 2);
    rects.push({ x: i * slot + slot * 0.1, y: height - meanH, width: barWidth, height: meanH, color: meanColor });
    rects.push({ x: i * slot + slot * 0.55, y: height - stdH, width: barWidth, height: stdH, color: stdColor });
  });
  return rects;
}

export function paintBars(ctx: CanvasRenderingContext2D, groups: BarGroup[], width: number, height: number): void {
  ctx.clearRect(0, 0, width, height);
  for (const rect of barLayout(groups, width, height)) {
    ctx.fillStyle = rect.color;
    ctx.fillRect(rect.x, rect.y, rect.width, rect.height);
  }
}
