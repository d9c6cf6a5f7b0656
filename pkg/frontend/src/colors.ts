/** Class coloring: a fixed palette assigned by the class domain order,
 * cycling when there are more classes than palette entries. Unclassified
 * data renders in a single neutral color. */

export const PALETTE = [
  "#e63946", // red
  "#1d71b8", // blue
  "#2a9d2a", // green
  "#f4a300", // amber
  "#7b3fa0", // violet
  "#0fa3a3", // teal
  "#d1495b", // rose
  "#5c6b2f", // olive
];

export const UNCLASSIFIED_COLOR = "#4a5568";

export function buildColorMap(domain: string[]): Map<string, string> {
  const map = new Map<string, string>();
  domain.forEach((token, i) => map.set(token, PALETTE[i % PALETTE.length]));
  return map;
}

export function classColor(token: string | null, colorMap: Map<string, string>): string {
  if (token === null) return UNCLASSIFIED_COLOR;
  return colorMap.get(token) ?? UNCLASSIFIED_COLOR;
}

export function hexToRgb(hex: string): [number, number, number] {
  const v = parseInt(hex.slice(1), 16);
  return [(v >> 16) & 0xff, (v >> 8) & 0xff, v & 0xff];
}
