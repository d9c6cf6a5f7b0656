/** Source-over alpha compositing arithmetic.
 *
 * The canvas applies this natively while drawing; the functions here exist
 * so the blending behaviour is a testable formula (a translucent circle at
 * alpha a over a background channel d yields a*s + (1-a)*d) and so the
 * mask thumbnail can be composed without a second canvas.
 */

export function sourceOverChannel(src: number, dst: number, alpha: number): number {
  return alpha * src + (1 - alpha) * dst;
}

export type Rgb = [number, number, number];

export function sourceOver(src: Rgb, dst: Rgb, alpha: number): Rgb {
  return [
    sourceOverChannel(src[0], dst[0], alpha),
    sourceOverChannel(src[1], dst[1], alpha),
    sourceOverChannel(src[2], dst[2], alpha),
  ];
}

/** Stacked translucent layers of the same color over a background. */
export function repeatedOver(src: Rgb, dst: Rgb, alpha: number, layers: number): Rgb {
  let out = dst;
  for (let i = 0; i < layers; i++) out = sourceOver(src, out, alpha);
  return out;
}
