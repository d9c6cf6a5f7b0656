/** Visualization and algorithm options, split by their consequence:
 * display options re-render the existing projection, algorithm options
 * take effect only on an explicit re-project. */

export interface RenderOptions {
  pointRadius: number;
  alpha: number;
}

export interface AlgorithmOptions {
  k: number;
  pivotIterations: number;
  seed: number;
  znorm: "none" | "sigma" | "mad";
  impute: "none" | "drop" | "mean" | "class-mean";
}

export const DEFAULT_RENDER: RenderOptions = { pointRadius: 4, alpha: 0.6 };
export const DEFAULT_ALGORITHM: AlgorithmOptions = {
  k: 2,
  pivotIterations: 5,
  seed: 42,
  znorm: "none",
  impute: "none",
};

const RENDER_KEYS = new Set(["pointRadius", "alpha"]);
const ALGORITHM_KEYS = new Set(["k", "pivotIterations", "seed", "znorm", "impute"]);

export type OptionEffect = "re-render" | "re-project";

/** What changing one option requires. Radius/alpha repaint immediately;
 * pivot iterations, normalization and friends wait for the FastMap button. */
export function effectOf(key: string): OptionEffect {
  if (RENDER_KEYS.has(key)) return "re-render";
  if (ALGORITHM_KEYS.has(key)) return "re-project";
  throw new Error(`unknown option ${key}`);
}

export function validateRender(options: RenderOptions): string | null {
  if (options.pointRadius < 1) return "point radius must be at least 1 pixel";
  if (!(options.alpha > 0 && options.alpha <= 1)) return "alpha must be in (0, 1]";
  return null;
}
