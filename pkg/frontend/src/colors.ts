/** Shared palette.  Red is the positive class, blue the negative one. */

import { Label } from "./types.js";

export const RED = "#d62728";
export const BLUE = "#1f77b4";
export const RED_SOFT = "#f4b6b6";
export const BLUE_SOFT = "#b8d4ea";

export function labelColor(label: Label): string {
  return label === "red" ? RED : BLUE;
}

/**
 * Diverging fill for the decision surface.  `value` is the signed decision
 * score scaled to [-1, 1]; positive leans red, negative leans blue, zero is
 * white.
 */
export function surfaceColor(value: number): string {
  const t = Math.max(-1, Math.min(1, value));
  const mix = (a: number, b: number, w: number) => Math.round(a + (b - a) * w);
  if (t >= 0) {
    // white -> red
    return `rgb(${mix(255, 214, t)},${mix(255, 39, t)},${mix(255, 40, t)})`;
  }
  // white -> blue
  const w = -t;
  return `rgb(${mix(255, 31, w)},${mix(255, 119, w)},${mix(255, 180, w)})`;
}
