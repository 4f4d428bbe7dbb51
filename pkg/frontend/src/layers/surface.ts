/**
 * Decision-surface heatmap.
 *
 * The service sends a flat row-major grid of signed decision values over
 * [0, 1]^2 (row = x2 index, col = x1 index, axes linspace(0, 1, res)).
 * Each sample becomes one rect; values are normalized by the grid's max
 * magnitude so the diverging palette always uses its full range.
 */

import { surfaceColor } from "../colors.js";
import { PlotScale } from "../geometry.js";
import { SurfaceView } from "../types.js";

const SVG_NS = "http://www.w3.org/2000/svg";

export function renderSurface(
  group: SVGGElement,
  surface: SurfaceView,
  scale: PlotScale,
): void {
  group.replaceChildren();
  const res = surface.resolution;
  const step = 1 / (res - 1);
  let maxAbs = 0;
  for (const v of surface.values) {
    const a = Math.abs(v);
    if (a > maxAbs) maxAbs = a;
  }
  const norm = maxAbs > 0 ? maxAbs : 1;

  for (let row = 0; row < res; row++) {
    const x2 = row * step;
    for (let col = 0; col < res; col++) {
      const x1 = col * step;
      const value = surface.values[row * res + col];
      const rect = group.ownerDocument.createElementNS(SVG_NS, "rect");
      // Center each cell on its sample point; edge cells get clipped by
      // the svg viewport, which keeps the grid flush with the axes.
      const px = scale.toPxX(x1 - step / 2);
      const py = scale.toPxY(x2 + step / 2);
      rect.setAttribute("x", String(px));
      rect.setAttribute("y", String(py));
      rect.setAttribute("width", String(scale.toPxX(x1 + step / 2) - px));
      rect.setAttribute("height", String(scale.toPxY(x2 - step / 2) - py));
      rect.setAttribute("fill", surfaceColor(value / norm));
      rect.setAttribute("class", "surface-cell");
      group.appendChild(rect);
    }
  }
  group.setAttribute("data-model-version", String(surface.model_version));
  group.setAttribute("data-resolution", String(res));
}
