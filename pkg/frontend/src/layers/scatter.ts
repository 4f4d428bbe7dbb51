/**
 * Pool scatter plot.
 *
 * Shows predicted labels by default; the truth toggle recolors the same
 * circles without touching their geometry.  Labeled points get a ring and
 * ignore clicks, the pending selection gets a halo, and user-added
 * coordinate points render as diamonds.
 */

import { labelColor } from "../colors.js";
import { PlotScale } from "../geometry.js";
import { ExtraPointView, PointView } from "../types.js";

const SVG_NS = "http://www.w3.org/2000/svg";

export interface ScatterOptions {
  showTruth: boolean;
  pendingIndex: number | null;
  onPointClick?: (index: number) => void;
}

export function renderScatter(
  group: SVGGElement,
  pool: readonly PointView[],
  extraPoints: readonly ExtraPointView[],
  scale: PlotScale,
  options: ScatterOptions,
): void {
  group.replaceChildren();
  const doc = group.ownerDocument;

  for (const point of pool) {
    const circle = doc.createElementNS(SVG_NS, "circle");
    circle.setAttribute("cx", String(scale.toPxX(point.x1)));
    circle.setAttribute("cy", String(scale.toPxY(point.x2)));
    circle.setAttribute("r", point.labeled ? "5" : "3");
    const label = options.showTruth ? point.true_label : point.predicted_label;
    circle.setAttribute("fill", labelColor(label));
    circle.setAttribute("data-index", String(point.index));
    const classes = ["point"];
    if (point.labeled) {
      classes.push("labeled");
      circle.setAttribute("stroke", "#222");
      circle.setAttribute("stroke-width", "1.5");
    } else if (point.index === options.pendingIndex) {
      classes.push("pending");
      circle.setAttribute("stroke", "#f5a623");
      circle.setAttribute("stroke-width", "3");
    }
    circle.setAttribute("class", classes.join(" "));
    if (!point.labeled && options.onPointClick) {
      const index = point.index;
      circle.addEventListener("click", (event) => {
        event.stopPropagation();
        options.onPointClick?.(index);
      });
    }
    group.appendChild(circle);
  }

  for (const extra of extraPoints) {
    const size = 5;
    const cx = scale.toPxX(extra.x1);
    const cy = scale.toPxY(extra.x2);
    const diamond = doc.createElementNS(SVG_NS, "path");
    diamond.setAttribute(
      "d",
      `M${cx},${cy - size} L${cx + size},${cy} L${cx},${cy + size} L${cx - size},${cy} Z`,
    );
    diamond.setAttribute("fill", labelColor(extra.label));
    diamond.setAttribute("stroke", "#222");
    diamond.setAttribute("stroke-width", "1.5");
    diamond.setAttribute("class", "extra-point");
    group.appendChild(diamond);
  }
}
