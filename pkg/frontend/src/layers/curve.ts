/**
 * Test-fold F1 after each labeling step, drawn as a polyline on a fixed
 * [0, 1] vertical axis so successive refreshes are visually comparable.
 */

const SVG_NS = "http://www.w3.org/2000/svg";

export interface CurveSize {
  width: number;
  height: number;
  margin: number;
}

export function renderCurve(
  svg: SVGSVGElement,
  f1History: readonly number[],
  size: CurveSize,
): void {
  svg.replaceChildren();
  const doc = svg.ownerDocument;
  const { width, height, margin } = size;
  const innerW = width - 2 * margin;
  const innerH = height - 2 * margin;
  const n = f1History.length;

  const xAt = (i: number) => margin + (n <= 1 ? 0 : (i / (n - 1)) * innerW);
  const yAt = (f1: number) => margin + (1 - Math.max(0, Math.min(1, f1))) * innerH;

  const axes = doc.createElementNS(SVG_NS, "path");
  axes.setAttribute(
    "d",
    `M${margin},${margin} L${margin},${height - margin} L${width - margin},${height - margin}`,
  );
  axes.setAttribute("stroke", "#888");
  axes.setAttribute("fill", "none");
  axes.setAttribute("class", "curve-axes");
  svg.appendChild(axes);

  if (n > 0) {
    const line = doc.createElementNS(SVG_NS, "polyline");
    line.setAttribute(
      "points",
      f1History.map((f1, i) => `${xAt(i)},${yAt(f1)}`).join(" "),
    );
    line.setAttribute("fill", "none");
    line.setAttribute("stroke", "#2ca02c");
    line.setAttribute("stroke-width", "2");
    line.setAttribute("class", "curve-line");
    svg.appendChild(line);

    const last = doc.createElementNS(SVG_NS, "circle");
    last.setAttribute("cx", String(xAt(n - 1)));
    last.setAttribute("cy", String(yAt(f1History[n - 1])));
    last.setAttribute("r", "3.5");
    last.setAttribute("fill", "#2ca02c");
    last.setAttribute("class", "curve-last");
    svg.appendChild(last);
  }

  const label = doc.createElementNS(SVG_NS, "text");
  label.setAttribute("x", String(margin));
  label.setAttribute("y", String(margin - 4));
  label.setAttribute("class", "curve-label");
  label.textContent =
    n > 0 ? `F1 ${f1History[n - 1].toFixed(4)} after ${n - 1} labels` : "F1";
  svg.appendChild(label);
}
