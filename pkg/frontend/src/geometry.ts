/** Plane geometry helpers for the SVG renderers. */

export interface Pt {
  x: number;
  y: number;
}

function cross(o: Pt, a: Pt, b: Pt): number {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

/**
 * Convex hull via Andrew's monotone chain, counter-clockwise, no
 * collinear interior points.  Degenerate inputs (fewer than 3 distinct
 * points, or all collinear) return the distinct points in sorted order.
 */
export function convexHull(points: readonly Pt[]): Pt[] {
  const unique = new Map<string, Pt>();
  for (const p of points) {
    unique.set(`${p.x}:${p.y}`, p);
  }
  const pts = [...unique.values()].sort((a, b) => a.x - b.x || a.y - b.y);
  if (pts.length <= 2) return pts;

  const lower: Pt[] = [];
  for (const p of pts) {
    while (lower.length >= 2 && cross(lower[lower.length - 2], lower[lower.length - 1], p) <= 0) {
      lower.pop();
    }
    lower.push(p);
  }
  const upper: Pt[] = [];
  for (let i = pts.length - 1; i >= 0; i--) {
    const p = pts[i];
    while (upper.length >= 2 && cross(upper[upper.length - 2], upper[upper.length - 1], p) <= 0) {
      upper.pop();
    }
    upper.push(p);
  }
  lower.pop();
  upper.pop();
  const hull = lower.concat(upper);
  return hull.length >= 3 ? hull : pts;
}

/**
 * Affine map from data space to pixel space.  The y axis is flipped so
 * that larger x2 values render toward the top of the plot, matching the
 * usual mathematical orientation.
 */
export interface PlotScale {
  toPxX(x1: number): number;
  toPxY(x2: number): number;
  fromPxX(px: number): number;
  fromPxY(py: number): number;
}

export function makeScale(
  width: number,
  height: number,
  domain: { x1: [number, number]; x2: [number, number] } = {
    x1: [0, 1],
    x2: [0, 1],
  },
): PlotScale {
  const [x1lo, x1hi] = domain.x1;
  const [x2lo, x2hi] = domain.x2;
  const sx = width / (x1hi - x1lo);
  const sy = height / (x2hi - x2lo);
  return {
    toPxX: (x1) => (x1 - x1lo) * sx,
    toPxY: (x2) => height - (x2 - x2lo) * sy,
    fromPxX: (px) => px / sx + x1lo,
    fromPxY: (py) => (height - py) / sy + x2lo,
  };
}

/** SVG path string for a closed polygon, empty string for < 3 vertices. */
export function polygonPath(vertices: readonly Pt[]): string {
  if (vertices.length < 3) return "";
  const parts = vertices.map((p, i) => `${i === 0 ? "M" : "L"}${p.x},${p.y}`);
  return `${parts.join(" ")} Z`;
}
