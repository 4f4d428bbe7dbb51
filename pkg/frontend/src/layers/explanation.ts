/**
 * Global explanation overlay: one convex hull per cluster in its majority
 * color, a cross marking each medoid, and a badge with the member count.
 * Cluster descriptions are attached as <title> tooltips, so hovering a
 * hull or medoid explains the region in words.
 */

import { labelColor } from "../colors.js";
import { convexHull, PlotScale, polygonPath, Pt } from "../geometry.js";
import { ClusterView, PointView } from "../types.js";

const SVG_NS = "http://www.w3.org/2000/svg";

function crossPath(cx: number, cy: number, arm: number): string {
  return (
    `M${cx - arm},${cy - arm} L${cx + arm},${cy + arm} ` +
    `M${cx - arm},${cy + arm} L${cx + arm},${cy - arm}`
  );
}

export function renderExplanation(
  group: SVGGElement,
  clusters: readonly ClusterView[],
  pool: readonly PointView[],
  scale: PlotScale,
): void {
  group.replaceChildren();
  const doc = group.ownerDocument;

  const members = new Map<number, Pt[]>();
  for (const point of pool) {
    if (point.cluster_id === null) continue;
    let list = members.get(point.cluster_id);
    if (!list) {
      list = [];
      members.set(point.cluster_id, list);
    }
    list.push({ x: scale.toPxX(point.x1), y: scale.toPxY(point.x2) });
  }

  for (const cluster of clusters) {
    const color = labelColor(cluster.majority_label);
    const clusterGroup = doc.createElementNS(SVG_NS, "g");
    clusterGroup.setAttribute("class", "cluster");
    clusterGroup.setAttribute("data-cluster-id", String(cluster.id));

    const hull = convexHull(members.get(cluster.id) ?? []);
    const path = polygonPath(hull);
    if (path !== "") {
      const polygon = doc.createElementNS(SVG_NS, "path");
      polygon.setAttribute("d", path);
      polygon.setAttribute("fill", color);
      polygon.setAttribute("fill-opacity", "0.12");
      polygon.setAttribute("stroke", color);
      polygon.setAttribute("stroke-dasharray", "4 3");
      polygon.setAttribute("class", "cluster-hull");
      clusterGroup.appendChild(polygon);
    }

    const mx = scale.toPxX(cluster.medoid_x1);
    const my = scale.toPxY(cluster.medoid_x2);
    const medoid = doc.createElementNS(SVG_NS, "path");
    medoid.setAttribute("d", crossPath(mx, my, 6));
    medoid.setAttribute("stroke", color);
    medoid.setAttribute("stroke-width", "2.5");
    medoid.setAttribute("fill", "none");
    medoid.setAttribute("class", "medoid");
    clusterGroup.appendChild(medoid);

    const badge = doc.createElementNS(SVG_NS, "text");
    badge.setAttribute("x", String(mx + 9));
    badge.setAttribute("y", String(my - 9));
    badge.setAttribute("class", "cluster-badge");
    badge.setAttribute("fill", color);
    badge.textContent = `#${cluster.id} (${cluster.member_count})`;
    clusterGroup.appendChild(badge);

    const title = doc.createElementNS(SVG_NS, "title");
    title.textContent = cluster.description;
    clusterGroup.appendChild(title);

    group.appendChild(clusterGroup);
  }
}
