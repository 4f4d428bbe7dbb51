/** Builders for valid service payloads used across the UI tests. */

import { Label, StateView } from "../src/types.js";

export interface StateOptions {
  version?: number;
  k?: number;
  resolution?: number;
  nPool?: number;
  labeledIndices?: number[];
}

export function makeState(options: StateOptions = {}): StateView {
  const version = options.version ?? 0;
  const k = options.k ?? 3;
  const resolution = options.resolution ?? 4;
  const nPool = options.nPool ?? 12;
  const labeled = new Set(options.labeledIndices ?? [0, 1]);

  const pool = [];
  for (let i = 0; i < nPool; i++) {
    const trueLabel: Label = i % 3 === 0 ? "red" : "blue";
    const predicted: Label = i % 2 === 0 ? "red" : "blue";
    pool.push({
      index: i,
      x1: (i % 4) / 4 + 0.05,
      x2: Math.floor(i / 4) / 4 + 0.05,
      true_label: trueLabel,
      predicted_label: predicted,
      cluster_id: i % k,
      labeled: labeled.has(i),
    });
  }

  const clusters = [];
  for (let c = 0; c < k; c++) {
    clusters.push({
      id: c,
      medoid_index: c,
      medoid_x1: 0.2 + 0.2 * c,
      medoid_x2: 0.5,
      majority_label: (c % 2 === 0 ? "blue" : "red") as Label,
      member_count: pool.filter((p) => p.cluster_id === c).length,
      x1_bounds: [0.1, 0.9] as [number, number],
      x2_bounds: [0.1, 0.9] as [number, number],
      description: `cluster ${c}: mostly ${c % 2 === 0 ? "blue" : "red"}`,
    });
  }

  const values = [];
  for (let i = 0; i < resolution * resolution; i++) {
    values.push(Math.sin(i) * 2);
  }

  const history = [];
  for (let i = 0; i <= version; i++) {
    history.push(0.5 + 0.4 * (i / (version + 1)));
  }

  return {
    model_version: version,
    f1: history[history.length - 1],
    f1_history: history,
    labeled_indices: [...labeled].sort((a, b) => a - b),
    initial_indices: [0, 1],
    extra_points: [],
    pool,
    explanation: {
      k,
      weight: 0.5,
      model_version: version,
      clusters,
    },
    surface: {
      resolution,
      values,
      model_version: version,
    },
    config: {
      seed: 0,
      folds: 10,
      test_fold: 0,
      k_clusters: k,
      gamma: 100,
      c: 100,
      w: 0.5,
      resolution,
    },
  };
}

export function jsonResponse(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "Content-Type": "application/json" },
  });
}
