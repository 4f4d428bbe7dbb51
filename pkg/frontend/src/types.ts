/**
 * Runtime-validated mirrors of the session service payloads.
 *
 * Every byte that crosses the network boundary is parsed through one of
 * these schemas before it reaches the store or the renderers, so a
 * malformed or truncated payload surfaces as a single typed error instead
 * of a half-drawn view.
 */

import { z } from "zod";

export const labelSchema = z.enum(["red", "blue"]);
export type Label = z.infer<typeof labelSchema>;

export const pointViewSchema = z.object({
  index: z.number().int(),
  x1: z.number(),
  x2: z.number(),
  true_label: labelSchema,
  predicted_label: labelSchema,
  cluster_id: z.number().int().nullable(),
  labeled: z.boolean(),
});
export type PointView = z.infer<typeof pointViewSchema>;

export const clusterViewSchema = z.object({
  id: z.number().int(),
  medoid_index: z.number().int(),
  medoid_x1: z.number(),
  medoid_x2: z.number(),
  majority_label: labelSchema,
  member_count: z.number().int(),
  x1_bounds: z.tuple([z.number(), z.number()]),
  x2_bounds: z.tuple([z.number(), z.number()]),
  description: z.string(),
});
export type ClusterView = z.infer<typeof clusterViewSchema>;

export const explanationViewSchema = z.object({
  k: z.number().int(),
  weight: z.number(),
  model_version: z.number().int(),
  clusters: z.array(clusterViewSchema),
});
export type ExplanationView = z.infer<typeof explanationViewSchema>;

export const surfaceViewSchema = z
  .object({
    resolution: z.number().int().min(2),
    values: z.array(z.number()),
    model_version: z.number().int(),
  })
  .refine((s) => s.values.length === s.resolution * s.resolution, {
    message: "surface values length must equal resolution squared",
  });
export type SurfaceView = z.infer<typeof surfaceViewSchema>;

export const extraPointViewSchema = z.object({
  x1: z.number(),
  x2: z.number(),
  label: labelSchema,
});
export type ExtraPointView = z.infer<typeof extraPointViewSchema>;

export const sessionConfigViewSchema = z.object({
  seed: z.number().int(),
  folds: z.number().int(),
  test_fold: z.number().int(),
  k_clusters: z.number().int(),
  gamma: z.number(),
  c: z.number(),
  w: z.number(),
  resolution: z.number().int(),
});
export type SessionConfigView = z.infer<typeof sessionConfigViewSchema>;

export const stateViewSchema = z.object({
  model_version: z.number().int().min(0),
  f1: z.number(),
  f1_history: z.array(z.number()),
  labeled_indices: z.array(z.number().int()),
  initial_indices: z.array(z.number().int()),
  extra_points: z.array(extraPointViewSchema),
  pool: z.array(pointViewSchema),
  explanation: explanationViewSchema,
  surface: surfaceViewSchema,
  config: sessionConfigViewSchema,
});
export type StateView = z.infer<typeof stateViewSchema>;

/** Body for POST /label; exactly one of index or (x1, x2) must be set. */
export interface LabelRequest {
  model_version: number;
  label: Label;
  index?: number;
  x1?: number;
  x2?: number;
}

/** Body for POST /reset; omitted fields keep their server-side values. */
export interface ResetRequest {
  seed?: number;
  k_clusters?: number;
  gamma?: number;
  c?: number;
  w?: number;
  resolution?: number;
}
