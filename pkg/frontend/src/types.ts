/** Wire document shapes for the percepta JSON API, plus UI session types. */

export const SCHEMA_VERSION = 1;

export type ModelTag = "distance" | "density";
export type HistogramMode = "coverage" | "intensity_sum";

/** Non-finite reals cross the wire as the string "inf". */
export type WireReal = number | "inf";

export interface GenParams {
  width: number;
  height: number;
  cluster_count: number;
  distribution_size: number;
  point_count: number;
  snr: number;
}

export interface GenerateSource {
  params: GenParams;
  seed: number;
  min_center_separation?: number;
}

export interface EstimateOverrides {
  subsample?: number;
  subsample_seed?: number;
  point_area?: number;
  opacity?: number;
}

export interface EstimateRequest {
  schema: number;
  model: ModelTag;
  source: { generate: GenerateSource } | { dataset: unknown } | { image: unknown };
  density?: { bin_size: number; mode: HistogramMode };
  overrides?: EstimateOverrides;
  threshold?: number;
}

export interface ThresholdPlotDoc {
  schema: number;
  unit: ModelTag;
  /** Finite persistences, descending, with multiplicity. */
  breakpoints: number[];
  count_at_zero: number;
}

export interface PersistencePairDoc {
  id: number;
  birth: number;
  death: WireReal;
  persistence: WireReal;
}

export interface EstimateResponse {
  schema: number;
  model: ModelTag;
  threshold_plot: ThresholdPlotDoc;
  persistence_pairs: PersistencePairDoc[];
  count_at?: { threshold: number; count: number };
  provenance: {
    source: Record<string, unknown>;
    analysis: Record<string, unknown>;
  };
}

export interface CompareResponse {
  schema: number;
  responses: EstimateResponse[];
}

export interface ErrorBody {
  error: { code: string; message: string };
}

/** One encoding configuration: the per-panel factors a session can vary. */
export interface EncodingConfig {
  model: ModelTag;
  /** Keep only this many points before rasterizing; null = all. */
  subsample: number | null;
  pointArea: number;
  opacity: number;
  binSize: number;
  mode: HistogramMode;
}

/** Shared stimulus the configurations are compared on. */
export interface GenerationSpec {
  params: GenParams;
  seed: number;
  minCenterSeparation: number;
}

export const MAX_CONFIGS = 3;

/** Minimal shape of a chart target-count pick the controller consumes. */
export interface TargetPickLike {
  requested: number;
  threshold: number;
}

export const UNIT_LABELS: Record<ModelTag, string> = {
  distance: "threshold (px)",
  density: "threshold (area fraction)",
};

export function decodeReal(value: WireReal): number {
  return value === "inf" ? Infinity : value;
}
