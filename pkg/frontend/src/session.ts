/** Session state: one shared stimulus, up to three encoding configs. */

import type {
  EncodingConfig,
  EstimateRequest,
  GenerationSpec,
  ModelTag,
} from "./types.js";
import { MAX_CONFIGS, SCHEMA_VERSION } from "./types.js";

export interface FieldError {
  field: string;
  message: string;
}

export function defaultGeneration(): GenerationSpec {
  return {
    params: {
      width: 550,
      height: 550,
      cluster_count: 5,
      distribution_size: 30,
      point_count: 2500,
      snr: 10,
    },
    seed: 42,
    minCenterSeparation: 120,
  };
}

export function defaultConfig(): EncodingConfig {
  return {
    model: "density",
    subsample: null,
    pointArea: 3,
    opacity: 1,
    binSize: 20,
    mode: "coverage",
  };
}

/** Range checks mirroring the server's documented parameter bounds.
 *
 * These gate requests client-side (an out-of-range factor must not hit
 * the network); the server remains the authority and anything it still
 * rejects is surfaced inline from its 4xx body.
 */
export function validateGeneration(gen: GenerationSpec): FieldError[] {
  const errors: FieldError[] = [];
  const p = gen.params;
  if (!(p.width >= 1) || !(p.height >= 1)) {
    errors.push({ field: "width", message: "width and height must be positive" });
  }
  if (!(p.cluster_count >= 1)) {
    errors.push({ field: "cluster_count", message: "cluster count must be at least 1" });
  }
  if (!(p.distribution_size > 0)) {
    errors.push({ field: "distribution_size", message: "distribution size must be positive" });
  } else if (p.distribution_size > Math.min(p.width, p.height) / 2) {
    errors.push({
      field: "distribution_size",
      message:
        "distribution size exceeds half the smaller image side; " +
        "the center safe zone would be empty",
    });
  }
  if (!(p.point_count >= 0)) {
    errors.push({ field: "point_count", message: "point count must be non-negative" });
  }
  if (!(p.snr > 0)) {
    errors.push({ field: "snr", message: "signal:noise ratio must be positive" });
  }
  if (!Number.isFinite(gen.seed)) {
    errors.push({ field: "seed", message: "seed must be a number" });
  }
  if (!(gen.minCenterSeparation >= 0)) {
    errors.push({ field: "min_center_separation", message: "separation must be non-negative" });
  }
  return errors;
}

export function validateConfig(config: EncodingConfig): FieldError[] {
  const errors: FieldError[] = [];
  if (config.model === "density") {
    if (!(config.binSize >= 1)) {
      errors.push({ field: "bin_size", message: "bin size must be at least 1 pixel" });
    }
    if (!(config.pointArea > 0)) {
      errors.push({ field: "point_area", message: "point area must be positive" });
    }
    if (!(config.opacity > 0 && config.opacity <= 1)) {
      errors.push({ field: "opacity", message: "opacity must be in (0, 1]" });
    }
    if (config.subsample !== null && !(config.subsample >= 1)) {
      errors.push({ field: "subsample", message: "subsample must keep at least one point" });
    }
  }
  return errors;
}

/** Assemble the estimate payload for one configuration.
 *
 * The distance model consumes centers directly, so rasterization
 * factors are omitted from its requests entirely; the server rejects
 * them otherwise.
 */
export function buildEstimateRequest(
  gen: GenerationSpec,
  config: EncodingConfig,
  threshold?: number | null,
): EstimateRequest {
  const request: EstimateRequest = {
    schema: SCHEMA_VERSION,
    model: config.model,
    source: {
      generate: {
        params: { ...gen.params },
        seed: gen.seed,
        min_center_separation: gen.minCenterSeparation,
      },
    },
  };
  if (config.model === "density") {
    request.density = { bin_size: config.binSize, mode: config.mode };
    const overrides: Record<string, number> = {
      point_area: config.pointArea,
      opacity: config.opacity,
    };
    if (config.subsample !== null) overrides["subsample"] = config.subsample;
    request.overrides = overrides;
  }
  if (threshold != null) request.threshold = threshold;
  return request;
}

export interface RenderRequestDataset {
  schema: number;
  dataset: unknown;
  render: { point_area: number; opacity: number };
}

export class Session {
  generation: GenerationSpec = defaultGeneration();
  configs: EncodingConfig[] = [defaultConfig()];
  /** Exactly one of these is active at a time. */
  selectedThreshold: number | null = null;
  targetCount: number | null = null;

  addConfig(): number {
    if (this.configs.length >= MAX_CONFIGS) {
      throw new Error(`a session holds at most ${MAX_CONFIGS} configurations`);
    }
    const last = this.configs[this.configs.length - 1];
    this.configs.push(last ? { ...last } : defaultConfig());
    return this.configs.length - 1;
  }

  removeConfig(index: number): void {
    if (this.configs.length <= 1) throw new Error("a session keeps at least one configuration");
    this.configs.splice(index, 1);
  }

  updateConfig(index: number, patch: Partial<EncodingConfig>): EncodingConfig {
    const current = this.configs[index];
    if (!current) throw new Error(`no configuration at index ${index}`);
    const next = { ...current, ...patch };
    this.configs[index] = next;
    return next;
  }

  setModel(index: number, model: ModelTag): EncodingConfig {
    return this.updateConfig(index, { model });
  }

  selectThreshold(threshold: number | null): void {
    this.selectedThreshold = threshold;
    if (threshold !== null) this.targetCount = null;
  }

  selectTargetCount(count: number | null): void {
    this.targetCount = count;
    if (count !== null) this.selectedThreshold = null;
  }
}
