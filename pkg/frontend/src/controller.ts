/** Orchestrates edits -> debounced API calls -> view updates.
 *
 * Concurrency rules: each configuration has at most one in-flight
 * estimate (a newer edit aborts the older request), and every response
 * carries the sequence ticket it was issued under; a response whose
 * ticket is no longer current for its configuration is discarded, so a
 * slow early reply can never overwrite a later one.
 */

import { ApiError } from "./api.js";
import { debounce, type Debounced } from "./debounce.js";
import {
  buildEstimateRequest,
  Session,
  validateConfig,
  validateGeneration,
  type FieldError,
} from "./session.js";
import type {
  CompareResponse,
  EncodingConfig,
  EstimateRequest,
  EstimateResponse,
  GenParams,
  TargetPickLike,
} from "./types.js";

/** The slice of the API client the controller consumes (ApiClient fits). */
export interface EstimatorApi {
  estimate(request: EstimateRequest, signal?: AbortSignal): Promise<EstimateResponse>;
  compare(requests: EstimateRequest[], signal?: AbortSignal): Promise<CompareResponse>;
  generate(payload: unknown, signal?: AbortSignal): Promise<unknown>;
  renderPng(payload: unknown, signal?: AbortSignal): Promise<Blob>;
}

export interface ViewHooks {
  /** Parallel to session.configs; null = not yet estimated. */
  onResponses(responses: (EstimateResponse | null)[]): void;
  /** Inline field problems; empty list clears them. */
  onValidation(errors: FieldError[]): void;
  onServiceError(message: string | null): void;
  onProvenance(provenance: unknown | null): void;
  onPreview(url: string | null): void;
  onBusy?(busy: boolean): void;
}

export interface ControllerStats {
  estimates: number;
  compares: number;
  generates: number;
  renders: number;
  discarded: number;
}

/** Order matters: longest names first so "subsample_seed" beats "subsample". */
const FIELD_NAMES = [
  "min_center_separation",
  "distribution_size",
  "subsample_seed",
  "cluster_count",
  "point_count",
  "point_area",
  "bin_size",
  "subsample",
  "threshold",
  "opacity",
  "width",
  "height",
  "snr",
  "seed",
  "mode",
  "model",
];

export function fieldFromMessage(message: string): string | null {
  for (const name of FIELD_NAMES) {
    if (message.includes(name)) return name;
  }
  return null;
}

export const DEBOUNCE_MS = 200;

export class SessionController {
  readonly session = new Session();
  readonly stats: ControllerStats = { estimates: 0, compares: 0, generates: 0, renders: 0, discarded: 0 };

  private readonly api: EstimatorApi;
  private readonly hooks: ViewHooks;
  private readonly waitMs: number;

  private responses: (EstimateResponse | null)[] = [null];
  private activeIndex = 0;

  private seq = 0;
  private tickets: number[] = [0];
  private inflight: (AbortController | null)[] = [null];
  private compareInflight: AbortController | null = null;
  private previewInflight: AbortController | null = null;
  private previewTicket = 0;
  private busyCount = 0;

  private configDebounce: Debounced<[number]>[] = [];
  private allDebounce: Debounced<[]>;
  private previewDebounce: Debounced<[]>;

  constructor(api: EstimatorApi, hooks: ViewHooks, waitMs = DEBOUNCE_MS) {
    this.api = api;
    this.hooks = hooks;
    this.waitMs = waitMs;
    this.configDebounce = [this.makeConfigDebounce()];
    this.allDebounce = debounce(() => void this.refreshAll(), waitMs);
    this.previewDebounce = debounce(() => void this.refreshPreview(), waitMs);
  }

  private makeConfigDebounce(): Debounced<[number]> {
    return debounce((index: number) => void this.refreshConfig(index), this.waitMs);
  }

  get currentResponses(): (EstimateResponse | null)[] {
    return this.responses.slice();
  }

  get active(): number {
    return this.activeIndex;
  }

  // ---- edits -------------------------------------------------------

  editGeneration(patch: {
    params?: Partial<GenParams>;
    seed?: number;
    minCenterSeparation?: number;
  }): void {
    const gen = this.session.generation;
    if (patch.params) gen.params = { ...gen.params, ...patch.params };
    if (patch.seed !== undefined) gen.seed = patch.seed;
    if (patch.minCenterSeparation !== undefined) {
      gen.minCenterSeparation = patch.minCenterSeparation;
    }
    const errors = validateGeneration(gen);
    this.hooks.onValidation(errors);
    if (errors.length > 0) {
      // out-of-range input never reaches the network
      this.allDebounce.cancel();
      this.previewDebounce.cancel();
      for (const d of this.configDebounce) d.cancel();
      return;
    }
    this.allDebounce();
    this.previewDebounce();
  }

  editFactor(index: number, patch: Partial<EncodingConfig>): void {
    const config = this.session.updateConfig(index, patch);
    const errors = validateConfig(config);
    this.hooks.onValidation(errors);
    const bouncer = this.configDebounce[index];
    if (errors.length > 0) {
      bouncer?.cancel();
      return;
    }
    bouncer?.(index);
    const touchesRaster =
      patch.pointArea !== undefined || patch.opacity !== undefined || patch.subsample !== undefined;
    if (touchesRaster && index === this.activeIndex) this.previewDebounce();
  }

  setThreshold(threshold: number | null): void {
    if (threshold !== null && threshold < 0) {
      this.hooks.onValidation([{ field: "threshold", message: "threshold must be >= 0" }]);
      this.allDebounce.cancel();
      return;
    }
    this.hooks.onValidation([]);
    this.session.selectThreshold(threshold);
    this.allDebounce();
  }

  /** Back-solved target pick from the chart: adopt its representative
   * threshold so the count readout is re-confirmed by the server. */
  applyTargetPick(pick: TargetPickLike): void {
    this.session.selectTargetCount(pick.requested);
    this.session.selectedThreshold = pick.threshold;
    this.allDebounce();
  }

  setActive(index: number): void {
    this.activeIndex = Math.min(index, this.session.configs.length - 1);
    this.hooks.onProvenance(this.responses[this.activeIndex]?.provenance ?? null);
    this.previewDebounce();
  }

  addConfig(): number {
    const index = this.session.addConfig();
    this.responses.push(null);
    this.tickets.push(0);
    this.inflight.push(null);
    this.configDebounce.push(this.makeConfigDebounce());
    this.configDebounce[index]?.(index);
    return index;
  }

  removeConfig(index: number): void {
    this.session.removeConfig(index);
    this.configDebounce[index]?.cancel();
    this.inflight[index]?.abort();
    this.responses.splice(index, 1);
    this.tickets.splice(index, 1);
    this.inflight.splice(index, 1);
    this.configDebounce.splice(index, 1);
    if (this.activeIndex >= this.session.configs.length) {
      this.activeIndex = this.session.configs.length - 1;
    }
    this.hooks.onResponses(this.currentResponses);
  }

  /** Flush pending debounced work immediately (used on explicit "run now"). */
  flush(): void {
    this.allDebounce.flush();
    this.previewDebounce.flush();
    for (const d of this.configDebounce) d.flush();
  }

  // ---- request plumbing --------------------------------------------

  private setBusy(delta: number): void {
    this.busyCount += delta;
    this.hooks.onBusy?.(this.busyCount > 0);
  }

  private publish(): void {
    this.hooks.onResponses(this.currentResponses);
    this.hooks.onProvenance(this.responses[this.activeIndex]?.provenance ?? null);
    this.hooks.onServiceError(null);
  }

  private reportFailure(error: unknown): void {
    if (error instanceof DOMException && error.name === "AbortError") return;
    if (error instanceof ApiError && error.status < 500) {
      const field = fieldFromMessage(error.message);
      this.hooks.onValidation([{ field: field ?? "", message: error.message }]);
      return;
    }
    const message = error instanceof Error ? error.message : String(error);
    this.hooks.onServiceError(`service unavailable: ${message}`);
  }

  private async refreshConfig(index: number): Promise<void> {
    const config = this.session.configs[index];
    if (!config) return;
    const request = buildEstimateRequest(
      this.session.generation,
      config,
      this.session.selectedThreshold,
    );
    this.inflight[index]?.abort();
    const controller = new AbortController();
    this.inflight[index] = controller;
    const ticket = ++this.seq;
    this.tickets[index] = ticket;
    this.stats.estimates += 1;
    this.setBusy(1);
    try {
      const response = await this.api.estimate(request, controller.signal);
      if (this.tickets[index] !== ticket) {
        this.stats.discarded += 1;
        return;
      }
      this.responses[index] = response;
      this.publish();
    } catch (error) {
      if (this.tickets[index] === ticket) this.reportFailure(error);
    } finally {
      if (this.inflight[index] === controller) this.inflight[index] = null;
      this.setBusy(-1);
    }
  }

  private async refreshAll(): Promise<void> {
    const gen = this.session.generation;
    const requests = this.session.configs.map((config) =>
      buildEstimateRequest(gen, config, this.session.selectedThreshold),
    );
    this.compareInflight?.abort();
    for (const inflight of this.inflight) inflight?.abort();
    const controller = new AbortController();
    this.compareInflight = controller;
    const captured = requests.map((_, i) => {
      const ticket = ++this.seq;
      this.tickets[i] = ticket;
      return ticket;
    });
    if (requests.length === 1) this.stats.estimates += 1;
    else this.stats.compares += 1;
    this.setBusy(1);
    try {
      let documents: EstimateResponse[];
      if (requests.length === 1) {
        documents = [await this.api.estimate(requests[0] as EstimateRequest, controller.signal)];
      } else {
        documents = (await this.api.compare(requests, controller.signal)).responses;
      }
      let applied = false;
      documents.forEach((doc, i) => {
        if (this.tickets[i] === captured[i]) {
          this.responses[i] = doc;
          applied = true;
        } else {
          this.stats.discarded += 1;
        }
      });
      if (applied) this.publish();
    } catch (error) {
      if (captured.some((ticket, i) => this.tickets[i] === ticket)) this.reportFailure(error);
    } finally {
      if (this.compareInflight === controller) this.compareInflight = null;
      this.setBusy(-1);
    }
  }

  private async refreshPreview(): Promise<void> {
    const config = this.session.configs[this.activeIndex];
    if (!config) return;
    this.previewInflight?.abort();
    const controller = new AbortController();
    this.previewInflight = controller;
    const ticket = ++this.previewTicket;
    const gen = this.session.generation;
    this.setBusy(1);
    try {
      this.stats.generates += 1;
      const dataset = await this.api.generate(
        {
          schema: 1,
          params: { ...gen.params },
          seed: gen.seed,
          min_center_separation: gen.minCenterSeparation,
        },
        controller.signal,
      );
      if (this.previewTicket !== ticket) return;
      this.stats.renders += 1;
      const blob = await this.api.renderPng(
        {
          schema: 1,
          dataset,
          render: { point_area: config.pointArea, opacity: config.opacity },
        },
        controller.signal,
      );
      if (this.previewTicket !== ticket) return;
      if (typeof URL.createObjectURL === "function") {
        this.hooks.onPreview(URL.createObjectURL(blob));
      }
    } catch (error) {
      if (this.previewTicket === ticket) this.reportFailure(error);
    } finally {
      if (this.previewInflight === controller) this.previewInflight = null;
      this.setBusy(-1);
    }
  }
}
