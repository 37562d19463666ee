/** Thin typed wrappers over the percepta HTTP API.
 *
 * Every number shown in the UI comes out of these calls; no model math
 * happens on the client beyond re-reading the response documents.
 */

import type { CompareResponse, EstimateRequest, EstimateResponse, ErrorBody } from "./types.js";

export class ApiError extends Error {
  readonly status: number;
  readonly code: string;

  constructor(status: number, code: string, message: string) {
    super(message);
    this.name = "ApiError";
    this.status = status;
    this.code = code;
  }
}

async function raiseFor(response: Response): Promise<never> {
  let code = "internal";
  let message = `request failed with status ${response.status}`;
  try {
    const body = (await response.json()) as ErrorBody;
    if (body && body.error) {
      code = body.error.code;
      message = body.error.message;
    }
  } catch {
    // non-JSON error body; keep the generic message
  }
  throw new ApiError(response.status, code, message);
}

export class ApiClient {
  readonly baseUrl: string;

  constructor(baseUrl = "") {
    this.baseUrl = baseUrl.replace(/\/$/, "");
  }

  private async postJson<T>(path: string, payload: unknown, signal?: AbortSignal): Promise<T> {
    const response = await fetch(this.baseUrl + path, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(payload),
      signal,
    });
    if (!response.ok) await raiseFor(response);
    return (await response.json()) as T;
  }

  async health(): Promise<string> {
    const response = await fetch(this.baseUrl + "/api/health");
    if (!response.ok) await raiseFor(response);
    return response.text();
  }

  estimate(request: EstimateRequest, signal?: AbortSignal): Promise<EstimateResponse> {
    return this.postJson<EstimateResponse>("/api/estimate", request, signal);
  }

  compare(requests: EstimateRequest[], signal?: AbortSignal): Promise<CompareResponse> {
    return this.postJson<CompareResponse>("/api/compare", { schema: 1, requests }, signal);
  }

  generate(payload: unknown, signal?: AbortSignal): Promise<unknown> {
    return this.postJson<unknown>("/api/generate", payload, signal);
  }

  /** Server-rendered stimulus preview; returns the PNG bytes. */
  async renderPng(payload: unknown, signal?: AbortSignal): Promise<Blob> {
    const response = await fetch(this.baseUrl + "/api/render", {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(payload),
      signal,
    });
    if (!response.ok) await raiseFor(response);
    return response.blob();
  }
}
