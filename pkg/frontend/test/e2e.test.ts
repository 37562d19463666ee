/** End-to-end: the built UI against a live `percepta serve` process.
 *
 * The service is spawned on a private port; the page is mounted in the
 * test DOM with a counting API client so the tests can assert exactly
 * how many estimate requests each interaction put on the wire.
 */

import { spawn, type ChildProcess } from "node:child_process";
import { readFileSync } from "node:fs";
import { fileURLToPath } from "node:url";
import { dirname, join } from "node:path";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { mountApp } from "../src/main.js";
import type { SessionController } from "../src/controller.js";
import { buildEstimateRequest } from "../src/session.js";
import type { EstimateRequest, EstimateResponse } from "../src/types.js";

const BASE = "http://127.0.0.1:8931";
const HERE = dirname(fileURLToPath(import.meta.url));

class CountingClient extends ApiClient {
  estimates = 0;

  override estimate(request: EstimateRequest, signal?: AbortSignal): Promise<EstimateResponse> {
    this.estimates += 1;
    return super.estimate(request, signal);
  }
}

let server: ChildProcess;
let client: CountingClient;
let controller: SessionController;
let root: HTMLElement;

const sleep = (ms: number) => new Promise((resolve) => setTimeout(resolve, ms));

async function until(check: () => boolean, timeoutMs = 15000): Promise<void> {
  const deadline = Date.now() + timeoutMs;
  while (Date.now() < deadline) {
    if (check()) return;
    await sleep(100);
  }
  throw new Error("condition not reached in time");
}

beforeAll(async () => {
  server = spawn("percepta", ["serve", "--bind", "127.0.0.1:8931"], { stdio: "ignore" });
  const deadline = Date.now() + 20000;
  for (;;) {
    try {
      const response = await fetch(BASE + "/api/health");
      if (response.ok) break;
    } catch {
      // not up yet
    }
    if (Date.now() > deadline) throw new Error("service did not come up on :8931");
    await sleep(250);
  }
  client = new CountingClient(BASE);
  root = document.createElement("div");
  document.body.appendChild(root);
  controller = mountApp(root, client);
  await until(() => /clusters/.test(root.querySelector(".count-readout")?.textContent ?? ""));
});

afterAll(async () => {
  // let in-flight preview fetches settle so window teardown has nothing
  // to abort, then stop the service
  try {
    await until(() => !root.classList.contains("busy"), 5000);
  } catch {
    // drain is best-effort
  }
  await sleep(300);
  server?.kill();
});

function setInput(field: string, value: string): void {
  const input = root.querySelector(`input[data-field="${field}"]`) as HTMLInputElement;
  input.value = value;
  input.dispatchEvent(new Event("input", { bubbles: true }));
}

describe("live session", () => {
  it("boots to a server-confirmed count readout", async () => {
    const text = root.querySelector(".count-readout")?.textContent ?? "";
    const shown = Number(/config 1: (\d+) clusters/.exec(text)?.[1]);
    expect(Number.isFinite(shown)).toBe(true);
    const direct = await client.estimate(
      buildEstimateRequest(controller.session.generation, controller.session.configs[0]!),
    );
    expect(shown).toBe(direct.threshold_plot.count_at_zero);
  });

  it("a burst of opacity slider moves issues exactly one re-estimate", async () => {
    await sleep(600);
    const before = client.estimates;
    setInput("opacity", "0.61");
    setInput("opacity", "0.37");
    setInput("opacity", "0.13");
    expect(client.estimates).toBe(before);
    await until(() => client.estimates > before, 10000);
    await sleep(700);
    expect(client.estimates).toBe(before + 1);
    expect(controller.session.configs[0]?.opacity).toBe(0.13);
    // the readout re-renders from the new response; its provenance pane
    // echoes the freshly applied opacity
    await until(
      () => (root.querySelector(".provenance")?.textContent ?? "").includes('"opacity": 0.13'),
      10000,
    );
    const direct = await client.estimate(
      buildEstimateRequest(controller.session.generation, controller.session.configs[0]!),
    );
    const text = root.querySelector(".count-readout")?.textContent ?? "";
    const shown = Number(/config 1: (\d+) clusters/.exec(text)?.[1]);
    expect(shown).toBe(direct.threshold_plot.count_at_zero);
  });

  it("an out-of-range spread shows inline and sends nothing", async () => {
    await sleep(600);
    const before = client.estimates;
    setInput("distribution_size", "400");
    await sleep(700);
    expect(client.estimates).toBe(before);
    const input = root.querySelector('input[data-field="distribution_size"]');
    expect(input?.classList.contains("invalid")).toBe(true);
    const message = root.querySelector('[data-error-for="distribution_size"]')?.textContent;
    expect(message).toMatch(/safe zone/);
    setInput("distribution_size", "30");
    await until(() => client.estimates > before, 10000);
  });

  it("the recorded contract fixture still matches the live service", async () => {
    const fixture = JSON.parse(
      readFileSync(join(HERE, "fixtures", "estimate_response.json"), "utf8"),
    ) as EstimateResponse;
    const source = fixture.provenance.source as {
      params: EstimateRequest extends never ? never : Record<string, number>;
      seed: number;
      min_center_separation: number;
    };
    const analysis = fixture.provenance.analysis as {
      bin_size: number;
      mode: "coverage";
      render: { point_area: number; opacity: number };
    };
    const request = {
      schema: 1,
      model: fixture.model,
      source: {
        generate: {
          params: source.params,
          seed: source.seed,
          min_center_separation: source.min_center_separation,
        },
      },
      density: { bin_size: analysis.bin_size, mode: analysis.mode },
      overrides: analysis.render,
    } as unknown as EstimateRequest;
    const live = await client.estimate(request);
    expect(live).toEqual(fixture);
  });
});
