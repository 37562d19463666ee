import { describe, expect, it } from "vitest";

import {
  buildEstimateRequest,
  defaultConfig,
  defaultGeneration,
  Session,
  validateConfig,
  validateGeneration,
} from "../src/session.js";

describe("session configuration limits", () => {
  it("holds between one and three configurations", () => {
    const session = new Session();
    expect(session.configs.length).toBe(1);
    session.addConfig();
    session.addConfig();
    expect(session.configs.length).toBe(3);
    expect(() => session.addConfig()).toThrow(/at most 3/);
    session.removeConfig(2);
    session.removeConfig(1);
    expect(() => session.removeConfig(0)).toThrow(/at least one/);
  });

  it("new configurations copy the previous one", () => {
    const session = new Session();
    session.updateConfig(0, { opacity: 0.25, binSize: 40 });
    const index = session.addConfig();
    expect(session.configs[index]?.opacity).toBe(0.25);
    expect(session.configs[index]?.binSize).toBe(40);
  });

  it("threshold and target count selections are mutually exclusive", () => {
    const session = new Session();
    session.selectThreshold(0.2);
    expect(session.targetCount).toBeNull();
    session.selectTargetCount(4);
    expect(session.selectedThreshold).toBeNull();
    session.selectThreshold(0.1);
    expect(session.targetCount).toBeNull();
  });
});

describe("estimate request assembly", () => {
  it("density requests carry density options and overrides", () => {
    const request = buildEstimateRequest(defaultGeneration(), defaultConfig(), 0.15);
    expect(request.model).toBe("density");
    expect(request.density).toEqual({ bin_size: 20, mode: "coverage" });
    expect(request.overrides).toEqual({ point_area: 3, opacity: 1 });
    expect(request.threshold).toBe(0.15);
    expect("subsample" in (request.overrides ?? {})).toBe(false);
  });

  it("distance requests omit rasterization factors entirely", () => {
    const config = { ...defaultConfig(), model: "distance" as const };
    const request = buildEstimateRequest(defaultGeneration(), config, null);
    expect(request.model).toBe("distance");
    expect(request).not.toHaveProperty("density");
    expect(request).not.toHaveProperty("overrides");
    expect(request).not.toHaveProperty("threshold");
  });

  it("subsample rides along only when set", () => {
    const config = { ...defaultConfig(), subsample: 500 };
    const request = buildEstimateRequest(defaultGeneration(), config);
    expect(request.overrides?.subsample).toBe(500);
  });
});

describe("client-side range validation", () => {
  it("accepts the defaults", () => {
    expect(validateGeneration(defaultGeneration())).toEqual([]);
    expect(validateConfig(defaultConfig())).toEqual([]);
  });

  it("rejects a spread past half the smaller image side", () => {
    const gen = defaultGeneration();
    gen.params.distribution_size = 300;
    const errors = validateGeneration(gen);
    expect(errors.length).toBe(1);
    expect(errors[0]?.field).toBe("distribution_size");
    expect(errors[0]?.message).toMatch(/safe zone/);
  });

  it("rejects out-of-range factors", () => {
    expect(validateConfig({ ...defaultConfig(), opacity: 0 })[0]?.field).toBe("opacity");
    expect(validateConfig({ ...defaultConfig(), opacity: 1.2 })[0]?.field).toBe("opacity");
    expect(validateConfig({ ...defaultConfig(), binSize: 0 })[0]?.field).toBe("bin_size");
    expect(validateConfig({ ...defaultConfig(), pointArea: -1 })[0]?.field).toBe("point_area");
    expect(validateConfig({ ...defaultConfig(), subsample: 0 })[0]?.field).toBe("subsample");
  });

  it("distance configurations skip rasterization checks", () => {
    const config = { ...defaultConfig(), model: "distance" as const, opacity: 99 };
    expect(validateConfig(config)).toEqual([]);
  });
});
