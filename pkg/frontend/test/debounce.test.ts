import { afterEach, beforeEach, describe, expect, it, vi } from "vitest";

import { debounce } from "../src/debounce.js";

describe("debounce", () => {
  beforeEach(() => vi.useFakeTimers());
  afterEach(() => vi.useRealTimers());

  it("collapses a burst into one trailing call with the last arguments", () => {
    const calls: number[] = [];
    const fn = debounce((v: number) => calls.push(v), 200);
    fn(1);
    vi.advanceTimersByTime(150);
    fn(2);
    vi.advanceTimersByTime(150);
    fn(3);
    expect(calls).toEqual([]);
    vi.advanceTimersByTime(199);
    expect(calls).toEqual([]);
    vi.advanceTimersByTime(1);
    expect(calls).toEqual([3]);
    vi.advanceTimersByTime(1000);
    expect(calls).toEqual([3]);
  });

  it("cancel drops the pending call", () => {
    const calls: number[] = [];
    const fn = debounce((v: number) => calls.push(v), 200);
    fn(1);
    fn.cancel();
    vi.advanceTimersByTime(500);
    expect(calls).toEqual([]);
    expect(fn.pending()).toBe(false);
  });

  it("flush fires the pending call immediately", () => {
    const calls: number[] = [];
    const fn = debounce((v: number) => calls.push(v), 200);
    fn(7);
    expect(fn.pending()).toBe(true);
    fn.flush();
    expect(calls).toEqual([7]);
    vi.advanceTimersByTime(500);
    expect(calls).toEqual([7]);
  });

  it("flush without a pending call is a no-op", () => {
    const calls: number[] = [];
    const fn = debounce((v: number) => calls.push(v), 200);
    fn.flush();
    expect(calls).toEqual([]);
  });
});
