/** Threshold step charts.
 *
 * All counts shown here are re-read from EstimateResponse documents:
 * the step function is fully determined by threshold_plot.breakpoints
 * (finite persistences, descending) and count_at_zero, so evaluating it
 * at any threshold reproduces the server's cluster_count_at. The chart
 * never computes merge trees or persistences itself.
 */

import type { EstimateResponse, PersistencePairDoc, ThresholdPlotDoc } from "./types.js";
import { decodeReal, UNIT_LABELS } from "./types.js";

const SVG_NS = "http://www.w3.org/2000/svg";

export const SERIES_COLORS = ["#2563eb", "#dc2626", "#059669"];

/** count(T) = 1 + number of breakpoints strictly above T (right-continuous). */
export function countAt(breakpoints: number[], threshold: number): number {
  // breakpoints are descending; binary-search the first index <= threshold
  let lo = 0;
  let hi = breakpoints.length;
  while (lo < hi) {
    const mid = (lo + hi) >> 1;
    if ((breakpoints[mid] as number) > threshold) lo = mid + 1;
    else hi = mid;
  }
  return 1 + lo;
}

/** Rebuild the breakpoint list from persistence pairs (finite, descending). */
export function breakpointsFromPairs(pairs: PersistencePairDoc[]): number[] {
  return pairs
    .map((p) => decodeReal(p.persistence))
    .filter((rho) => Number.isFinite(rho))
    .sort((a, b) => b - a);
}

export interface StepSegment {
  t0: number;
  t1: number;
  count: number;
}

/** Piecewise-constant segments covering [0, tMax], step-after geometry. */
export function buildStepSeries(plot: ThresholdPlotDoc, tMax: number): StepSegment[] {
  const edges = Array.from(new Set(plot.breakpoints.filter((b) => b > 0 && b < tMax))).sort(
    (a, b) => a - b,
  );
  const segments: StepSegment[] = [];
  let start = 0;
  for (const edge of edges) {
    segments.push({ t0: start, t1: edge, count: countAt(plot.breakpoints, start) });
    start = edge;
  }
  segments.push({ t0: start, t1: tMax, count: countAt(plot.breakpoints, start) });
  return segments;
}

/** Evaluate rendered geometry; segments are [t0, t1) except the last. */
export function evaluateSeries(segments: StepSegment[], threshold: number): number {
  for (let i = 0; i < segments.length; i++) {
    const seg = segments[i] as StepSegment;
    const last = i === segments.length - 1;
    if (threshold >= seg.t0 && (threshold < seg.t1 || (last && threshold <= seg.t1))) {
      return seg.count;
    }
  }
  throw new Error(`threshold ${threshold} outside rendered domain`);
}

export interface TargetPick {
  requested: number;
  achieved: number;
  exact: boolean;
  /** Half-open [lo, hi) threshold range yielding `achieved`. */
  lo: number;
  hi: number;
  /** Representative threshold: midpoint, or lo when hi is unbounded. */
  threshold: number;
}

/** Solve for the threshold interval producing a target count. */
export function targetInterval(plot: ThresholdPlotDoc, requested: number): TargetPick {
  const resolve = (count: number): { lo: number; hi: number } | null => {
    const bp = plot.breakpoints;
    if (count === 1) return { lo: bp.length ? (bp[0] as number) : 0, hi: Infinity };
    if (count < 1 || count - 1 > bp.length) return null;
    const lo = bp[count - 1] ?? 0;
    const hi = bp[count - 2] as number;
    return hi > lo ? { lo, hi } : null;
  };

  let achieved = requested;
  let span = resolve(requested);
  if (span === null) {
    // nearest achievable count; prefer the smaller count on ties
    const candidates = new Set<number>([countAt(plot.breakpoints, 0), 1]);
    for (const b of plot.breakpoints) candidates.add(countAt(plot.breakpoints, b));
    let best: number | null = null;
    for (const c of candidates) {
      if (resolve(c) === null) continue;
      if (
        best === null ||
        Math.abs(c - requested) < Math.abs(best - requested) ||
        (Math.abs(c - requested) === Math.abs(best - requested) && c < best)
      ) {
        best = c;
      }
    }
    achieved = best ?? 1;
    span = resolve(achieved) as { lo: number; hi: number };
  }
  const threshold = Number.isFinite(span.hi) ? (span.lo + span.hi) / 2 : span.lo;
  return {
    requested,
    achieved,
    exact: achieved === requested,
    lo: span.lo,
    hi: span.hi,
    threshold,
  };
}

export interface PanelOptions {
  width?: number;
  height?: number;
  /** Config index whose plot answers target-count clicks. */
  activeIndex?: number;
  selectedThreshold?: number | null;
  labels?: string[];
  onTargetPick?: (pick: TargetPick) => void;
}

const MARGIN = { left: 54, right: 16, top: 14, bottom: 42 };

function svgEl<K extends keyof SVGElementTagNameMap>(
  tag: K,
  attrs: Record<string, string | number>,
): SVGElementTagNameMap[K] {
  const el = document.createElementNS(SVG_NS, tag);
  for (const [key, value] of Object.entries(attrs)) el.setAttribute(key, String(value));
  return el;
}

function niceTicks(max: number, want: number): number[] {
  if (max <= 0) return [0];
  const raw = max / want;
  const mag = Math.pow(10, Math.floor(Math.log10(raw)));
  const step = [1, 2, 5, 10].map((m) => m * mag).find((s) => max / s <= want) ?? mag * 10;
  const ticks: number[] = [];
  for (let v = 0; v <= max * (1 + 1e-9); v += step) ticks.push(Number(v.toFixed(12)));
  return ticks;
}

/** Render overlaid step charts for up to three configurations.
 *
 * Hovering reports the per-configuration counts at the pointer's
 * threshold; clicking back-solves the pointer's count against the
 * active configuration and marks the threshold interval that yields it.
 */
export function renderThresholdPanel(
  container: HTMLElement,
  responses: EstimateResponse[],
  options: PanelOptions = {},
): void {
  container.textContent = "";
  if (responses.length === 0) {
    const empty = document.createElement("div");
    empty.className = "empty-state";
    empty.textContent = "No estimates yet. Adjust factors or add a configuration.";
    container.appendChild(empty);
    return;
  }

  const width = options.width ?? 560;
  const height = options.height ?? 320;
  const iw = width - MARGIN.left - MARGIN.right;
  const ih = height - MARGIN.top - MARGIN.bottom;
  const active = Math.min(options.activeIndex ?? 0, responses.length - 1);

  const topBreak = Math.max(
    ...responses.map((r) => (r.threshold_plot.breakpoints[0] as number | undefined) ?? 0),
  );
  const tMax = topBreak > 0 ? topBreak * 1.1 : 1;
  const yMax = Math.max(...responses.map((r) => r.threshold_plot.count_at_zero)) + 0.5;

  const x = (t: number) => MARGIN.left + (t / tMax) * iw;
  const y = (count: number) => MARGIN.top + ih - (count / yMax) * ih;
  const tFromX = (px: number) => Math.min(tMax, Math.max(0, ((px - MARGIN.left) / iw) * tMax));
  const countFromY = (py: number) => (MARGIN.top + ih - py) / (ih / yMax);

  const svg = svgEl("svg", {
    width,
    height,
    viewBox: `0 0 ${width} ${height}`,
    class: "threshold-panel",
  });

  // frame and axes
  svg.appendChild(
    svgEl("rect", {
      x: MARGIN.left,
      y: MARGIN.top,
      width: iw,
      height: ih,
      class: "panel-frame",
      fill: "none",
    }),
  );
  for (const tick of niceTicks(tMax, 6)) {
    const px = x(tick);
    svg.appendChild(svgEl("line", { x1: px, y1: MARGIN.top + ih, x2: px, y2: MARGIN.top + ih + 5, class: "tick" }));
    const label = svgEl("text", { x: px, y: MARGIN.top + ih + 18, "text-anchor": "middle", class: "tick-label" });
    label.textContent = tick >= 100 ? tick.toFixed(0) : String(Number(tick.toPrecision(3)));
    svg.appendChild(label);
  }
  const yTickStep = Math.max(1, Math.ceil(yMax / 8));
  for (let c = 0; c <= Math.floor(yMax); c += yTickStep) {
    const py = y(c);
    svg.appendChild(svgEl("line", { x1: MARGIN.left - 5, y1: py, x2: MARGIN.left, y2: py, class: "tick" }));
    const label = svgEl("text", { x: MARGIN.left - 9, y: py + 4, "text-anchor": "end", class: "tick-label" });
    label.textContent = String(c);
    svg.appendChild(label);
  }

  const unit = responses[0]?.threshold_plot.unit as keyof typeof UNIT_LABELS;
  const xLabel = svgEl("text", {
    x: MARGIN.left + iw / 2,
    y: height - 8,
    "text-anchor": "middle",
    class: "axis-label",
  });
  xLabel.textContent = UNIT_LABELS[unit] ?? String(unit);
  svg.appendChild(xLabel);
  const yLabel = svgEl("text", {
    x: 14,
    y: MARGIN.top + ih / 2,
    "text-anchor": "middle",
    class: "axis-label",
    transform: `rotate(-90 14 ${MARGIN.top + ih / 2})`,
  });
  yLabel.textContent = "cluster count";
  svg.appendChild(yLabel);

  // one step path per configuration
  responses.forEach((response, idx) => {
    const series = buildStepSeries(response.threshold_plot, tMax);
    let d = "";
    series.forEach((seg, i) => {
      const px0 = x(seg.t0).toFixed(2);
      const px1 = x(seg.t1).toFixed(2);
      const py = y(seg.count).toFixed(2);
      d += i === 0 ? `M ${px0} ${py}` : ` V ${py}`;
      d += ` H ${px1}`;
    });
    svg.appendChild(
      svgEl("path", {
        d,
        fill: "none",
        stroke: SERIES_COLORS[idx % SERIES_COLORS.length] as string,
        "stroke-width": 2,
        class: "step-path",
        "data-config": idx,
      }),
    );
  });

  // selected threshold marker
  if (options.selectedThreshold != null && options.selectedThreshold <= tMax) {
    const px = x(options.selectedThreshold);
    svg.appendChild(
      svgEl("line", { x1: px, y1: MARGIN.top, x2: px, y2: MARGIN.top + ih, class: "threshold-marker" }),
    );
  }

  const hoverLine = svgEl("line", {
    x1: 0,
    y1: MARGIN.top,
    x2: 0,
    y2: MARGIN.top + ih,
    class: "hover-line",
    visibility: "hidden",
  });
  svg.appendChild(hoverLine);

  const targetBand = svgEl("rect", {
    x: 0,
    y: MARGIN.top,
    width: 0,
    height: ih,
    class: "target-band",
    visibility: "hidden",
  });
  svg.insertBefore(targetBand, svg.firstChild);

  const overlay = svgEl("rect", {
    x: MARGIN.left,
    y: MARGIN.top,
    width: iw,
    height: ih,
    fill: "transparent",
    class: "hover-overlay",
  });
  svg.appendChild(overlay);

  const tooltip = document.createElement("div");
  tooltip.className = "chart-tooltip";
  tooltip.style.display = "none";

  const labels = options.labels ?? responses.map((_, i) => `config ${i + 1}`);

  overlay.addEventListener("mousemove", (event) => {
    const rect = svg.getBoundingClientRect();
    const px = (event as MouseEvent).clientX - rect.left;
    const t = tFromX(px);
    hoverLine.setAttribute("x1", String(x(t)));
    hoverLine.setAttribute("x2", String(x(t)));
    hoverLine.setAttribute("visibility", "visible");
    tooltip.style.display = "block";
    tooltip.style.left = `${px + 12}px`;
    tooltip.style.top = "12px";
    tooltip.textContent = responses
      .map((r, i) => `${labels[i]}: ${countAt(r.threshold_plot.breakpoints, t)}`)
      .join("  ·  ");
    tooltip.setAttribute("data-threshold", String(t));
  });
  overlay.addEventListener("mouseleave", () => {
    hoverLine.setAttribute("visibility", "hidden");
    tooltip.style.display = "none";
  });

  overlay.addEventListener("click", (event) => {
    const rect = svg.getBoundingClientRect();
    const py = (event as MouseEvent).clientY - rect.top;
    const requested = Math.max(1, Math.round(countFromY(py)));
    const plot = (responses[active] as EstimateResponse).threshold_plot;
    const pick = targetInterval(plot, requested);
    const lo = x(pick.lo);
    const hi = x(Math.min(pick.hi, tMax));
    targetBand.setAttribute("x", String(lo));
    targetBand.setAttribute("width", String(Math.max(0, hi - lo)));
    targetBand.setAttribute("visibility", "visible");
    targetBand.setAttribute("data-achieved", String(pick.achieved));
    options.onTargetPick?.(pick);
  });

  const wrap = document.createElement("div");
  wrap.className = "chart-wrap";
  wrap.appendChild(svg);
  wrap.appendChild(tooltip);
  container.appendChild(wrap);
}
