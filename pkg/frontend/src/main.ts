/** Browser entry point: builds the page and binds controls to the
 * session controller. Everything numeric on screen is read back out of
 * server responses; edits only assemble requests.
 */

import { ApiClient } from "./api.js";
import { renderThresholdPanel, targetInterval, type TargetPick } from "./chart.js";
import { SessionController, type ViewHooks } from "./controller.js";
import type { FieldError } from "./session.js";
import type { EstimateResponse, HistogramMode, ModelTag } from "./types.js";
import { MAX_CONFIGS } from "./types.js";

type Attrs = Record<string, string>;

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Attrs = {},
  ...children: (Node | string)[]
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) node.setAttribute(key, value);
  for (const child of children) {
    node.appendChild(typeof child === "string" ? document.createTextNode(child) : child);
  }
  return node;
}

interface NumberFieldOpts {
  min?: number;
  max?: number;
  step?: number;
  slider?: boolean;
}

function numberField(
  label: string,
  field: string,
  value: number,
  opts: NumberFieldOpts,
  onChange: (value: number) => void,
): HTMLElement {
  const input = el("input", { type: opts.slider ? "range" : "number", "data-field": field });
  if (opts.min !== undefined) input.min = String(opts.min);
  if (opts.max !== undefined) input.max = String(opts.max);
  if (opts.step !== undefined) input.step = String(opts.step);
  input.value = String(value);
  const readout = opts.slider ? el("span", { class: "slider-value" }, String(value)) : null;
  input.addEventListener("input", () => {
    const parsed = Number(input.value);
    if (readout) readout.textContent = input.value;
    if (Number.isFinite(parsed)) onChange(parsed);
  });
  const error = el("span", { class: "field-error", "data-error-for": field });
  const labelEl = el("label", { class: "field" }, el("span", { class: "field-name" }, label), input);
  if (readout) labelEl.appendChild(readout);
  labelEl.appendChild(error);
  return labelEl;
}

function selectField<T extends string>(
  label: string,
  field: string,
  value: T,
  choices: readonly T[],
  onChange: (value: T) => void,
): HTMLElement {
  const select = el("select", { "data-field": field });
  for (const choice of choices) {
    const option = el("option", { value: choice }, choice);
    if (choice === value) option.selected = true;
    select.appendChild(option);
  }
  select.addEventListener("change", () => onChange(select.value as T));
  return el(
    "label",
    { class: "field" },
    el("span", { class: "field-name" }, label),
    select,
    el("span", { class: "field-error", "data-error-for": field }),
  );
}

export function mountApp(root: HTMLElement, api: ApiClient): SessionController {
  const chartHost = el("div", { class: "chart-host" });
  const readout = el("div", { class: "count-readout" });
  const pickInfo = el("div", { class: "pick-info" });
  const provenance = el("pre", { class: "provenance" });
  const preview = el("img", { class: "preview", alt: "stimulus preview" });
  const serviceError = el("div", { class: "service-error", hidden: "hidden" });
  const configsHost = el("div", { class: "configs" });

  let lastResponses: (EstimateResponse | null)[] = [];

  const clearFieldErrors = () => {
    for (const marked of root.querySelectorAll(".invalid")) marked.classList.remove("invalid");
    for (const span of root.querySelectorAll(".field-error")) span.textContent = "";
  };

  const hooks: ViewHooks = {
    onResponses(responses) {
      lastResponses = responses;
      repaint();
    },
    onValidation(errors: FieldError[]) {
      clearFieldErrors();
      for (const { field, message } of errors) {
        const input = root.querySelector(`[data-field="${field}"]`);
        input?.classList.add("invalid");
        const span = root.querySelector(`[data-error-for="${field}"]`);
        if (span) span.textContent = message;
        else {
          serviceError.hidden = false;
          serviceError.textContent = message;
        }
      }
      if (errors.length === 0) {
        serviceError.hidden = true;
        serviceError.textContent = "";
      }
    },
    onServiceError(message) {
      serviceError.hidden = message === null;
      serviceError.textContent = message ?? "";
    },
    onProvenance(doc) {
      provenance.textContent =
        doc === null
          ? "no estimate yet"
          : JSON.stringify(doc, null, 2) + "\n\n(reproducible from these inputs alone)";
    },
    onPreview(url) {
      if (url) preview.src = url;
    },
    onBusy(busy) {
      root.classList.toggle("busy", busy);
    },
  };

  const controller = new SessionController(api, hooks);

  function repaint(): void {
    const present = lastResponses.filter((r): r is EstimateResponse => r !== null);
    renderThresholdPanel(chartHost, present, {
      activeIndex: controller.active,
      selectedThreshold: controller.session.selectedThreshold,
      labels: controller.session.configs.map(
        (config, i) => `config ${i + 1} (${config.model})`,
      ),
      onTargetPick: adoptPick,
    });
    readout.textContent = present.length
      ? present
          .map((response, i) => {
            const at = response.count_at;
            return at
              ? `config ${i + 1}: ${at.count} clusters at T=${Number(at.threshold.toPrecision(4))}`
              : `config ${i + 1}: ${response.threshold_plot.count_at_zero} clusters at T=0`;
          })
          .join("   |   ")
      : "no estimates yet";
    renderConfigPanels();
  }

  function adoptPick(pick: TargetPick): void {
    pickInfo.textContent =
      `target ${pick.requested}: ` +
      (pick.exact ? "" : `nearest achievable is ${pick.achieved}; `) +
      `thresholds [${Number(pick.lo.toPrecision(4))}, ` +
      (Number.isFinite(pick.hi) ? Number(pick.hi.toPrecision(4)) : "inf") +
      `) marked, representative T=${Number(pick.threshold.toPrecision(4))}`;
    controller.applyTargetPick(pick);
  }

  // ---- generation controls -----------------------------------------

  const gen = controller.session.generation;
  const generation = el(
    "fieldset",
    { class: "panel" },
    el("legend", {}, "stimulus"),
    numberField("width px", "width", gen.params.width, { min: 1, step: 10 }, (v) =>
      controller.editGeneration({ params: { width: v } }),
    ),
    numberField("height px", "height", gen.params.height, { min: 1, step: 10 }, (v) =>
      controller.editGeneration({ params: { height: v } }),
    ),
    numberField("clusters", "cluster_count", gen.params.cluster_count, { min: 1, step: 1 }, (v) =>
      controller.editGeneration({ params: { cluster_count: v } }),
    ),
    numberField(
      "spread S px",
      "distribution_size",
      gen.params.distribution_size,
      { min: 1, max: 400, step: 1, slider: true },
      (v) => controller.editGeneration({ params: { distribution_size: v } }),
    ),
    numberField("points N", "point_count", gen.params.point_count, { min: 0, step: 100 }, (v) =>
      controller.editGeneration({ params: { point_count: v } }),
    ),
    numberField("snr", "snr", gen.params.snr, { min: 0.1, step: 0.5 }, (v) =>
      controller.editGeneration({ params: { snr: v } }),
    ),
    numberField("seed", "seed", gen.seed, { step: 1 }, (v) =>
      controller.editGeneration({ seed: v }),
    ),
    numberField(
      "min separation",
      "min_center_separation",
      gen.minCenterSeparation,
      { min: 0, step: 5 },
      (v) => controller.editGeneration({ minCenterSeparation: v }),
    ),
  );

  // ---- per-configuration factor controls ---------------------------

  function renderConfigPanels(): void {
    configsHost.textContent = "";
    controller.session.configs.forEach((config, index) => {
      const body = el(
        "div",
        { class: "config-body" },
        selectField<ModelTag>("model", "model", config.model, ["density", "distance"], (v) =>
          controller.editFactor(index, { model: v }),
        ),
      );
      if (config.model === "density") {
        body.append(
          numberField("bin size B", "bin_size", config.binSize, { min: 1, step: 1 }, (v) =>
            controller.editFactor(index, { binSize: v }),
          ),
          selectField<HistogramMode>(
            "histogram mode",
            "mode",
            config.mode,
            ["coverage", "intensity_sum"],
            (v) => controller.editFactor(index, { mode: v }),
          ),
          numberField("point area P", "point_area", config.pointArea, { min: 0.5, step: 0.5 }, (v) =>
            controller.editFactor(index, { pointArea: v }),
          ),
          numberField(
            "opacity O",
            "opacity",
            config.opacity,
            { min: 0.01, max: 1, step: 0.01, slider: true },
            (v) => controller.editFactor(index, { opacity: v }),
          ),
          numberField(
            "subsample (0 = all)",
            "subsample",
            config.subsample ?? 0,
            { min: 0, step: 100 },
            (v) => controller.editFactor(index, { subsample: v > 0 ? v : null }),
          ),
        );
      }
      const head = el(
        "div",
        { class: "config-head" },
        el("strong", {}, `config ${index + 1}`),
      );
      if (index !== controller.active) {
        const activate = el("button", { type: "button" }, "activate");
        activate.addEventListener("click", () => {
          controller.setActive(index);
          repaint();
        });
        head.appendChild(activate);
      } else {
        head.appendChild(el("span", { class: "active-tag" }, "active"));
      }
      if (controller.session.configs.length > 1) {
        const remove = el("button", { type: "button" }, "remove");
        remove.addEventListener("click", () => {
          controller.removeConfig(index);
          repaint();
        });
        head.appendChild(remove);
      }
      configsHost.appendChild(el("div", { class: "config panel" }, head, body));
    });
    if (controller.session.configs.length < MAX_CONFIGS) {
      const add = el("button", { type: "button", class: "add-config" }, "add configuration");
      add.addEventListener("click", () => {
        controller.addConfig();
        repaint();
      });
      configsHost.appendChild(add);
    }
  }

  // ---- threshold / target selection --------------------------------

  const thresholdInput = el("input", {
    type: "number",
    min: "0",
    step: "any",
    "data-field": "threshold",
  });
  thresholdInput.addEventListener("input", () => {
    const parsed = Number(thresholdInput.value);
    if (thresholdInput.value === "") controller.setThreshold(null);
    else if (Number.isFinite(parsed)) controller.setThreshold(parsed);
  });
  const targetInput = el("input", { type: "number", min: "1", step: "1" });
  const targetButton = el("button", { type: "button" }, "back-solve");
  targetButton.addEventListener("click", () => {
    const k = Number(targetInput.value);
    const activeResponse = lastResponses[controller.active];
    if (!Number.isFinite(k) || k < 1 || !activeResponse) return;
    adoptPick(targetInterval(activeResponse.threshold_plot, Math.round(k)));
  });
  const selection = el(
    "fieldset",
    { class: "panel" },
    el("legend", {}, "selection"),
    el(
      "label",
      { class: "field" },
      el("span", { class: "field-name" }, "threshold T"),
      thresholdInput,
      el("span", { class: "field-error", "data-error-for": "threshold" }),
    ),
    el(
      "label",
      { class: "field" },
      el("span", { class: "field-name" }, "target count"),
      targetInput,
      targetButton,
    ),
    pickInfo,
  );

  root.append(
    el("header", {}, el("h1", {}, "percepta"), serviceError),
    el(
      "main",
      { class: "layout" },
      el("section", { class: "controls" }, generation, configsHost, selection),
      el(
        "section",
        { class: "results" },
        el("div", { class: "panel" }, preview),
        el("div", { class: "panel" }, chartHost, readout),
        el("div", { class: "panel" }, el("h2", {}, "provenance"), provenance),
      ),
    ),
  );

  repaint();
  controller.editGeneration({});
  return controller;
}

if (typeof document !== "undefined" && document.getElementById("app")) {
  mountApp(document.getElementById("app") as HTMLElement, new ApiClient(""));
}
