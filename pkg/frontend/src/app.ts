/**
 * Wires the store, the API client and the SVG layers into one page.
 *
 * Control flow is single-threaded: user events and fetch completions both
 * funnel into the store, the store notifies render(), and render() redraws
 * whatever changed.  Out-of-order fetches are handled by the store's
 * version guard, never by the renderers.
 */

import { ApiClient, PayloadError, VersionConflictError } from "./api.js";
import { makeScale, PlotScale } from "./geometry.js";
import { renderCurve } from "./layers/curve.js";
import { renderExplanation } from "./layers/explanation.js";
import { renderScatter } from "./layers/scatter.js";
import { renderSurface } from "./layers/surface.js";
import { Store, UiState } from "./store.js";
import { Label } from "./types.js";

const SVG_NS = "http://www.w3.org/2000/svg";
const PLOT_SIZE = 560;
const CURVE_SIZE = { width: 360, height: 180, margin: 24 };

function el<K extends keyof HTMLElementTagNameMap>(
  doc: Document,
  tag: K,
  className?: string,
): HTMLElementTagNameMap[K] {
  const node = doc.createElement(tag);
  if (className) node.className = className;
  return node;
}

export class App {
  readonly store: Store;
  private readonly client: ApiClient;
  private readonly scale: PlotScale;

  private readonly banner: HTMLDivElement;
  private readonly status: HTMLDivElement;
  private readonly truthToggle: HTMLInputElement;
  private readonly chooser: HTMLDivElement;
  private readonly chooserText: HTMLSpanElement;
  private readonly plot: SVGSVGElement;
  private readonly surfaceLayer: SVGGElement;
  private readonly explanationLayer: SVGGElement;
  private readonly scatterLayer: SVGGElement;
  private readonly curveSvg: SVGSVGElement;
  private readonly clusterList: HTMLUListElement;

  constructor(root: HTMLElement, client: ApiClient, store = new Store()) {
    this.client = client;
    this.store = store;
    this.scale = makeScale(PLOT_SIZE, PLOT_SIZE);
    const doc = root.ownerDocument;

    this.banner = el(doc, "div", "banner hidden");
    root.appendChild(this.banner);

    const main = el(doc, "div", "main");
    root.appendChild(main);

    this.plot = doc.createElementNS(SVG_NS, "svg") as SVGSVGElement;
    this.plot.setAttribute("class", "plot");
    this.plot.setAttribute("viewBox", `0 0 ${PLOT_SIZE} ${PLOT_SIZE}`);
    this.plot.setAttribute("width", String(PLOT_SIZE));
    this.plot.setAttribute("height", String(PLOT_SIZE));
    this.surfaceLayer = doc.createElementNS(SVG_NS, "g") as SVGGElement;
    this.surfaceLayer.setAttribute("class", "layer-surface");
    this.explanationLayer = doc.createElementNS(SVG_NS, "g") as SVGGElement;
    this.explanationLayer.setAttribute("class", "layer-explanation");
    this.scatterLayer = doc.createElementNS(SVG_NS, "g") as SVGGElement;
    this.scatterLayer.setAttribute("class", "layer-scatter");
    this.plot.append(this.surfaceLayer, this.explanationLayer, this.scatterLayer);
    this.plot.addEventListener("click", () => this.store.selectPoint(null));
    main.appendChild(this.plot);

    const side = el(doc, "div", "side");
    main.appendChild(side);

    this.status = el(doc, "div", "status");
    side.appendChild(this.status);

    const toggleRow = el(doc, "label", "toggle-row");
    this.truthToggle = el(doc, "input");
    this.truthToggle.type = "checkbox";
    this.truthToggle.className = "truth-toggle";
    this.truthToggle.addEventListener("change", () => {
      this.store.toggleTruth(this.truthToggle.checked);
    });
    toggleRow.appendChild(this.truthToggle);
    toggleRow.appendChild(doc.createTextNode(" reveal true labels (debug)"));
    side.appendChild(toggleRow);

    this.chooser = el(doc, "div", "chooser hidden");
    this.chooserText = el(doc, "span", "chooser-text");
    const redBtn = el(doc, "button", "choose-red");
    redBtn.textContent = "label red";
    redBtn.addEventListener("click", () => void this.submitLabel("red"));
    const blueBtn = el(doc, "button", "choose-blue");
    blueBtn.textContent = "label blue";
    blueBtn.addEventListener("click", () => void this.submitLabel("blue"));
    const cancelBtn = el(doc, "button", "choose-cancel");
    cancelBtn.textContent = "cancel";
    cancelBtn.addEventListener("click", () => this.store.selectPoint(null));
    this.chooser.append(this.chooserText, redBtn, blueBtn, cancelBtn);
    side.appendChild(this.chooser);

    this.curveSvg = doc.createElementNS(SVG_NS, "svg") as SVGSVGElement;
    this.curveSvg.setAttribute("class", "curve");
    this.curveSvg.setAttribute("width", String(CURVE_SIZE.width));
    this.curveSvg.setAttribute("height", String(CURVE_SIZE.height));
    side.appendChild(this.curveSvg);

    const clustersHeader = el(doc, "div", "clusters-header");
    clustersHeader.textContent = "Global explanation";
    side.appendChild(clustersHeader);
    this.clusterList = el(doc, "ul", "cluster-list");
    side.appendChild(this.clusterList);

    const resetBtn = el(doc, "button", "reset");
    resetBtn.textContent = "new session";
    resetBtn.addEventListener("click", () => void this.reset());
    side.appendChild(resetBtn);

    this.store.subscribe((ui) => this.render(ui));
  }

  async init(): Promise<void> {
    await this.refresh();
  }

  async refresh(): Promise<void> {
    try {
      const state = await this.client.getState();
      this.store.applyState(state);
    } catch (err) {
      this.store.setError(describeError(err));
    }
  }

  async submitLabel(label: Label): Promise<void> {
    const ui = this.store.current;
    if (ui.state === null || ui.pendingIndex === null) return;
    const request = {
      model_version: ui.state.model_version,
      label,
      index: ui.pendingIndex,
    };
    try {
      const next = await this.client.postLabel(request);
      this.store.applyState(next);
    } catch (err) {
      if (err instanceof VersionConflictError) {
        this.store.markStale(err.message);
        try {
          const fresh = await this.client.getState();
          this.store.applyState(fresh);
          this.store.setError(
            "Another client updated the model first. The view has been " +
              "refreshed; please confirm your label again.",
          );
        } catch (refreshErr) {
          this.store.setError(describeError(refreshErr));
        }
        return;
      }
      this.store.setError(describeError(err));
    }
  }

  async reset(seed?: number): Promise<void> {
    try {
      const state = await this.client.postReset(
        seed === undefined ? {} : { seed },
      );
      this.store.replaceState(state);
    } catch (err) {
      this.store.setError(describeError(err));
    }
  }

  render(ui: UiState): void {
    if (ui.error !== null) {
      this.banner.textContent = ui.error;
      this.banner.className = "banner";
    } else {
      this.banner.textContent = "";
      this.banner.className = "banner hidden";
    }

    const state = ui.state;
    if (state === null) {
      this.status.textContent = "loading…";
      return;
    }

    const staleNote = ui.stale ? " [STALE]" : "";
    this.status.textContent =
      `model version ${state.model_version}${staleNote} | ` +
      `F1 ${state.f1.toFixed(4)} | ` +
      `${state.labeled_indices.length} labels`;
    this.status.setAttribute("data-model-version", String(state.model_version));
    this.status.setAttribute("data-stale", String(ui.stale));

    const surfaceKey = `${state.surface.model_version}:${state.surface.resolution}`;
    const drawnKey =
      `${this.surfaceLayer.getAttribute("data-model-version")}:` +
      `${this.surfaceLayer.getAttribute("data-resolution")}`;
    if (surfaceKey !== drawnKey) {
      renderSurface(this.surfaceLayer, state.surface, this.scale);
    }

    renderExplanation(
      this.explanationLayer,
      state.explanation.clusters,
      state.pool,
      this.scale,
    );
    renderScatter(this.scatterLayer, state.pool, state.extra_points, this.scale, {
      showTruth: ui.showTruth,
      pendingIndex: ui.pendingIndex,
      onPointClick: (index) => this.store.selectPoint(index),
    });
    renderCurve(this.curveSvg, state.f1_history, CURVE_SIZE);

    this.clusterList.replaceChildren();
    const doc = this.clusterList.ownerDocument;
    for (const cluster of state.explanation.clusters) {
      const item = el(doc, "li", "cluster-item");
      item.textContent = cluster.description;
      this.clusterList.appendChild(item);
    }

    if (ui.pendingIndex !== null) {
      this.chooser.className = "chooser";
      this.chooserText.textContent = `point #${ui.pendingIndex}: `;
    } else {
      this.chooser.className = "chooser hidden";
      this.chooserText.textContent = "";
    }
  }
}

function describeError(err: unknown): string {
  if (err instanceof PayloadError) {
    return `Bad response from server, view left unchanged: ${err.message}`;
  }
  if (err instanceof Error) {
    return err.message;
  }
  return String(err);
}

export function mount(root: HTMLElement, baseUrl = ""): App {
  const app = new App(root, new ApiClient(baseUrl));
  void app.init();
  return app;
}
