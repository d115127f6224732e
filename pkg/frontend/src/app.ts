import { ApiClient, ApiError } from "./api";
import {
  AppState,
  MAX_N,
  View,
  VIEWS,
  builderRequest,
  decodeHash,
  defaultState,
  encodeHash,
  normalizeWeights,
  toggleFavorite,
  toggleMinus,
  togglePlus,
} from "./state";
import type { BeerSummary, RankedRow } from "./types";
import {
  renderBeerOptions,
  renderError,
  renderFavorites,
  renderFlavorChips,
  renderFlavorScores,
  renderResults,
  renderScatter,
  renderSliders,
} from "./views";

const VIEW_LABELS: Record<View, string> = {
  similar: "Similar",
  describe: "Describe",
  builder: "Builder",
  profile: "Profile",
  map: "Flavor map",
};

function describeFailure(err: unknown): string {
  if (err instanceof ApiError) return err.message;
  return "server unreachable";
}

export class App {
  state: AppState = defaultState();
  private beers: BeerSummary[] = [];
  private flavors: string[] = [];
  private seq = 0;
  private muteHash = false;

  constructor(
    private root: HTMLElement,
    private api: ApiClient,
  ) {}

  async start(): Promise<void> {
    this.state = decodeHash(window.location.hash);
    window.addEventListener("hashchange", () => this.onHashChange());
    this.root.addEventListener("click", (ev) => this.onClick(ev));
    this.root.addEventListener("change", (ev) => this.onChange(ev));
    this.root.addEventListener("input", (ev) => this.onInput(ev));
    await this.loadCatalogs();
  }

  private async loadCatalogs(): Promise<void> {
    this.root.innerHTML = `<p class="empty">loading…</p>`;
    try {
      [this.beers, this.flavors] = await Promise.all([this.api.beers(), this.api.flavors()]);
    } catch (err) {
      this.root.innerHTML =
        renderError(describeFailure(err)) +
        `<button class="retry-start">retry</button>`;
      return;
    }
    this.renderShell();
    void this.refresh();
  }

  /** Apply a state change: repaint controls, sync the URL, re-query. */
  private apply(next: AppState): void {
    this.state = next;
    this.writeHash();
    this.renderShell();
    void this.refresh();
  }

  private writeHash(): void {
    const hash = encodeHash(this.state);
    if (window.location.hash !== hash) {
      this.muteHash = true;
      window.location.hash = hash;
    }
  }

  private onHashChange(): void {
    if (this.muteHash) {
      this.muteHash = false;
      return;
    }
    this.state = decodeHash(window.location.hash);
    this.renderShell();
    void this.refresh();
  }

  private onClick(ev: Event): void {
    const target = ev.target as HTMLElement | null;
    if (!target) return;
    const tab = target.closest<HTMLElement>("[data-view]");
    if (tab && tab.dataset.view) {
      this.apply({ ...this.state, view: tab.dataset.view as View });
      return;
    }
    if (target.classList.contains("retry-start")) {
      void this.loadCatalogs();
      return;
    }
    if (target.classList.contains("retry")) {
      void this.refresh();
      return;
    }
    if (target.classList.contains("rebase") && target.dataset.beer) {
      const view =
        this.state.view === "profile" || this.state.view === "map" ? "similar" : this.state.view;
      this.apply({ ...this.state, view, base: target.dataset.beer });
      return;
    }
    if (
      (target.classList.contains("fav") || target.classList.contains("unfav")) &&
      target.dataset.beer
    ) {
      this.apply(toggleFavorite(this.state, target.dataset.beer));
      return;
    }
    if (target.classList.contains("fav-pick") && target.dataset.beer) {
      this.apply({ ...this.state, base: target.dataset.beer });
      return;
    }
    if (target.classList.contains("chip") && target.dataset.tag) {
      this.apply(this.cycleTag(target.dataset.tag));
      return;
    }
  }

  /** Builder chips cycle off -> plus -> minus -> off; sets stay disjoint. */
  private cycleTag(tag: string): AppState {
    if (this.state.plus.includes(tag)) return toggleMinus(this.state, tag);
    if (this.state.minus.includes(tag)) return toggleMinus(this.state, tag);
    return togglePlus(this.state, tag);
  }

  private onChange(ev: Event): void {
    const target = ev.target as HTMLElement | null;
    if (target instanceof HTMLSelectElement && target.id === "base-select") {
      this.apply({ ...this.state, base: target.value || null });
    } else if (target instanceof HTMLSelectElement && target.id === "dir-select") {
      this.apply({ ...this.state, dir: target.value === "tail" ? "tail" : "top" });
    } else if (target instanceof HTMLInputElement && target.id === "n-input") {
      const n = Math.min(MAX_N, Math.max(1, Math.round(Number(target.value) || 1)));
      this.apply({ ...this.state, n });
    }
  }

  private onInput(ev: Event): void {
    const target = ev.target as HTMLElement | null;
    if (target instanceof HTMLInputElement && target.type === "range" && target.dataset.tag) {
      const weights = { ...this.state.weights, [target.dataset.tag]: Number(target.value) };
      const row = target.closest(".slider-row")?.querySelector(".value");
      if (row) row.textContent = target.value;
      // Live re-query without a full repaint so the slider keeps focus.
      this.state = { ...this.state, weights };
      this.writeHash();
      void this.refresh();
    }
  }

  private renderShell(): void {
    const tabs = VIEWS.map((v) => {
      const cls = v === this.state.view ? "tab active" : "tab";
      return `<button class="${cls}" data-view="${v}">${VIEW_LABELS[v]}</button>`;
    }).join("");
    this.root.innerHTML =
      `<header><h1>brewvec explorer</h1><nav>${tabs}</nav></header>` +
      `<section class="controls">${this.renderControls()}</section>` +
      `<section id="out" aria-live="polite"><p class="empty">loading…</p></section>` +
      this.renderFavoritesPanel();
  }

  private renderControls(): string {
    const basePicker =
      `<label>base beer <select id="base-select">` +
      renderBeerOptions(this.beers, this.state.base) +
      `</select></label>`;
    const nPicker = `<label>results <input id="n-input" type="number" min="1" max="${MAX_N}" value="${this.state.n}"></label>`;
    switch (this.state.view) {
      case "similar": {
        const dir =
          `<label>show <select id="dir-select">` +
          `<option value="top"${this.state.dir === "top" ? " selected" : ""}>most similar</option>` +
          `<option value="tail"${this.state.dir === "tail" ? " selected" : ""}>most dissimilar</option>` +
          `</select></label>`;
        return basePicker + dir + nPicker;
      }
      case "describe":
        return basePicker + nPicker;
      case "builder":
        return (
          basePicker +
          nPicker +
          `<div class="chips">` +
          renderFlavorChips(this.flavors, this.state.minus, this.state.plus) +
          `</div>` +
          `<p class="hint">click a flavor to add it (+), again to subtract it (&minus;), again to clear</p>`
        );
      case "profile":
        return (
          nPicker +
          `<div class="sliders">` +
          renderSliders(this.flavors, this.state.weights) +
          `</div>`
        );
      case "map":
        return "";
    }
  }

  private renderFavoritesPanel(): string {
    if (this.state.view === "map") return "";
    const list =
      this.state.favorites.length === 0
        ? `<p class="empty">star a result to keep it here</p>`
        : renderFavorites(this.state.favorites);
    return `<aside class="favs"><h2>favorites</h2>${list}</aside>`;
  }

  /** Fetch whatever the current view needs; stale responses are dropped. */
  async refresh(): Promise<void> {
    const token = ++this.seq;
    const out = this.root.querySelector("#out");
    if (!out) return;
    let html: string;
    try {
      html = await this.queryCurrentView();
    } catch (err) {
      if (token !== this.seq) return;
      out.innerHTML = renderError(describeFailure(err)) + `<button class="retry">retry</button>`;
      return;
    }
    if (token !== this.seq) return;
    out.innerHTML = html;
  }

  private async queryCurrentView(): Promise<string> {
    const { state } = this;
    switch (state.view) {
      case "similar": {
        if (!state.base) return `<p class="empty">pick a base beer</p>`;
        if (state.dir === "tail") {
          // Dissimilar = tail of the full ranking, worst first (no extra endpoint).
          const full = await this.api.similar(state.base, Math.min(MAX_N, this.beers.length));
          const tail: RankedRow[] = full.results.slice(-state.n).reverse();
          return renderResults(tail, state.favorites);
        }
        const res = await this.api.similar(state.base, state.n);
        return renderResults(res.results, state.favorites);
      }
      case "describe": {
        if (!state.base) return `<p class="empty">pick a beer</p>`;
        const res = await this.api.beerFlavors(state.base, state.n);
        return renderFlavorScores(res.results);
      }
      case "builder": {
        const plan = builderRequest(state);
        if (!plan) return `<p class="empty">pick a base beer</p>`;
        const res =
          plan.kind === "similar"
            ? await this.api.similar(plan.base, plan.n)
            : await this.api.arithmetic(plan.base, plan.minus, plan.plus, plan.n);
        return renderResults(res.results, state.favorites);
      }
      case "profile": {
        const flavors = normalizeWeights(state.weights);
        if (flavors.length === 0) return `<p class="empty">move a slider to start</p>`;
        const res = await this.api.profile(flavors, state.n);
        return renderResults(res.results, state.favorites);
      }
      case "map": {
        const points = await this.api.projection();
        return renderScatter(points);
      }
    }
  }
}
