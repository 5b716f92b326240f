/** Page assembly and data orchestration.
 *
 * One AppState drives everything and lives in the URL query string. Fetches
 * are guarded twice: a per-slot sequence number drops out-of-order responses,
 * and a search response is applied only if the state it was requested for is
 * still the current state. A snapshot id change between responses surfaces a
 * refresh prompt instead of silently mixing corpus versions.
 */

import { api, ApiError, type StatsResponse, type TrendPoint } from "./api.js";
import { renderClusterChart, renderVolumeChart } from "./charts.js";
import { clear, el } from "./dom.js";
import { renderResults } from "./resultsTable.js";
import {
  clearFieldErrors,
  renderSearchForm,
  showFieldErrors,
  type SearchFormElements,
} from "./searchForm.js";
import {
  type AppState,
  type Sort,
  hasQuery,
  parseState,
  searchParams,
  serializeState,
} from "./state.js";

const CLUSTER_WINDOW_DAYS = 90;

export interface Controller {
  /** Resolves when the work started by the latest interaction settles. */
  idle(): Promise<void>;
  getState(): AppState;
}

function addDays(day: string, delta: number): string {
  const t = new Date(Date.parse(`${day}T00:00:00Z`) + delta * 86_400_000);
  return t.toISOString().slice(0, 10);
}

function perDayPoints(stats: StatsResponse): TrendPoint[] {
  return Object.entries(stats.per_day)
    .map(([day, count]) => ({ day, count }))
    .sort((a, b) => (a.day < b.day ? -1 : 1));
}

export function init(root: HTMLElement, win: Window = window): Controller {
  let state: AppState = parseState(win.location.search);
  let snapshot: string | null = null;
  const seq = { page: 0, search: 0 };

  const banners = el("div", { class: "banners", "data-role": "banners" });
  const statsLine = el("p", { class: "stats-line", "data-role": "stats" }, ["Loading…"]);
  const volumeCard = el("div", { class: "chart-body", "data-role": "volume-chart" });
  const clusterCard = el("div", { class: "chart-body", "data-role": "cluster-chart" });
  const formContainer = el("div", { "data-role": "search-form" });
  const resultsContainer = el("div", { "data-role": "results" });

  clear(root);
  root.append(
    banners,
    el("header", { class: "page-header" }, [el("h1", {}, ["mpox tweet monitor"]), statsLine]),
    el("section", { class: "cards" }, [
      el("div", { class: "card" }, [el("h2", {}, ["Tweet volume"]), volumeCard]),
      el("div", { class: "card" }, [el("h2", {}, ["Cluster proportions"]), clusterCard]),
    ]),
    el("section", { class: "card" }, [
      el("h2", {}, ["Search the corpus"]),
      formContainer,
      resultsContainer,
    ]),
  );

  function showBanner(key: string, text: string, actionLabel: string, action: () => void): void {
    hideBanner(key);
    const button = el("button", { type: "button" }, [actionLabel]);
    button.addEventListener("click", action);
    banners.append(el("div", { class: "banner", "data-banner": key }, [el("span", {}, [text]), button]));
  }

  function hideBanner(key: string): void {
    banners.querySelector(`[data-banner="${key}"]`)?.remove();
  }

  function noteSnapshot(id: string): void {
    if (snapshot === null) {
      snapshot = id;
      return;
    }
    if (id !== snapshot) {
      showBanner("stale", "The corpus changed on the server.", "Reload data", () => {
        snapshot = null;
        hideBanner("stale");
        pending = loadPage();
      });
    }
  }

  function apiDownBanner(): void {
    showBanner("api-down", "The API is unreachable.", "Retry", () => {
      pending = loadPage();
    });
  }

  let form: SearchFormElements;

  function pushUrl(): void {
    const qs = serializeState(state);
    win.history.pushState(null, "", qs ? `?${qs}` : win.location.pathname);
  }

  async function runSearch(): Promise<void> {
    if (!hasQuery(state)) {
      clear(resultsContainer);
      return;
    }
    const token = ++seq.search;
    const requested = serializeState(state);
    try {
      const response = await api.search(searchParams(state));
      if (token !== seq.search || serializeState(state) !== requested) return;
      noteSnapshot(response.snapshot_id);
      hideBanner("api-down");
      renderResults(resultsContainer, response, state, {
        onSort: (sort: Sort) => {
          state = { ...state, sort, page: 1 };
          form.sortSelect.value = sort;
          pushUrl();
          pending = runSearch();
        },
        onPage: (page: number) => {
          state = { ...state, page };
          pushUrl();
          pending = runSearch();
        },
      });
    } catch (err) {
      if (token !== seq.search) return;
      if (err instanceof ApiError && err.status === 400) {
        showFieldErrors(form, err.errors);
      } else if (err instanceof ApiError) {
        showBanner("api-error", `Search failed (HTTP ${err.status}).`, "Dismiss", () =>
          hideBanner("api-error"),
        );
      } else {
        apiDownBanner();
      }
    }
  }

  async function loadCharts(stats: StatsResponse): Promise<void> {
    if (stats.total === 0 || stats.date_max === null || stats.date_min === null) {
      clear(volumeCard);
      clear(clusterCard);
      volumeCard.append(el("p", { class: "empty-state" }, ["The corpus is empty. Ingest a dataset to see volume."]));
      clusterCard.append(el("p", { class: "empty-state" }, ["The corpus is empty. No clusters to show."]));
      return;
    }
    renderVolumeChart(volumeCard, perDayPoints(stats));
    const from =
      state.from ??
      (addDays(stats.date_max, -(CLUSTER_WINDOW_DAYS - 1)) > stats.date_min
        ? addDays(stats.date_max, -(CLUSTER_WINDOW_DAYS - 1))
        : stats.date_min);
    const to = state.to ?? stats.date_max;
    const response = await api.clusterSeries(from, to);
    noteSnapshot(response.snapshot_id);
    renderClusterChart(clusterCard, response.points);
  }

  async function loadPage(): Promise<void> {
    const token = ++seq.page;
    hideBanner("api-down");
    try {
      const stats = await api.stats();
      if (token !== seq.page) return;
      noteSnapshot(stats.snapshot_id);
      clear(statsLine);
      statsLine.append(
        el("strong", {}, [String(stats.total)]),
        " tweets",
        stats.date_min && stats.date_max ? ` · ${stats.date_min} to ${stats.date_max}` : "",
        " · snapshot ",
        el("code", { "data-role": "snapshot" }, [stats.snapshot_id.slice(0, 12)]),
      );
      await loadCharts(stats);
      if (token !== seq.page) return;
      await runSearch();
    } catch (err) {
      if (token !== seq.page) return;
      if (!(err instanceof ApiError)) {
        apiDownBanner();
        return;
      }
      showBanner("api-error", `Loading failed (HTTP ${err.status}).`, "Retry", () => {
        hideBanner("api-error");
        pending = loadPage();
      });
    }
  }

  form = renderSearchForm(formContainer, state, (formState) => {
    state = { ...state, ...formState, page: 1 };
    clearFieldErrors(form);
    pushUrl();
    pending = runSearch();
  });

  win.addEventListener("popstate", () => {
    state = parseState(win.location.search);
    clear(formContainer);
    form = renderSearchForm(formContainer, state, (formState) => {
      state = { ...state, ...formState, page: 1 };
      pushUrl();
      pending = runSearch();
    });
    pending = runSearch();
  });

  let pending: Promise<void> = loadPage();

  return {
    idle: () => pending,
    getState: () => ({ ...state, keywords: [...state.keywords] }),
  };
}

// Browser entry point; tests import init() and drive it directly instead.
if (typeof document !== "undefined" && document.getElementById("app")) {
  init(document.getElementById("app")!);
}
