import { afterEach, beforeEach, describe, expect, it, vi } from "vitest";

import { init, type Controller } from "../src/main";
import { fixture, settle, stubFetch, stubFetchDown, type Recorded } from "./helpers";

const stats = fixture("stats");
const clusters = fixture("clusters_3day");
const hoaxSearch = fixture("search_hoax");
const page2Search = fixture("search_page2");
const badRequest = fixture("search_bad_request");

function defaultRoutes(url: URL): Recorded | undefined {
  if (url.pathname === "/api/stats") return stats;
  if (url.pathname === "/api/clusters/timeseries") return clusters;
  if (url.pathname === "/api/search") return hoaxSearch;
  return undefined;
}

function mount(search = "/"): { root: HTMLElement; controller: Controller } {
  window.history.replaceState(null, "", search);
  const root = document.createElement("div");
  document.body.append(root);
  const controller = init(root, window);
  return { root, controller };
}

beforeEach(() => {
  document.body.innerHTML = "";
});

afterEach(() => {
  vi.unstubAllGlobals();
  window.history.replaceState(null, "", "/");
});

describe("front page", () => {
  it("shows corpus stats, volume chart, and cluster chart from the API", async () => {
    const { calls } = stubFetch(defaultRoutes);
    const { root, controller } = mount();
    await controller.idle();

    const statsText = root.querySelector('[data-role="stats"]')?.textContent ?? "";
    expect(statsText).toContain(String(stats.body.total));
    expect(statsText).toContain("2022-05-18 to 2024-06-14");
    expect(root.querySelector('[data-role="snapshot"]')?.textContent).toBe(
      stats.body.snapshot_id.slice(0, 12),
    );

    const volumeDots = root.querySelectorAll('[data-role="volume-chart"] circle.pt');
    expect(volumeDots).toHaveLength(Object.keys(stats.body.per_day).length);

    const clusterDots = root.querySelectorAll('[data-role="cluster-chart"] circle.pt');
    expect(clusterDots).toHaveLength(clusters.body.points.length);

    const clusterCall = calls.find((u) => u.pathname === "/api/clusters/timeseries")!;
    expect(clusterCall.searchParams.get("from")).toBe("2024-03-17");
    expect(clusterCall.searchParams.get("to")).toBe("2024-06-14");
  });

  it("runs the search from the URL and renders items in response order", async () => {
    const { calls } = stubFetch(defaultRoutes);
    const { root, controller } = mount("/?k=hoax&k=mpox&combine=any&sort=likes_desc");
    await controller.idle();

    const rows = Array.from(root.querySelectorAll("tbody tr"));
    expect(rows.map((r) => r.getAttribute("data-id"))).toEqual(
      hoaxSearch.body.items.map((i: { id: string }) => i.id),
    );
    const searchCall = calls.find((u) => u.pathname === "/api/search")!;
    expect(searchCall.searchParams.getAll("k")).toEqual(["hoax", "mpox"]);
    expect(searchCall.searchParams.get("combine")).toBe("any");
  });

  it("never sends more than three k parameters even from a hostile URL", async () => {
    const { calls } = stubFetch(defaultRoutes);
    const { controller } = mount("/?k=a&k=b&k=c&k=d&k=e");
    await controller.idle();
    const searchCall = calls.find((u) => u.pathname === "/api/search")!;
    expect(searchCall.searchParams.getAll("k")).toHaveLength(3);
  });
});

describe("resilience", () => {
  it("shows a retry banner when the API is down, and recovers on retry", async () => {
    stubFetchDown();
    const { root, controller } = mount();
    await controller.idle();
    await settle();

    const banner = root.querySelector('[data-banner="api-down"]');
    expect(banner?.textContent).toContain("unreachable");

    stubFetch(defaultRoutes);
    (banner!.querySelector("button") as HTMLButtonElement).click();
    await controller.idle();
    expect(root.querySelector('[data-banner="api-down"]')).toBeNull();
    expect(root.querySelector('[data-role="stats"]')?.textContent).toContain(
      String(stats.body.total),
    );
  });

  it("renders explicit empty states for an empty corpus and skips the cluster fetch", async () => {
    const emptyStats: Recorded = {
      status: 200,
      body: {
        total: 0,
        per_day: {},
        date_min: null,
        date_max: null,
        snapshot_id: "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855",
      },
    };
    const { calls } = stubFetch((url) =>
      url.pathname === "/api/stats" ? emptyStats : defaultRoutes(url),
    );
    const { root, controller } = mount();
    await controller.idle();

    expect(root.querySelector('[data-role="volume-chart"] .empty-state')).not.toBeNull();
    expect(root.querySelector('[data-role="cluster-chart"] .empty-state')).not.toBeNull();
    expect(root.querySelector("svg")).toBeNull();
    expect(calls.some((u) => u.pathname === "/api/clusters/timeseries")).toBe(false);
  });

  it("maps a 400 from search onto the form fields", async () => {
    stubFetch((url) => (url.pathname === "/api/search" ? badRequest : defaultRoutes(url)));
    const { root, controller } = mount("/?k=hoax");
    await controller.idle();

    expect(
      root.querySelector('.field-error[data-field="keywords"]')?.textContent,
    ).toContain("at most 3 keywords");
    expect(root.querySelector('.field-error[data-field="min_likes"]')).not.toBeNull();
  });

  it("prompts to reload when the snapshot changes between responses", async () => {
    const movedClusters: Recorded = {
      status: 200,
      body: { ...clusters.body, snapshot_id: "0000000000000000000000000000000000000000000000000000000000000000" },
    };
    stubFetch((url) =>
      url.pathname === "/api/clusters/timeseries" ? movedClusters : defaultRoutes(url),
    );
    const { root, controller } = mount();
    await controller.idle();
    expect(root.querySelector('[data-banner="stale"]')?.textContent).toContain("changed");
  });
});

describe("interactions", () => {
  it("steps to the next page through the API and the URL", async () => {
    const { calls } = stubFetch((url) => {
      if (url.pathname === "/api/search") {
        return url.searchParams.get("page") === "2" ? page2Search : hoaxSearch;
      }
      return defaultRoutes(url);
    });
    const { root, controller } = mount("/?k=mpox");
    await controller.idle();

    (root.querySelector('[data-role="next-page"]') as HTMLButtonElement).click();
    await controller.idle();

    expect(window.location.search).toContain("page=2");
    const lastSearch = calls.filter((u) => u.pathname === "/api/search").pop()!;
    expect(lastSearch.searchParams.get("page")).toBe("2");
    expect(root.querySelector(".page-label")?.textContent).toBe("Page 2");
    expect(root.querySelectorAll("tbody tr")).toHaveLength(page2Search.body.items.length);
  });

  it("re-queries with the clicked column's sort and resets to page one", async () => {
    const { calls } = stubFetch(defaultRoutes);
    const { root, controller } = mount("/?k=mpox&page=3");
    await controller.idle();

    (root.querySelector('button[data-sort="retweets_desc"]') as HTMLButtonElement).click();
    await controller.idle();

    const lastSearch = calls.filter((u) => u.pathname === "/api/search").pop()!;
    expect(lastSearch.searchParams.get("sort")).toBe("retweets_desc");
    expect(lastSearch.searchParams.get("page")).toBe("1");
    expect(window.location.search).toContain("sort=retweets_desc");
  });

  it("rebuilds the form and results on back/forward navigation", async () => {
    stubFetch(defaultRoutes);
    const { root, controller } = mount("/?k=hoax");
    await controller.idle();

    window.history.replaceState(null, "", "/?k=mpox&combine=any");
    window.dispatchEvent(new Event("popstate"));
    await controller.idle();

    const inputs = Array.from(
      root.querySelectorAll("input.keyword-slot"),
    ) as HTMLInputElement[];
    expect(inputs.map((i) => i.value)).toEqual(["mpox", "", ""]);
    expect(controller.getState().combine).toBe("any");
    expect(root.querySelectorAll("tbody tr").length).toBeGreaterThan(0);
  });
});
