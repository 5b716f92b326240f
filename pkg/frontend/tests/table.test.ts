import { beforeEach, describe, expect, it, vi } from "vitest";

import type { SearchResponse } from "../src/api";
import { renderResults } from "../src/resultsTable";
import { DEFAULT_STATE, type AppState } from "../src/state";
import { fixture } from "./helpers";

const hoax = fixture<SearchResponse>("search_hoax").body;
const page2 = fixture<SearchResponse>("search_page2").body;
const empty = fixture<SearchResponse>("search_empty").body;

const hoaxState: AppState = {
  ...DEFAULT_STATE,
  keywords: ["hoax", "mpox"],
  combine: "any",
  sort: "likes_desc",
};

function render(response: SearchResponse, state = hoaxState) {
  document.body.innerHTML = "";
  const cb = { onSort: vi.fn(), onPage: vi.fn() };
  renderResults(document.body, response, state, cb);
  return cb;
}

beforeEach(() => {
  document.body.innerHTML = "";
});

describe("table contents", () => {
  it("renders exactly the returned items, in response order", () => {
    render(hoax);
    const rows = Array.from(document.querySelectorAll("tbody tr"));
    expect(rows).toHaveLength(hoax.items.length);
    expect(rows.map((r) => r.getAttribute("data-id"))).toEqual(hoax.items.map((i) => i.id));
  });

  it("shows each field straight from the response", () => {
    render(hoax);
    const first = document.querySelector("tbody tr")!;
    const cells = Array.from(first.querySelectorAll("td")).map((td) => td.textContent);
    const item = hoax.items[0];
    expect(cells[0]).toBe(item.day);
    expect(cells[1]).toBe(item.text);
    expect(cells[2]).toBe(String(item.like_count));
    expect(cells[3]).toBe(String(item.reply_count));
    expect(cells[4]).toBe(String(item.retweet_count));
    expect(cells[5]).toBe(item.location === "" ? "(none)" : item.location);
    expect(cells[6]).toBe(item.cluster_label);
  });

  it("echoes the response's total match count", () => {
    render(hoax);
    expect(document.querySelector(".match-count")?.textContent).toContain(
      String(hoax.total_matches),
    );
  });

  it("renders an explicit empty state for zero matches", () => {
    render(empty, { ...hoaxState, keywords: ["absentword"] });
    expect(document.querySelector("tbody")).toBeNull();
    expect(document.querySelector(".empty-state")?.textContent).toMatch(/no tweets/i);
  });
});

describe("filter summary", () => {
  it("describes keywords, thresholds, range, and sort", () => {
    render(hoax, {
      ...hoaxState,
      minLikes: 10,
      from: "2024-04-01",
      to: "2024-04-30",
    });
    const summary = document.querySelector('[data-role="filters"]')?.textContent ?? "";
    expect(summary).toContain("hoax OR mpox");
    expect(summary).toContain("likes >= 10");
    expect(summary).toContain("2024-04-01 to 2024-04-30");
    expect(summary).toContain("most liked");
  });

  it("joins with AND when combine is all", () => {
    render(hoax, { ...hoaxState, combine: "all" });
    expect(document.querySelector('[data-role="filters"]')?.textContent).toContain(
      "hoax AND mpox",
    );
  });
});

describe("column sorting", () => {
  it("re-queries with the API sort mode of the clicked column", () => {
    const cb = render(hoax);
    (document.querySelector('button[data-sort="recency_desc"]') as HTMLButtonElement).click();
    expect(cb.onSort).toHaveBeenCalledWith("recency_desc");
    (document.querySelector('button[data-sort="retweets_desc"]') as HTMLButtonElement).click();
    expect(cb.onSort).toHaveBeenCalledWith("retweets_desc");
  });

  it("marks the active sort column", () => {
    render(hoax);
    expect(document.querySelector("button.sort-header.active")?.getAttribute("data-sort")).toBe(
      "likes_desc",
    );
  });
});

describe("pagination", () => {
  it("disables previous on page one and keeps next live while more remain", () => {
    render(hoax);
    const prev = document.querySelector('[data-role="prev-page"]') as HTMLButtonElement;
    const next = document.querySelector('[data-role="next-page"]') as HTMLButtonElement;
    expect(prev.disabled).toBe(true);
    expect(next.disabled).toBe(false);
  });

  it("steps page by one in each direction", () => {
    const cb = render(page2, { ...DEFAULT_STATE, keywords: ["mpox"], page: 2 });
    (document.querySelector('[data-role="prev-page"]') as HTMLButtonElement).click();
    expect(cb.onPage).toHaveBeenCalledWith(1);
    (document.querySelector('[data-role="next-page"]') as HTMLButtonElement).click();
    expect(cb.onPage).toHaveBeenCalledWith(3);
  });

  it("labels the page straight from the response", () => {
    render(page2, { ...DEFAULT_STATE, keywords: ["mpox"], page: 2 });
    expect(document.querySelector(".page-label")?.textContent).toBe("Page 2");
  });
});
