/** Search results: active-filter summary, the table itself, pagination.
 *
 * Rows are exactly the API's items in API order; "total matches" and the
 * page number are echoed response fields, not client-side computations.
 * Sortable column headers re-query with the matching API sort mode.
 */

import type { SearchResponse } from "./api.js";
import { clear, el } from "./dom.js";
import type { AppState, Sort } from "./state.js";

export interface TableCallbacks {
  onSort(sort: Sort): void;
  onPage(page: number): void;
}

const SORTABLE: Array<{ title: string; sort: Sort }> = [
  { title: "Date", sort: "recency_desc" },
  { title: "Likes", sort: "likes_desc" },
  { title: "Retweets", sort: "retweets_desc" },
];

function filterSummary(state: AppState): string {
  const parts: string[] = [];
  parts.push(state.keywords.join(state.combine === "all" ? " AND " : " OR "));
  if (state.minLikes > 0) parts.push(`likes >= ${state.minLikes}`);
  if (state.minReplies > 0) parts.push(`replies >= ${state.minReplies}`);
  if (state.minRetweets > 0) parts.push(`retweets >= ${state.minRetweets}`);
  if (state.from && state.to) parts.push(`${state.from} to ${state.to}`);
  else if (state.from) parts.push(`from ${state.from}`);
  else if (state.to) parts.push(`until ${state.to}`);
  const sortName = { recency_desc: "newest", likes_desc: "most liked", retweets_desc: "most retweeted" }[
    state.sort
  ];
  parts.push(`sorted by ${sortName}`);
  return parts.join(" · ");
}

function header(title: string, sort: Sort | null, current: Sort, cb: TableCallbacks): HTMLElement {
  if (sort === null) return el("th", {}, [title]);
  const button = el(
    "button",
    { class: `sort-header${sort === current ? " active" : ""}`, "data-sort": sort, type: "button" },
    [title],
  );
  button.addEventListener("click", () => cb.onSort(sort));
  return el("th", {}, [button]);
}

export function renderResults(
  container: Element,
  response: SearchResponse,
  state: AppState,
  cb: TableCallbacks,
): void {
  clear(container);

  container.append(
    el("p", { class: "filter-summary", "data-role": "filters" }, [filterSummary(state)]),
    el("p", { class: "match-count" }, [
      el("strong", {}, [String(response.total_matches)]),
      ` match${response.total_matches === 1 ? "" : "es"}`,
    ]),
  );

  if (response.items.length === 0) {
    container.append(el("p", { class: "empty-state" }, ["No tweets match these filters."]));
    return;
  }

  const head = el("tr", {}, [
    header("Date", "recency_desc", state.sort, cb),
    el("th", { class: "col-text" }, ["Text"]),
    header("Likes", "likes_desc", state.sort, cb),
    el("th", {}, ["Replies"]),
    header("Retweets", "retweets_desc", state.sort, cb),
    el("th", {}, ["Location"]),
    el("th", {}, ["Cluster"]),
  ]);

  const body = el("tbody");
  for (const item of response.items) {
    body.append(
      el("tr", { "data-id": item.id }, [
        el("td", { class: "col-date" }, [item.day]),
        el("td", { class: "col-text" }, [item.text]),
        el("td", { class: "num" }, [String(item.like_count)]),
        el("td", { class: "num" }, [String(item.reply_count)]),
        el("td", { class: "num" }, [String(item.retweet_count)]),
        el("td", {}, [item.location === "" ? "(none)" : item.location]),
        el("td", {}, [el("span", { class: `tag tag-${item.cluster_label}` }, [item.cluster_label])]),
      ]),
    );
  }

  container.append(
    el("div", { class: "table-wrap" }, [
      el("table", { class: "results" }, [el("thead", {}, [head]), body]),
    ]),
  );

  const prev = el("button", { type: "button", "data-role": "prev-page" }, ["Previous"]);
  const next = el("button", { type: "button", "data-role": "next-page" }, ["Next"]);
  prev.disabled = response.page <= 1;
  next.disabled = response.page * response.per_page >= response.total_matches;
  prev.addEventListener("click", () => cb.onPage(response.page - 1));
  next.addEventListener("click", () => cb.onPage(response.page + 1));
  container.append(
    el("div", { class: "pagination" }, [
      prev,
      el("span", { class: "page-label" }, [`Page ${response.page}`]),
      next,
    ]),
  );
}
