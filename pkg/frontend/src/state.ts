/** All view state lives in the URL query string, so every view is a link.
 *
 * parse/serialize round-trip; defaults are omitted from the string so a
 * pristine dashboard has a bare URL.
 */

import type { QueryValue } from "./api.js";

export const MAX_KEYWORDS = 3;

export type Combine = "all" | "any";
export type Sort = "recency_desc" | "likes_desc" | "retweets_desc";

export interface AppState {
  keywords: string[];
  combine: Combine;
  minLikes: number;
  minReplies: number;
  minRetweets: number;
  from: string | null;
  to: string | null;
  sort: Sort;
  page: number;
}

export const DEFAULT_STATE: AppState = {
  keywords: [],
  combine: "all",
  minLikes: 0,
  minReplies: 0,
  minRetweets: 0,
  from: null,
  to: null,
  sort: "recency_desc",
  page: 1,
};

const SORTS: Sort[] = ["recency_desc", "likes_desc", "retweets_desc"];
const DAY_RE = /^\d{4}-\d{2}-\d{2}$/;

function cleanKeywords(values: string[]): string[] {
  return values
    .map((v) => v.trim())
    .filter((v) => v !== "")
    .slice(0, MAX_KEYWORDS);
}

function nonNegInt(raw: string | null, fallback: number): number {
  if (raw === null) return fallback;
  const n = Number(raw);
  return Number.isInteger(n) && n >= 0 ? n : fallback;
}

function dayOrNull(raw: string | null): string | null {
  return raw !== null && DAY_RE.test(raw) ? raw : null;
}

/** Parses a location.search string; unknown or malformed params fall back. */
export function parseState(search: string): AppState {
  const q = new URLSearchParams(search);
  const sortRaw = q.get("sort");
  const pageRaw = nonNegInt(q.get("page"), DEFAULT_STATE.page);
  return {
    keywords: cleanKeywords(q.getAll("k")),
    combine: q.get("combine") === "any" ? "any" : "all",
    minLikes: nonNegInt(q.get("min_likes"), 0),
    minReplies: nonNegInt(q.get("min_replies"), 0),
    minRetweets: nonNegInt(q.get("min_retweets"), 0),
    from: dayOrNull(q.get("from")),
    to: dayOrNull(q.get("to")),
    sort: SORTS.includes(sortRaw as Sort) ? (sortRaw as Sort) : DEFAULT_STATE.sort,
    page: pageRaw >= 1 ? pageRaw : 1,
  };
}

/** Serializes to a query string (no leading "?"), omitting default values. */
export function serializeState(state: AppState): string {
  const q = new URLSearchParams();
  for (const k of cleanKeywords(state.keywords)) q.append("k", k);
  if (state.combine !== DEFAULT_STATE.combine) q.set("combine", state.combine);
  if (state.minLikes > 0) q.set("min_likes", String(state.minLikes));
  if (state.minReplies > 0) q.set("min_replies", String(state.minReplies));
  if (state.minRetweets > 0) q.set("min_retweets", String(state.minRetweets));
  if (state.from) q.set("from", state.from);
  if (state.to) q.set("to", state.to);
  if (state.sort !== DEFAULT_STATE.sort) q.set("sort", state.sort);
  if (state.page !== 1) q.set("page", String(state.page));
  return q.toString();
}

/** API parameters for /api/search; never emits more than MAX_KEYWORDS `k`s. */
export function searchParams(state: AppState): Record<string, QueryValue> {
  return {
    k: cleanKeywords(state.keywords),
    combine: state.combine,
    min_likes: state.minLikes > 0 ? state.minLikes : null,
    min_replies: state.minReplies > 0 ? state.minReplies : null,
    min_retweets: state.minRetweets > 0 ? state.minRetweets : null,
    from: state.from,
    to: state.to,
    sort: state.sort,
    page: state.page,
  };
}

export function hasQuery(state: AppState): boolean {
  return cleanKeywords(state.keywords).length > 0;
}
