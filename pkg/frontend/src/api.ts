/** Typed client for the dashboard's HTTP API.
 *
 * The UI computes nothing: every number rendered comes straight out of one
 * of these response shapes, which mirror the server's wire format field for
 * field.
 */

export interface FieldError {
  field: string;
  message: string;
}

export interface Sentiment {
  raw: number;
  polarity: "negative" | "neutral" | "positive";
}

export interface TweetItem {
  id: string;
  created_at: string;
  day: string;
  text: string;
  author_handle: string;
  location: string;
  like_count: number;
  reply_count: number;
  retweet_count: number;
  lang: string;
  source: string;
  source_file: string;
  counts_imputed: boolean;
  cluster_label: string;
  sentiment: Sentiment;
}

export interface StatsResponse {
  total: number;
  per_day: Record<string, number>;
  date_min: string | null;
  date_max: string | null;
  snapshot_id: string;
}

export interface SearchResponse {
  total_matches: number;
  page: number;
  per_page: number;
  items: TweetItem[];
  snapshot_id: string;
}

export interface TweetDetailResponse {
  tweet: TweetItem;
  matched_terms: string[];
  snapshot_id: string;
}

export interface ClusterPoint {
  day: string;
  label: string;
  proportion: number;
  count: number;
}

export interface ClusterSeriesResponse {
  points: ClusterPoint[];
  snapshot_id: string;
}

export interface TrendPoint {
  day: string;
  count: number;
}

export interface TrendResponse {
  keyword: string;
  points: TrendPoint[];
  snapshot_id: string;
}

export interface VolumeResponse {
  a_from: string;
  a_to: string;
  b_from: string;
  b_to: string;
  count_a: number;
  count_b: number;
  ratio: number | null;
  snapshot_id: string;
}

/** A non-2xx API response, carrying the server's field-level errors. */
export class ApiError extends Error {
  readonly status: number;
  readonly errors: FieldError[];

  constructor(status: number, errors: FieldError[]) {
    super(errors.map((e) => `${e.field}: ${e.message}`).join("; ") || `HTTP ${status}`);
    this.status = status;
    this.errors = errors;
  }
}

export type QueryValue = string | number | string[] | null | undefined;

/** Builds a query string; array values repeat the key, blanks are dropped. */
export function buildQuery(params: Record<string, QueryValue>): string {
  const out = new URLSearchParams();
  for (const [key, value] of Object.entries(params)) {
    if (value === null || value === undefined || value === "") continue;
    if (Array.isArray(value)) {
      for (const v of value) if (v !== "") out.append(key, v);
    } else {
      out.append(key, String(value));
    }
  }
  const text = out.toString();
  return text ? `?${text}` : "";
}

async function request<T>(path: string, params: Record<string, QueryValue> = {}): Promise<T> {
  const response = await fetch(path + buildQuery(params), {
    headers: { accept: "application/json" },
  });
  if (!response.ok) {
    let errors: FieldError[] = [];
    try {
      const body = await response.json();
      if (Array.isArray(body?.errors)) errors = body.errors;
    } catch {
      // non-JSON error body; fall through with the bare status
    }
    throw new ApiError(response.status, errors);
  }
  return (await response.json()) as T;
}

export const api = {
  stats: (): Promise<StatsResponse> => request("/api/stats"),

  search: (params: Record<string, QueryValue>): Promise<SearchResponse> =>
    request("/api/search", params),

  tweet: (id: string): Promise<TweetDetailResponse> =>
    request(`/api/tweets/${encodeURIComponent(id)}`),

  clusterSeries: (from?: string | null, to?: string | null): Promise<ClusterSeriesResponse> =>
    request("/api/clusters/timeseries", { from, to }),

  trend: (keyword: string, from?: string | null, to?: string | null): Promise<TrendResponse> =>
    request("/api/trends", { k: keyword, from, to }),

  volume: (
    aFrom: string,
    aTo: string,
    bFrom: string,
    bTo: string,
  ): Promise<VolumeResponse> =>
    request("/api/volume", { a_from: aFrom, a_to: aTo, b_from: bFrom, b_to: bTo }),
};
