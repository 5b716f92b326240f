/** Shared test plumbing: recorded-fixture loading and a fetch stub. */

import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";
import { vi } from "vitest";

const here = dirname(fileURLToPath(import.meta.url));

export interface Recorded<T = any> {
  status: number;
  body: T;
}

/** Loads a response recorded from the real service by record_fixtures.py. */
export function fixture<T = any>(name: string): Recorded<T> {
  return JSON.parse(readFileSync(join(here, "fixtures", `${name}.json`), "utf8"));
}

export type RouteHandler = (url: URL) => Recorded | undefined;

/** Replaces global fetch; the handler serves recorded bodies per URL. */
export function stubFetch(handler: RouteHandler): { calls: URL[] } {
  const calls: URL[] = [];
  vi.stubGlobal("fetch", async (input: unknown) => {
    const url = new URL(String(input), "http://dashboard.test");
    calls.push(url);
    const recorded = handler(url);
    if (!recorded) throw new TypeError(`no stub for ${url.pathname}`);
    return new Response(JSON.stringify(recorded.body), {
      status: recorded.status,
      headers: { "content-type": "application/json" },
    });
  });
  return { calls };
}

/** Replaces global fetch with one that always fails like a dead server. */
export function stubFetchDown(): void {
  vi.stubGlobal("fetch", async () => {
    throw new TypeError("fetch failed");
  });
}

/** Lets queued microtasks and zero-delay timers run. */
export async function settle(): Promise<void> {
  for (let i = 0; i < 4; i++) {
    await new Promise((resolve) => setTimeout(resolve, 0));
  }
}
