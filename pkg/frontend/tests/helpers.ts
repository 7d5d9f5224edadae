/** Test doubles: a fetch built from recorded API responses. */

import type { FetchLike } from "../src/api.js";
import fixtures from "./fixtures.json";

type FixtureName = keyof typeof fixtures;

const ROUTES: Record<string, FixtureName> = {
  "/api/search?q=rabbit": "search_rabbit",
  "/api/search?q=hadrons": "search_hadrons",
  "/api/search?q=zzz": "search_zzz",
  "/api/browse?n=539.125": "browse_539125",
  "/api/browse?n=539.125.46": "browse_53912546",
  "/api/browse?n=999": "browse_999",
  "/api/related?n=176": "related_176",
  "/api/broaden?n=539.125.46&min_hits=10": "broaden_53912546",
  "/api/classes/x?n=539.125": "class_539125",
  "/api/schemes": "schemes",
};

export function fixture(name: FixtureName): any {
  return fixtures[name].body;
}

/** Fetch stub that replays recorded responses and logs every request. */
export function recordedFetch(calls: string[] = []): FetchLike {
  return async (url: string) => {
    const parsed = new URL(url, "http://testserver");
    const key = decodeURIComponent(parsed.pathname + parsed.search);
    calls.push(key);
    const name = ROUTES[key];
    if (!name) throw new Error(`no recorded response for ${key}`);
    const { status, body } = fixtures[name];
    return new Response(JSON.stringify(body), {
      status,
      headers: { "content-type": "application/json" },
    });
  };
}

/** Fetch stub whose responses are resolved manually by the test. */
export function manualFetch() {
  const pending: { url: string; resolve: (r: Response) => void }[] = [];
  const fetchFn: FetchLike = (url: string) =>
    new Promise<Response>((resolve) => pending.push({ url, resolve }));
  const respond = (index: number, body: unknown, status = 200) => {
    pending[index].resolve(
      new Response(JSON.stringify(body), {
        status,
        headers: { "content-type": "application/json" },
      }),
    );
  };
  return { fetchFn, pending, respond };
}
