import { describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { render } from "../src/render.js";
import { Controller } from "../src/state.js";
import { fixture, manualFetch, recordedFetch } from "./helpers.js";

function controller(calls: string[] = []): Controller {
  return new Controller(new ApiClient("", recordedFetch(calls)));
}

/** Every (notation, displayed count) pair in a rendered panel. */
function displayedCounts(html: string): Map<string, number> {
  const out = new Map<string, number>();
  for (const match of html.matchAll(
    /data-notation="([^"]+)" data-count="(\d+)"/g,
  )) {
    out.set(match[1], Number(match[2]));
  }
  return out;
}

describe("disambiguation panel", () => {
  it("groups rabbit across at least four disciplines", async () => {
    const c = controller();
    await c.search("rabbit");
    expect(c.state.panel).toBe("disambiguation");
    const html = render(c.state);
    const groups = [...html.matchAll(/data-discipline="([^"]+)"/g)].map(
      (m) => m[1],
    );
    expect(new Set(groups).size).toBeGreaterThanOrEqual(4);
    expect(groups).toContain("Textile industry");
    expect(groups).toContain("Animal husbandry");
  });

  it("shows every rabbit count exactly as the API returned it", async () => {
    const c = controller();
    await c.search("rabbit");
    const counts = displayedCounts(render(c.state));
    for (const row of fixture("search_rabbit").rows) {
      expect(counts.get(row.notation)).toBe(row.direct_hits);
    }
    expect(counts.size).toBe(fixture("search_rabbit").rows.length);
  });

  it("expands a single hadrons match into its systematic context", async () => {
    const c = controller();
    await c.search("hadrons");
    expect(c.state.panel).toBe("expansion");
    const counts = displayedCounts(render(c.state));
    const expected = fixture("search_hadrons").display_rows;
    expect(counts.size).toBe(expected.length);
    expect(expected.length).toBe(10);
    for (const row of expected) {
      expect(counts.get(row.notation)).toBe(row.direct_hits);
    }
  });

  it("renders an empty state with a broaden hint", async () => {
    const c = controller();
    await c.search("zzz");
    expect(c.state.panel).toBe("empty");
    const html = render(c.state);
    expect(html).toContain("No matches");
    expect(html).toContain("zzz");
    expect(html).toContain('data-action="broaden-search"');
  });
});

describe("browse panel", () => {
  it("shows direct child counts, then 53 after the aggregate toggle", async () => {
    const c = controller();
    await c.search("hadrons");
    await c.select("539.125");
    expect(c.state.panel).toBe("browse");

    const direct = displayedCounts(render(c.state));
    expect(direct.get("539.125")).toBe(38);
    expect(direct.get("539.125.4")).toBe(5);
    expect(direct.get("539.125.5")).toBe(7);

    c.toggleAggregate();
    const aggregate = displayedCounts(render(c.state));
    expect(aggregate.get("539.125")).toBe(53);
    // same row set, only the counts changed
    expect([...aggregate.keys()]).toEqual([...direct.keys()]);
  });

  it("never shows a count the API did not return", async () => {
    const c = controller();
    await c.select("539.125");
    const body = fixture("browse_539125");
    for (const aggregateMode of [false, true]) {
      c.state.aggregateMode = aggregateMode;
      const counts = displayedCounts(render(c.state));
      const field = aggregateMode ? "aggregate_hits" : "direct_hits";
      expect(counts.get(body.current.notation)).toBe(body.current[field]);
      for (const child of body.children) {
        expect(counts.get(child.notation)).toBe(child[field]);
      }
      expect(counts.size).toBe(1 + body.children.length);
    }
  });

  it("breadcrumb is the full parent walk of the selected class", async () => {
    const c = controller();
    await c.select("539.125.46");
    expect(c.state.breadcrumb.map((b) => b.notation)).toEqual([
      "539.1",
      "539.12",
      "539.125/.126",
      "539.125",
      "539.125.4",
    ]);
    const html = render(c.state);
    expect(html).toContain('class="crumb"');
  });

  it("offers broadening when direct results are scarce", async () => {
    const c = controller();
    await c.select("539.125.46");
    expect(render(c.state)).toContain('data-action="broaden-search"');
    await c.broadenSearch(10);
    expect(c.state.broadened?.notation).toBe("539.125");
    expect(c.state.broadened?.hits).toBe(53);
    expect(render(c.state)).toContain("53 results");
  });

  it("renders the see-also panel with API counts", async () => {
    const c = controller();
    await c.select("539.125");
    c.state.selectedNotation = "176";
    await c.loadRelated();
    expect(c.state.related).toHaveLength(8);
    const html = render(c.state);
    expect(html).toContain('class="related"');
    const counts = displayedCounts(html);
    for (const row of fixture("related_176").related) {
      expect(counts.get(row.notation)).toBe(row.direct_hits);
    }
  });

  it("keeps the query alive on a 404 dead end", async () => {
    const c = controller();
    await c.search("rabbit");
    await c.select("999");
    expect(c.state.panel).toBe("notFound");
    expect(c.state.query).toBe("rabbit");
    expect(render(c.state)).toContain("rabbit");
  });
});

describe("protocol discipline", () => {
  it("performs exactly one endpoint call per navigation action", async () => {
    const calls: string[] = [];
    const c = controller(calls);
    await c.search("rabbit");
    expect(calls).toHaveLength(1);
    await c.select("539.125");
    expect(calls).toHaveLength(2);
    c.state.selectedNotation = "176";
    await c.loadRelated();
    expect(calls).toHaveLength(3);
    c.toggleAggregate(); // display-only: no request
    c.toggleAggregate();
    expect(calls).toHaveLength(3);
  });

  it("resolves concurrent searches latest-wins", async () => {
    const { fetchFn, respond } = manualFetch();
    const c = new Controller(new ApiClient("", fetchFn));
    const first = c.search("rabbit");
    const second = c.search("hadrons");
    respond(1, fixture("search_hadrons"));
    await second;
    respond(0, fixture("search_rabbit")); // stale: must be dropped
    await first;
    expect(c.state.query).toBe("hadrons");
    expect(c.state.panel).toBe("expansion");
    expect(c.state.search?.query).toBe("hadrons");
  });
});
