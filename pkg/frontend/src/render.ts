/**
 * Pure HTML rendering of the view state.  No DOM dependency: every
 * function returns a markup string, so rendering is fully unit-testable
 * and the host page just assigns `innerHTML`.
 *
 * All counts shown come verbatim from API responses held in the state;
 * nothing is recomputed client-side.
 */

import { HitRow, SearchRow } from "./api.js";
import { ViewState } from "./state.js";

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

function countOf(row: HitRow, aggregate: boolean): number {
  return aggregate ? row.aggregate_hits : row.direct_hits;
}

function rowItem(row: HitRow, aggregate: boolean): string {
  const count = countOf(row, aggregate);
  return (
    `<li class="hit-row" data-notation="${escapeHtml(row.notation)}" ` +
    `data-count="${count}">` +
    `<a href="#browse/${encodeURIComponent(row.notation)}">` +
    `${escapeHtml(row.caption)}</a> ` +
    `<code>${escapeHtml(row.notation)}</code> ` +
    `<span class="count-badge">${count}</span></li>`
  );
}

/** Fig.-style disambiguation: rows grouped under their discipline labels. */
export function renderDisambiguation(
  rows: SearchRow[],
  aggregate: boolean,
): string {
  const groups = new Map<string, SearchRow[]>();
  for (const row of rows) {
    const label = row.discipline || "General";
    if (!groups.has(label)) groups.set(label, []);
    groups.get(label)!.push(row);
  }
  const sections: string[] = [];
  for (const [label, members] of groups) {
    sections.push(
      `<section class="discipline-group" data-discipline="${escapeHtml(label)}">` +
        `<h3>${escapeHtml(label)}</h3><ul>` +
        members.map((m) => rowItem(m, aggregate)).join("") +
        `</ul></section>`,
    );
  }
  return `<div class="disambiguation">${sections.join("")}</div>`;
}

/** Single-match result: the class in its systematic context. */
export function renderExpansion(rows: HitRow[], aggregate: boolean): string {
  return (
    `<div class="expansion"><ul>` +
    rows.map((r) => rowItem(r, aggregate)).join("") +
    `</ul></div>`
  );
}

export function renderEmpty(query: string): string {
  return (
    `<div class="empty-state"><p>No matches for ` +
    `<strong>${escapeHtml(query)}</strong>.</p>` +
    `<p class="hint">Try a shorter term, or ` +
    `<button data-action="broaden-search">broaden the search</button>.</p></div>`
  );
}

export function renderNotFound(query: string, detail: string | null): string {
  return (
    `<div class="not-found"><p>${escapeHtml(detail ?? "Class not found.")}</p>` +
    `<p>Your search <strong>${escapeHtml(query)}</strong> is still active.</p></div>`
  );
}

const TOO_FEW_THRESHOLD = 5;

export function renderBrowse(state: ViewState): string {
  const view = state.browse;
  if (!view) return "";
  const crumbs = state.breadcrumb
    .map(
      (c) =>
        `<a class="crumb" href="#browse/${encodeURIComponent(c.notation)}" ` +
        `data-notation="${escapeHtml(c.notation)}">${escapeHtml(c.caption)}</a>`,
    )
    .join(" &gt; ");
  const parts: string[] = [`<nav class="breadcrumb">${crumbs}</nav>`];
  if (view.current) {
    const count = countOf(view.current, state.aggregateMode);
    parts.push(
      `<header class="current" data-notation="${escapeHtml(view.current.notation)}" ` +
        `data-count="${count}"><h2>${escapeHtml(view.current.caption)} ` +
        `<code>${escapeHtml(view.current.notation)}</code></h2>` +
        `<span class="count-badge">${count}</span></header>`,
    );
    const direct = view.current.direct_hits;
    if (direct < TOO_FEW_THRESHOLD) {
      parts.push(
        `<aside class="too-few">Only ${direct} direct ` +
          `result${direct === 1 ? "" : "s"}. ` +
          `<button data-action="broaden-search">Broaden until ` +
          `${TOO_FEW_THRESHOLD}+</button></aside>`,
      );
    }
  }
  parts.push(
    `<ul class="children">` +
      view.children.map((c) => rowItem(c, state.aggregateMode)).join("") +
      `</ul>`,
  );
  if (state.related) {
    parts.push(
      `<aside class="related"><h3>See also</h3><ul>` +
        state.related
          .map(
            (r) =>
              `<li data-notation="${escapeHtml(r.notation)}" ` +
              `data-count="${r.direct_hits}">` +
              `<a href="#browse/${encodeURIComponent(r.notation)}">` +
              `${escapeHtml(r.caption)}</a> ` +
              `<code>${escapeHtml(r.notation)}</code> ` +
              `<span class="count-badge">${r.direct_hits}</span></li>`,
          )
          .join("") +
        `</ul></aside>`,
    );
  }
  if (state.broadened && state.broadened.notation) {
    parts.push(
      `<aside class="broadened">Broadening to ` +
        `<a href="#browse/${encodeURIComponent(state.broadened.notation)}">` +
        `<code>${escapeHtml(state.broadened.notation)}</code></a> would give ` +
        `${state.broadened.hits} results.</aside>`,
    );
  }
  return `<div class="browse">${parts.join("")}</div>`;
}

/** Top-level dispatch on the state's active panel. */
export function render(state: ViewState): string {
  switch (state.panel) {
    case "idle":
      return `<div class="idle"><p>Enter a subject term.</p></div>`;
    case "disambiguation":
      return renderDisambiguation(state.search?.rows ?? [], state.aggregateMode);
    case "expansion":
      return renderExpansion(
        state.search?.display_rows ?? [],
        state.aggregateMode,
      );
    case "empty":
      return renderEmpty(state.query);
    case "browse":
      return renderBrowse(state);
    case "notFound":
      return renderNotFound(state.query, state.error);
  }
}
