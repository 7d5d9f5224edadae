/**
 * View-model for the search-and-steer loop: enter a term, disambiguate
 * across disciplines, then browse up/down and follow related links.
 *
 * Each navigation action performs exactly one API call.  Concurrent
 * in-flight requests resolve latest-wins: a response is dropped if a newer
 * action started after it was issued.  The aggregate toggle only switches
 * which already-fetched count is displayed; it never refetches or changes
 * the row set.
 */

import {
  ApiClient,
  ApiError,
  BroadenResponse,
  BrowseResponse,
  RelatedRow,
  SearchResponse,
} from "./api.js";

export type Panel =
  | "idle"
  | "disambiguation"
  | "expansion"
  | "empty"
  | "browse"
  | "notFound";

export interface Crumb {
  notation: string;
  caption: string;
}

export interface ViewState {
  panel: Panel;
  query: string;
  lang?: string;
  selectedNotation: string | null;
  aggregateMode: boolean;
  breadcrumb: Crumb[];
  search: SearchResponse | null;
  browse: BrowseResponse | null;
  related: RelatedRow[] | null;
  broadened: BroadenResponse | null;
  error: string | null;
}

export function initialState(): ViewState {
  return {
    panel: "idle",
    query: "",
    lang: undefined,
    selectedNotation: null,
    aggregateMode: false,
    breadcrumb: [],
    search: null,
    browse: null,
    related: null,
    broadened: null,
    error: null,
  };
}

export class Controller {
  state: ViewState = initialState();
  private seq = 0;

  constructor(private readonly api: ApiClient) {}

  /** True when `ticket` is still the newest action. */
  private fresh(ticket: number): boolean {
    return ticket === this.seq;
  }

  setLanguage(lang: string | undefined): void {
    this.state.lang = lang;
  }

  toggleAggregate(): void {
    this.state.aggregateMode = !this.state.aggregateMode;
  }

  async search(query: string): Promise<void> {
    const ticket = ++this.seq;
    const response = await this.api.search(query, this.state.lang);
    if (!this.fresh(ticket)) return;
    this.state.query = query;
    this.state.search = response;
    this.state.browse = null;
    this.state.related = null;
    this.state.broadened = null;
    this.state.selectedNotation = null;
    this.state.breadcrumb = [];
    this.state.error = null;
    if (response.rows.length === 0) {
      this.state.panel = "empty";
    } else {
      this.state.panel = response.expanded ? "expansion" : "disambiguation";
    }
  }

  async select(notation: string): Promise<void> {
    const ticket = ++this.seq;
    let response: BrowseResponse;
    try {
      response = await this.api.browse(notation, this.state.lang);
    } catch (err) {
      if (!this.fresh(ticket)) return;
      if (err instanceof ApiError && err.status === 404) {
        this.state.panel = "notFound";
        this.state.error = String(err.detail);
        return; // the query survives a dead end
      }
      throw err;
    }
    if (!this.fresh(ticket)) return;
    this.state.selectedNotation = response.current?.notation ?? notation;
    this.state.browse = response;
    this.state.breadcrumb = response.breadcrumbs.map((b) => ({
      notation: b.notation,
      caption: b.caption,
    }));
    this.state.related = null;
    this.state.broadened = null;
    this.state.error = null;
    this.state.panel = "browse";
  }

  /** Syndetic panel for the selected class (one call to /api/related). */
  async loadRelated(): Promise<void> {
    if (!this.state.selectedNotation) return;
    const ticket = ++this.seq;
    const response = await this.api.related(
      this.state.selectedNotation,
      this.state.lang,
    );
    if (!this.fresh(ticket)) return;
    this.state.related = response.related;
  }

  /** Widen the current class until at least `minHits` documents match. */
  async broadenSearch(minHits: number): Promise<void> {
    if (!this.state.selectedNotation) return;
    const ticket = ++this.seq;
    const response = await this.api.broaden(this.state.selectedNotation, minHits);
    if (!this.fresh(ticket)) return;
    // surfaced as a suggestion; navigating there is the user's next click
    this.state.broadened = response;
  }
}
