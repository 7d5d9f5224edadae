/**
 * Typed client for the classification service HTTP API.
 *
 * Every method maps to exactly one documented endpoint; the UI never
 * computes counts itself, it only displays what these calls return.
 */

export interface HitRow {
  notation: string;
  caption: string;
  direct_hits: number;
  aggregate_hits: number;
}

export interface SearchRow extends HitRow {
  discipline: string;
}

export interface SearchResponse {
  query: string;
  scheme: string;
  expanded: boolean;
  rows: SearchRow[];
  display_rows: HitRow[];
}

export interface BrowseResponse {
  scheme: string;
  aggregate: boolean;
  parent: HitRow | null;
  current: HitRow | null;
  breadcrumbs: HitRow[];
  children: HitRow[];
}

export interface RelatedRow {
  notation: string;
  caption: string;
  direct_hits: number;
}

export interface RelatedResponse {
  scheme: string;
  notation: string;
  related: RelatedRow[];
}

export interface BroadenResponse {
  scheme: string;
  start: string;
  min_hits: number;
  notation: string | null;
  root: boolean;
  hits: number;
}

export interface ClassResponse {
  scheme: string;
  notation: string;
  kind: string;
  caption: string;
  caption_fallback: boolean;
  captions: Record<string, string>;
  parent: string | null;
  breadcrumbs: { notation: string; caption: string }[];
  children: { notation: string; caption: string }[];
  see_also: string[];
}

export interface SchemesResponse {
  default: string;
  schemes: {
    id: string;
    title: string;
    hierarchy_mode: string;
    default_lang: string;
    classes: number;
  }[];
}

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    public readonly detail: unknown,
  ) {
    super(`API error ${status}: ${JSON.stringify(detail)}`);
  }
}

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

type Params = Record<string, string | number | boolean | undefined>;

export class ApiClient {
  constructor(
    private readonly baseUrl: string = "",
    private readonly fetchFn: FetchLike = (url, init) => fetch(url, init),
  ) {}

  private url(path: string, params: Params = {}): string {
    const search = new URLSearchParams();
    for (const [key, value] of Object.entries(params)) {
      if (value !== undefined) search.set(key, String(value));
    }
    const query = search.toString();
    return this.baseUrl + path + (query ? `?${query}` : "");
  }

  private async getJson<T>(path: string, params: Params = {}): Promise<T> {
    const response = await this.fetchFn(this.url(path, params));
    const body = await response.json();
    if (!response.ok) throw new ApiError(response.status, body.detail ?? body);
    return body as T;
  }

  search(q: string, lang?: string, scheme?: string): Promise<SearchResponse> {
    return this.getJson("/api/search", { q, lang, scheme });
  }

  browse(n?: string, lang?: string, scheme?: string): Promise<BrowseResponse> {
    return this.getJson("/api/browse", { n, lang, scheme });
  }

  classDetail(notation: string, lang?: string): Promise<ClassResponse> {
    return this.getJson("/api/classes/x", { n: notation, lang });
  }

  related(n: string, lang?: string): Promise<RelatedResponse> {
    return this.getJson("/api/related", { n, lang });
  }

  broaden(n: string, minHits?: number): Promise<BroadenResponse> {
    return this.getJson("/api/broaden", { n, min_hits: minHits });
  }

  explode(n: string): Promise<{ notation: string; count: number; doc_ids: string[] }> {
    return this.getJson("/api/explode", { n });
  }

  schemes(): Promise<SchemesResponse> {
    return this.getJson("/api/schemes");
  }
}
