"""HTTP API over the same view builders as the CLI.

Notations travel percent-encoded in path segments; every endpoint that
takes one also accepts the ``n`` query parameter as an escape hatch for
characters that are awkward in paths.  Unknown classes and schemes map to
404, malformed notation to 400 with the failure offset.
"""

from __future__ import annotations

from typing import List, Optional
from urllib.parse import unquote

from fastapi import FastAPI, HTTPException, Query, Request
from fastapi.responses import PlainTextResponse

from . import views
from .config import AppState
from .errors import ClassweaveError, NotationParseError, NotFoundError
from .interchange import export_skos
from .retrieval import RawDocument, ingest


def _guard(fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except NotFoundError as exc:
        raise HTTPException(status_code=404, detail=str(exc))
    except NotationParseError as exc:
        raise HTTPException(status_code=400, detail={
            "message": exc.message, "text": exc.text, "offset": exc.offset})
    except ClassweaveError as exc:
        raise HTTPException(status_code=400, detail=str(exc))


def create_app(state: AppState) -> FastAPI:
    app = FastAPI(title="classweave", version="1.0")

    @app.get("/api/schemes")
    def schemes():
        return views.schemes_view(state)

    @app.get("/api/classes/{notation:path}")
    def class_detail(notation: str, n: Optional[str] = None,
                     lang: Optional[str] = None, scheme: Optional[str] = None):
        return _guard(views.class_view, state, n or unquote(notation),
                      lang, scheme)

    @app.get("/api/search")
    def search(q: str = Query(..., min_length=1), lang: Optional[str] = None,
               scheme: Optional[str] = None):
        return _guard(views.search_view, state, q, lang, scheme)

    @app.get("/api/browse")
    def browse(n: Optional[str] = None, aggregate: bool = False,
               lang: Optional[str] = None, scheme: Optional[str] = None):
        return _guard(views.browse_view, state, n, aggregate, lang, scheme)

    @app.get("/api/explode")
    def explode(n: str = Query(...), scheme: Optional[str] = None):
        return _guard(views.explode_view, state, n, scheme)

    @app.get("/api/broaden")
    def broaden(n: str = Query(...), min_hits: Optional[int] = None,
                scheme: Optional[str] = None):
        if min_hits is None:
            min_hits = state.config.min_hits_default
        if min_hits < 1:
            raise HTTPException(status_code=400, detail="min_hits must be >= 1")
        return _guard(views.broaden_view, state, n, min_hits, scheme)

    @app.get("/api/related")
    def related(n: str = Query(...), lang: Optional[str] = None,
                scheme: Optional[str] = None):
        return _guard(views.related_view, state, n, lang, scheme)

    @app.post("/api/suggest")
    async def suggest(request: Request):
        """Accepts a JSON object {text, top_k, lang, scheme} or a plain-text
        body that is treated as the text to classify."""
        raw = (await request.body()).decode("utf-8")
        payload: dict = {}
        if "json" in (request.headers.get("content-type") or ""):
            import json as _json
            try:
                payload = _json.loads(raw)
            except ValueError:
                raise HTTPException(status_code=400, detail="malformed JSON body")
            if not isinstance(payload, dict):
                raise HTTPException(status_code=400, detail="body must be an object")
            text = payload.get("text", "")
        else:
            text = raw
        if not isinstance(text, str) or not text.strip():
            raise HTTPException(status_code=400, detail="text is required")
        top_k = payload.get("top_k", 5)
        if not isinstance(top_k, int) or top_k < 1:
            raise HTTPException(status_code=400, detail="top_k must be >= 1")
        return _guard(views.suggest_view, state, text, top_k,
                      payload.get("lang"), payload.get("scheme"))

    @app.get("/api/authority/{notation:path}")
    def authority(notation: str, n: Optional[str] = None,
                  langs: Optional[str] = None, scheme: Optional[str] = None):
        scheme_obj = _guard(state.scheme, scheme)
        lang_list: List[str] = [l for l in (langs or scheme_obj.default_lang).split(",") if l]
        return _guard(views.authority_view, state, n or unquote(notation),
                      lang_list, scheme)

    @app.get("/api/skos", response_class=PlainTextResponse)
    def skos(scheme: Optional[str] = None):
        return _guard(lambda: export_skos(state.scheme(scheme)))

    @app.get("/api/map")
    def map_notation(src: str = Query(...), n: str = Query(...),
                     tgt: str = Query(...)):
        return _guard(views.map_view, state, src, n, tgt)

    @app.post("/api/documents")
    async def add_documents(request: Request):
        """Ingests interchange document lines:
        ``D<TAB>doc-id<TAB>lang<TAB>classmark(;classmark)*<TAB>title``."""
        body = (await request.body()).decode("utf-8")
        raw: List[RawDocument] = []
        for no, line in enumerate(body.split("\n"), start=1):
            line = line.strip("\r")
            if not line or line.startswith("#"):
                continue
            fields = line.split("\t")
            if fields[0] != "D" or len(fields) < 5:
                raise HTTPException(
                    status_code=400,
                    detail=f"line {no}: expected D\\tdoc-id\\tlang\\tclassmarks\\ttitle")
            marks = [m for m in fields[3].split(";") if m]
            raw.append(RawDocument(fields[1], fields[4], fields[2], marks))
        if not raw:
            raise HTTPException(status_code=400, detail="no document lines in body")
        accepted, rejected = ingest(state.store, raw)
        return {
            "accepted": accepted,
            "rejected": [{"doc_id": doc_id, "reason": reason}
                         for doc_id, reason in rejected],
            "total_documents": len(state.store.docs),
        }

    return app
