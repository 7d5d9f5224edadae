"""Command-line interface.

Usage errors exit with status 2 (click's convention); data errors exit 1
with diagnostics on stderr.  ``--json`` switches every subcommand from
aligned tables to the structured records also served over HTTP.
"""

from __future__ import annotations

import json
import sys
from typing import List, Optional

import click

from . import notation as nt
from . import views
from .config import AppState, ServiceConfig, load_config
from .errors import ClassweaveError, NotationParseError
from .indexes import export_chain_index, export_relative_index
from .interchange import export_authority, export_skos
from .synthesis import apply_auxiliary, expand_add


def _state(ctx) -> AppState:
    opts = ctx.obj
    if opts.get("state") is None:
        config = load_config(opts.get("config_path"))
        if opts["scheme_paths"]:
            config.scheme_paths = list(opts["scheme_paths"])
        if opts["docs_paths"]:
            config.docs_paths = list(opts["docs_paths"])
        if opts.get("scheme_id"):
            config.default_scheme = opts["scheme_id"]
        if opts.get("lang"):
            config.default_lang = opts["lang"]
        try:
            opts["state"] = AppState(config)
        except (ClassweaveError, OSError) as exc:
            raise click.ClickException(str(exc))
    return opts["state"]


def _emit(ctx, data, table: str) -> None:
    if ctx.obj["json"]:
        click.echo(json.dumps(data, ensure_ascii=False, indent=2))
    else:
        click.echo(table, nl=False)


def _rows_table(rows, aggregate: bool = False) -> str:
    if not rows:
        return "(no matches)\n"
    width = max(len(r["notation"]) for r in rows) + 2
    out = []
    for r in rows:
        hits = r["aggregate_hits"] if aggregate else r["direct_hits"]
        out.append(f"{r['notation']:<{width}}{r['caption']}\t{hits}")
    return "\n".join(out) + "\n"


@click.group()
@click.option("--scheme", "-s", "scheme_paths", multiple=True,
              type=click.Path(exists=True), help="Scheme fixture file (repeatable).")
@click.option("--docs", "docs_paths", multiple=True,
              type=click.Path(exists=True), help="Document fixture file (repeatable).")
@click.option("--config", "config_path", type=click.Path(exists=True),
              help="JSON config file (default: $CLASSWEAVE_CONFIG).")
@click.option("--scheme-id", help="Scheme used for retrieval operations.")
@click.option("--lang", help="Preferred caption language.")
@click.option("--json", "json_out", is_flag=True, help="Structured output.")
@click.pass_context
def main(ctx, scheme_paths, docs_paths, config_path, scheme_id, lang, json_out):
    """Analytico-synthetic classification toolkit."""
    ctx.obj = {
        "scheme_paths": scheme_paths,
        "docs_paths": docs_paths,
        "config_path": config_path,
        "scheme_id": scheme_id,
        "lang": lang,
        "json": json_out,
        "state": None,
    }


def _wrap(fn):
    """Convert domain errors into exit-1 diagnostics."""
    import functools

    @functools.wraps(fn)
    def inner(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except click.ClickException:
            raise
        except ClassweaveError as exc:
            raise click.ClickException(str(exc))
    return inner


@main.command()
@click.pass_context
@_wrap
def validate(ctx):
    """Load every fixture and report integrity diagnostics."""
    state = _state(ctx)
    report = state.corpus.report
    summary = {
        "schemes": {s.id: len(s.classes) for s in state.schemes.values()},
        "documents": len(state.store.docs),
        "ingest_rejects": [list(r) for r in state.ingest_rejects],
        "diagnostics": [f"{p}:{n}: {m}" for p, n, m in report.diagnostics],
    }
    table = "".join(f"{sid}: {n} classes\n" for sid, n in summary["schemes"].items())
    table += f"documents: {summary['documents']}\n"
    table += report.render()
    for doc_id, reason in state.ingest_rejects:
        table += f"document {doc_id} rejected: {reason}\n"
    _emit(ctx, summary, table)
    if report.diagnostics or state.ingest_rejects:
        sys.exit(1)


@main.command()
@click.argument("term")
@click.pass_context
@_wrap
def search(ctx, term):
    """Term search with disambiguation or systematic expansion."""
    state = _state(ctx)
    data = views.search_view(state, term, ctx.obj.get("lang"))
    _emit(ctx, data, _rows_table(data["display_rows"]))


@main.command()
@click.argument("notation", required=False)
@click.option("--aggregate", is_flag=True, help="Show subtree counts.")
@click.pass_context
@_wrap
def browse(ctx, notation, aggregate):
    """Breadcrumb, class row and children with hit counts."""
    state = _state(ctx)
    data = views.browse_view(state, notation or nt.ROOT, aggregate,
                             ctx.obj.get("lang"))
    lines = []
    for crumb in data["breadcrumbs"]:
        lines.append(f"^ {crumb['notation']}  {crumb['caption']}")
    rows = []
    if data["current"]:
        rows.append(data["current"])
    table = "\n".join(lines)
    table += ("\n" if lines else "") + _rows_table(rows + data["children"], aggregate)
    _emit(ctx, data, table)


@main.command()
@click.argument("notation")
@click.option("--min-hits", type=int, default=None,
              help="Target hit count (default from config).")
@click.pass_context
@_wrap
def broaden(ctx, notation, min_hits):
    """Walk up the hierarchy until enough documents are in scope."""
    state = _state(ctx)
    if min_hits is None:
        min_hits = state.config.min_hits_default
    data = views.broaden_view(state, notation, min_hits)
    label = "ROOT" if data["root"] else data["notation"]
    _emit(ctx, data, f"{label}\t{data['hits']}\n")


@main.command()
@click.argument("notation")
@click.pass_context
@_wrap
def explode(ctx, notation):
    """All document ids under a class and its descendants."""
    state = _state(ctx)
    data = views.explode_view(state, notation)
    table = "".join(f"{d}\n" for d in data["doc_ids"])
    table += f"total\t{data['count']}\n"
    _emit(ctx, data, table)


@main.command()
@click.argument("notation")
@click.pass_context
@_wrap
def related(ctx, notation):
    """One-hop see-also targets with direct counts."""
    state = _state(ctx)
    data = views.related_view(state, notation, ctx.obj.get("lang"))
    table = "".join(f"{r['notation']}\t{r['caption']}\t{r['direct_hits']}\n"
                    for r in data["related"])
    _emit(ctx, data, table or "(no related classes)\n")


@main.command()
@click.option("--main", "main_number", required=True, help="Main number.")
@click.option("--aux", "aux_pairs", multiple=True, metavar="FACET=VALUE",
              help="Auxiliary to attach (repeatable).")
@click.pass_context
@_wrap
def synthesize(ctx, main_number, aux_pairs):
    """Attach common auxiliaries to a main number."""
    state = _state(ctx)
    scheme = state.scheme()
    expr = scheme.parse(main_number)
    for pair in aux_pairs:
        facet_id, _, value = pair.partition("=")
        if not value:
            raise click.UsageError(f"--aux needs FACET=VALUE, got {pair!r}")
        expr = apply_auxiliary(scheme, expr, facet_id, value)
    canonical = scheme.format(expr)
    _emit(ctx, {"scheme": scheme.id, "notation": canonical}, canonical + "\n")


@main.command("expand-add")
@click.option("--base", required=True, help="Base number of the instruction.")
@click.option("--source", required=True, help="Source number inside the span.")
@click.pass_context
@_wrap
def expand_add_cmd(ctx, base, source):
    """Apply an add-to-base parallel-division instruction."""
    state = _state(ctx)
    base_digits = base.replace(".", "")
    instr = None
    for scheme in state.schemes.values():
        for candidate in scheme.add_instructions:
            if candidate.base == base_digits:
                instr = candidate
                break
    if instr is None:
        raise click.ClickException(f"no add-instruction with base {base}")
    result = expand_add(instr, source)
    canonical = nt.redot(result.digits)
    _emit(ctx, {"base": nt.redot(instr.base), "source": source,
                "notation": canonical}, canonical + "\n")


@main.command("chain-index")
@click.pass_context
@_wrap
def chain_index_cmd(ctx):
    """Chain index as tab-separated text."""
    state = _state(ctx)
    scheme = state.scheme()
    lang = ctx.obj.get("lang") or scheme.default_lang
    text = export_chain_index(scheme, lang)
    _emit(ctx, {"scheme": scheme.id, "lang": lang, "text": text}, text)


@main.command("relative-index")
@click.pass_context
@_wrap
def relative_index_cmd(ctx):
    """Relative index as tab-separated text."""
    state = _state(ctx)
    scheme = state.scheme()
    lang = ctx.obj.get("lang") or scheme.default_lang
    text = export_relative_index(scheme, lang)
    _emit(ctx, {"scheme": scheme.id, "lang": lang, "text": text}, text)


@main.command("export-skos")
@click.pass_context
@_wrap
def export_skos_cmd(ctx):
    """Concept scheme as sorted line-oriented triples."""
    state = _state(ctx)
    scheme = state.scheme()
    text = export_skos(scheme)
    _emit(ctx, {"scheme": scheme.id, "text": text}, text)


@main.command()
@click.argument("notation")
@click.option("--langs", default=None, help="Comma-separated language tags.")
@click.pass_context
@_wrap
def authority(ctx, notation, langs):
    """Subject authority record for one class."""
    state = _state(ctx)
    scheme = state.scheme()
    lang_list = [l for l in (langs or scheme.default_lang).split(",") if l]
    if ctx.obj["json"]:
        data = views.authority_view(state, notation, lang_list)
        _emit(ctx, data, "")
        return
    text, diagnostics = export_authority(scheme, [notation], lang_list)
    for diag in diagnostics:
        click.echo(diag, err=True)
    if diagnostics and not text:
        sys.exit(1)
    click.echo(text, nl=False)


@main.command("map")
@click.argument("source_scheme")
@click.argument("notation")
@click.option("--to", "target_scheme", required=True, help="Target scheme id.")
@click.pass_context
@_wrap
def map_cmd(ctx, source_scheme, notation, target_scheme):
    """Translate a notation between schemes via the concordance."""
    state = _state(ctx)
    data = views.map_view(state, source_scheme, notation, target_scheme)
    if not data["mapped"]:
        _emit(ctx, data, "(no mapping)\n")
        sys.exit(1)
    table = f"{data['target_notation']} {data['exactness']}"
    if data["hops_broadened"]:
        table += f" ({data['hops_broadened']} hops broadened)"
    _emit(ctx, data, table + "\n")


@main.command()
@click.option("--text", required=True, help="Free text to classify.")
@click.option("--top-k", type=int, default=5)
@click.pass_context
@_wrap
def suggest(ctx, text, top_k):
    """Suggest classes by transparent term matching."""
    state = _state(ctx)
    data = views.suggest_view(state, text, top_k, ctx.obj.get("lang"))
    table = "".join(f"{s['notation']}\t{s['score']}\t{s['caption']}\n"
                    for s in data["suggestions"])
    _emit(ctx, data, table or "(no suggestions)\n")


@main.command()
@click.argument("kind", type=click.Choice(["search", "browse"]))
@click.argument("argument")
@click.option("--out", "out_dir", required=True,
              type=click.Path(file_okay=False), help="Output directory.")
@click.pass_context
@_wrap
def report(ctx, kind, argument, out_dir):
    """Render a hit-count figure and delimited output for a query."""
    from .report import render_browse_report, render_search_report

    state = _state(ctx)
    if kind == "search":
        paths = render_search_report(state, argument, out_dir,
                                     lang=ctx.obj.get("lang"))
    else:
        paths = render_browse_report(state, argument, out_dir,
                                     lang=ctx.obj.get("lang"))
    data = {"kind": kind, "argument": argument, "files": paths}
    _emit(ctx, data, "".join(p + "\n" for p in paths))


@main.command()
@click.option("--port", type=int, default=None, help="TCP port to bind.")
@click.option("--host", default="127.0.0.1")
@click.pass_context
@_wrap
def serve(ctx, port, host):
    """Run the HTTP API."""
    import uvicorn

    from .server import create_app

    state = _state(ctx)
    app = create_app(state)
    try:
        uvicorn.run(app, host=host, port=port or state.config.port)
    except OSError as exc:
        raise click.ClickException(f"cannot bind port: {exc}")


if __name__ == "__main__":
    main()
