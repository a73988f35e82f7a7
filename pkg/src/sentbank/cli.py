"""Operator command line: bulk ingestion, maintenance, measurement, serving.

Exit codes: 0 success, 1 usage error, 2 data error, 3 partial failure
(some files of a batch failed, the rest were ingested).
"""

from __future__ import annotations

import json
import random
import sys
from concurrent.futures import ThreadPoolExecutor, as_completed
from pathlib import Path

import click

from . import limits as limits_mod
from . import metrics as metrics_mod
from . import projection as projection_mod
from . import validation as validation_mod
from .errors import SentbankError
from .extraction import extract_file
from .store.sqlite import SqliteStore

_EXTENSIONS = {".txt", ".text", ".html", ".htm"}
_FORMAT_MIME = {"txt": "text/plain", "html": "text/html"}


@click.group()
@click.option(
    "--data",
    "data_dir",
    envvar="SENTBANK_DATA",
    default="./sentbank-data",
    show_default=True,
    help="Data directory (env: SENTBANK_DATA).",
)
@click.pass_context
def cli(ctx, data_dir):
    """Search-only translation memory toolbox."""
    ctx.obj = {"data_dir": Path(data_dir)}


def _open_store(ctx) -> SqliteStore:
    return SqliteStore(ctx.obj["data_dir"] / "sentbank.db")


def _collect_files(paths: tuple[str, ...], format_override: str | None) -> list[Path]:
    files: list[Path] = []
    for raw in paths:
        path = Path(raw)
        if path.is_dir():
            for child in sorted(path.rglob("*")):
                if child.is_file() and (
                    format_override or child.suffix.lower() in _EXTENSIONS
                ):
                    files.append(child)
        else:
            files.append(path)
    return files


def _ingest_one(store, path: Path, source, language, format_override) -> dict:
    try:
        mime_override = _FORMAT_MIME.get(format_override) if format_override else None
        content = extract_file(path, mime_override)
        doc_id, stats = store.ingest_document(
            source, path.as_posix(), mime_override or "text/plain", content, language
        )
        return {
            "file": path.as_posix(),
            "documentId": doc_id,
            "sentences": stats.sentences,
            "newDistinct": stats.new_distinct,
            "reusedDistinct": stats.reused_distinct,
        }
    except SentbankError as exc:
        return {"file": path.as_posix(), "error": exc.code, "message": exc.message}
    except OSError as exc:
        return {"file": path.as_posix(), "error": "io", "message": str(exc)}


@cli.command()
@click.argument("paths", nargs=-1, required=True)
@click.option("--source", required=True, help="Source tag for the whole batch.")
@click.option("--lang", default="en", show_default=True)
@click.option("--format", "format_", type=click.Choice(["txt", "html"]), default=None,
              help="Override format detection by extension.")
@click.option("--jobs", default=1, type=click.IntRange(1), show_default=True)
@click.option("--json", "as_json", is_flag=True, help="Machine-readable output.")
@click.pass_context
def ingest(ctx, paths, source, lang, format_, jobs, as_json):
    """Ingest files or directory trees; each file becomes one document.

    Failures are reported per file and the batch continues.
    """
    files = _collect_files(paths, format_)
    if not files:
        raise SentbankError("no ingestable files found under the given paths")
    store = _open_store(ctx)
    results = []
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        futures = [pool.submit(_ingest_one, store, f, source, lang, format_) for f in files]
        for future in as_completed(futures):
            results.append(future.result())
    results.sort(key=lambda r: r["file"])

    ok = [r for r in results if "error" not in r]
    failed = [r for r in results if "error" in r]
    for record in results:
        if as_json:
            click.echo(json.dumps(record))
        elif "error" in record:
            click.echo(f"error  {record['file']}  {record['error']}: {record['message']}")
        else:
            click.echo(
                f"ok     {record['file']}  sentences={record['sentences']}"
                f" new={record['newDistinct']} reused={record['reusedDistinct']}"
            )
    summary = {
        "files": len(results),
        "ingested": len(ok),
        "failed": len(failed),
        "sentences": sum(r["sentences"] for r in ok),
        "newDistinct": sum(r["newDistinct"] for r in ok),
        "reusedDistinct": sum(r["reusedDistinct"] for r in ok),
    }
    click.echo(json.dumps(summary) if as_json else
               f"total: {summary['ingested']}/{summary['files']} ingested,"
               f" {summary['sentences']} sentences,"
               f" {summary['newDistinct']} new distinct")
    if failed and ok:
        ctx.exit(3)
    if failed:
        ctx.exit(2)


@cli.command()
@click.option("--lang", default=None, help="Restrict to one language tag.")
@click.option("--json", "as_json", is_flag=True)
@click.pass_context
def dedup(ctx, lang, as_json):
    """Merge duplicate sentence rows left by concurrent ingestion."""
    merged = _open_store(ctx).dedup_pass(lang)
    click.echo(json.dumps({"mergedCount": merged}) if as_json else f"merged: {merged}")


@cli.command()
@click.option("--source", default=None, help="Limit the scope to one source tag.")
@click.option("--valid-only", is_flag=True, help="Count valid sentences only.")
@click.option("--json", "as_json", is_flag=True)
@click.pass_context
def metrics(ctx, source, valid_only, as_json):
    """Repetition metrics for the store or one source."""
    store = _open_store(ctx)
    result = metrics_mod.compute_metrics(store, source, valid_only=valid_only)
    if as_json:
        click.echo(json.dumps(metrics_mod.metrics_to_dict(result)))
    else:
        title = f"scope: {source}" if source else "scope: all sources"
        click.echo(metrics_mod.render_metrics(result, title))


@cli.command()
@click.option("--sources", required=True, help="Comma-separated source tags.")
@click.option("--json", "as_json", is_flag=True)
@click.pass_context
def common(ctx, sources, as_json):
    """Common distinct sentences between sources (pairwise and overall)."""
    tags = [t.strip() for t in sources.split(",") if t.strip()]
    if len(tags) < 2:
        raise click.UsageError("--sources needs at least two comma-separated tags")
    store = _open_store(ctx)
    if as_json:
        click.echo(json.dumps(metrics_mod.common_matrix(store, tags)))
    else:
        click.echo(metrics_mod.render_common_matrix(store, tags))


@cli.command()
@click.option("--vocab", type=click.IntRange(1), default=None)
@click.option("--max-words", type=click.IntRange(1), default=None)
@click.option("--table", "as_table", is_flag=True,
              help="Full ceiling table over the shipped word lists.")
@click.option("--digits", type=click.IntRange(2), default=5, show_default=True)
@click.option("--json", "as_json", is_flag=True)
def limits(vocab, max_words, as_table, digits, as_json):
    """Theoretical sentence-count ceilings (exact big integers)."""
    if as_table:
        rows = limits_mod.ceiling_table()
        click.echo(json.dumps({"rows": rows}) if as_json
                   else limits_mod.render_ceiling_table(rows))
        return
    if vocab is None or max_words is None:
        raise click.UsageError("--vocab and --max-words are required without --table")
    result = limits_mod.sentence_ceiling(vocab, max_words)
    if as_json:
        payload = limits_mod.ceiling_to_dict(result, digits)
        payload["dominantTermRendered"] = limits_mod.format_scientific(
            result.dominant_term, digits
        )
        click.echo(json.dumps(payload))
    else:
        click.echo(
            f"ceiling(V={vocab}, N={max_words}) = {result.rendered(digits)}"
            f"  ({result.digit_count} digits)"
        )
        click.echo(
            f"dominant term V^N = "
            f"{limits_mod.format_scientific(result.dominant_term, digits)}"
        )


def _resolve_plan(store, plan_path: Path, source: str | None) -> list[list[int]]:
    """Plan file: one group per line, whitespace-separated document-name
    prefixes, '#' comments. Groups accumulate in order (cumulative series)."""
    summaries = []
    page = 1
    while True:
        chunk = store.list_documents(source_tag=source, page=page, page_size=500)
        summaries.extend(chunk.items)
        if page * chunk.page_size >= chunk.total:
            break
        page += 1
    groups = []
    for line in plan_path.read_text("utf-8").splitlines():
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        prefixes = body.split()
        groups.append(
            [s.id for s in summaries if any(s.name.startswith(p) for p in prefixes)]
        )
    return groups


@cli.command()
@click.option("--points", "points_file", type=click.Path(exists=True, dir_okay=False),
              default=None, help="TSV file of x<TAB>y trend points.")
@click.option("--snapshots", "plan_file", type=click.Path(exists=True, dir_okay=False),
              default=None, help="Snapshot plan of document-name prefix groups.")
@click.option("--source", default=None, help="Restrict snapshots to one source tag.")
@click.option("--valid-only", is_flag=True)
@click.option("--target-pct", type=float, required=True)
@click.option("--table", "as_table", is_flag=True,
              help="Also project the standard 5/25/50/75/100%% targets.")
@click.option("--compare", is_flag=True, help="Also report alternative curve fits.")
@click.option("--json", "as_json", is_flag=True)
@click.pass_context
def project(ctx, points_file, plan_file, source, valid_only, target_pct, as_table,
            compare, as_json):
    """Fit the log trend and project the volume needed for a target
    repetition percentage."""
    if (points_file is None) == (plan_file is None):
        raise click.UsageError("use exactly one of --points or --snapshots")
    if points_file:
        points = projection_mod.read_points_file(points_file)
    else:
        store = _open_store(ctx)
        plan = _resolve_plan(store, Path(plan_file), source)
        points = projection_mod.snapshot_series(store, plan, valid_only=valid_only)
    trend = projection_mod.fit_log_trend(points)
    estimate = projection_mod.required_volume(trend, target_pct)
    if as_json:
        payload = {
            "fit": projection_mod.trend_to_dict(trend),
            "targetPct": target_pct,
            "requiredVolume": projection_mod.estimate_to_dict(estimate),
        }
        if as_table:
            payload["table"] = [
                {"targetPct": pct, **projection_mod.estimate_to_dict(e)}
                for pct, e in projection_mod.projection_table(trend)
            ]
        if compare and len(points) >= 3:
            payload["comparison"] = [
                {"family": d.family, "r2": d.r2, "coefficients": list(d.coefficients)}
                for d in projection_mod.compare_fits(points)
            ]
        click.echo(json.dumps(payload))
        return
    click.echo(
        f"fit: y = {trend.a:.4f}*ln(x) + {trend.b:.4f}"
        f"  (r2={trend.r2:.4f}, n={trend.point_count},"
        f" x in [{trend.x_min:.4g}, {trend.x_max:.4g}])"
    )
    warning = "  ** extrapolated beyond the fitted range **" if estimate.extrapolated else ""
    click.echo(
        f"required volume for {target_pct:.2f}%:"
        f" {estimate.decimal_string} characters{warning}"
    )
    if as_table:
        click.echo(projection_mod.render_projection_table(
            projection_mod.projection_table(trend)
        ))
    if compare and len(points) >= 3:
        for diag in projection_mod.compare_fits(points):
            click.echo(f"  {diag.family:<12} r2={diag.r2:.4f}")


@cli.command()
@click.option("--sample", type=click.IntRange(1), default=20, show_default=True)
@click.option("--rules", "rules_file", type=click.Path(exists=True, dir_okay=False),
              default=None, help="Rule-set configuration (JSON).")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--json", "as_json", is_flag=True)
@click.pass_context
def validate(ctx, sample, rules_file, seed, as_json):
    """Validate a random sample of distinct sentences."""
    store = _open_store(ctx)
    rule_set = (
        validation_mod.RuleSet.load(rules_file)
        if rules_file
        else validation_mod.default_rule_set()
    )
    ids = list(store.occurrence_counts(None))
    if not ids:
        raise SentbankError("store has no sentences to validate")
    rng = random.Random(seed)
    chosen = rng.sample(ids, min(sample, len(ids)))
    valid_count = 0
    for sentence in store.get_sentences(sorted(chosen)):
        report = validation_mod.validate_sentence(sentence.plain_text, rule_set)
        valid_count += report.valid
        if as_json:
            click.echo(json.dumps({
                "sentenceId": sentence.id,
                "valid": report.valid,
                "failedRules": list(report.failed_rule_ids),
            }))
        else:
            status = "valid  " if report.valid else "invalid"
            failures = f"  [{', '.join(report.failed_rule_ids)}]" if not report.valid else ""
            excerpt = sentence.plain_text[:60]
            click.echo(f"{status} #{sentence.id}  {excerpt!r}{failures}")
    pct = 100.0 * valid_count / len(chosen)
    click.echo(
        json.dumps({"sampled": len(chosen), "valid": valid_count,
                    "validPct": pct, "ruleSetVersion": rule_set.version})
        if as_json
        else f"sampled {len(chosen)}: {valid_count} valid ({pct:.2f}%),"
             f" rule set {rule_set.version}"
    )


@cli.command()
@click.pass_context
def audit(ctx):
    """Referential-integrity and hash-integrity report (JSONL)."""
    records = _open_store(ctx).audit()
    for record in records:
        click.echo(json.dumps(record))
    summary = records[-1]
    if summary.get("violations", 0) > 0:
        ctx.exit(2)


@cli.command()
@click.option("--port", type=int, default=8080, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--ui", "ui_dir", type=click.Path(exists=True, file_okay=False),
              default=None, help="Serve a built web UI from this directory.")
@click.pass_context
def serve(ctx, port, host, ui_dir):
    """Run the HTTP/JSON API (and optionally the web UI)."""
    import uvicorn

    from .service import create_app

    store = _open_store(ctx)
    app = create_app(store, ui_dir=ui_dir)
    uvicorn.run(app, host=host, port=port, log_level="warning")


def main(argv=None) -> int:
    try:
        # With standalone_mode off, click returns ctx.exit codes instead of
        # calling sys.exit, which keeps the code mappable here.
        rv = cli.main(args=argv, standalone_mode=False, prog_name="sentbank")
        return rv if isinstance(rv, int) else 0
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.UsageError as exc:
        exc.show(file=sys.stderr)
        return 1
    except click.ClickException as exc:
        exc.show(file=sys.stderr)
        return 2
    except SentbankError as exc:
        print(json.dumps({"error": exc.code, "message": exc.message}), file=sys.stderr)
        return 2
    except BrokenPipeError:
        return 0


if __name__ == "__main__":
    sys.exit(main())
