"""HTTP/JSON API over the store, metrics, limits, projection and
translation modules.

Every endpoint is a thin adapter: payloads are exactly the dict shapes
produced by the backing modules. Errors use one envelope,
``{"error": {"code", "message", "details"?}}``, with codes from the closed
set: not_found, validation_failed, already_ingested, unsupported_media,
degenerate_fit, non_invertible_trend, internal.

Numbers that can exceed 64 bits (ceilings, projected volumes) are
serialized as mantissa/exponent/decimalString, never as floats.
"""

from __future__ import annotations

import threading
from typing import Sequence

from fastapi import FastAPI, Query, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, PlainTextResponse
from pydantic import BaseModel
from starlette.concurrency import run_in_threadpool
from starlette.exceptions import HTTPException as StarletteHTTPException

from . import limits as limits_mod
from . import metrics as metrics_mod
from . import projection as projection_mod
from . import validation as validation_mod
from .errors import SentbankError, UnsupportedMediaError, ValidationFailedError
from .extraction import normalize_plain_text
from .store.base import DocumentSummary, SentenceStore
from .store.models import Sentence
from .translation import (
    DEFAULT_LANGUAGE_PAIRS,
    TranslationEngine,
    result_to_dict,
    translation_to_dict,
)

API_PREFIX = "/api/v1"
DEFAULT_UPLOAD_LIMIT = 50 * 1024 * 1024

_STATUS_BY_CODE = {
    "not_found": 404,
    "already_ingested": 409,
    "validation_failed": 422,
    "unsupported_media": 415,
    "degenerate_fit": 422,
    "non_invertible_trend": 422,
    "internal": 500,
}


class TranslateRequest(BaseModel):
    text: str
    sourceLang: str
    targetLang: str


class ContributionRequest(BaseModel):
    targetLang: str
    text: str
    contributor: str = "anonymous"


def _error_response(code: str, message: str, details: dict | None = None) -> JSONResponse:
    body: dict = {"error": {"code": code, "message": message}}
    if details:
        body["error"]["details"] = details
    return JSONResponse(body, status_code=_STATUS_BY_CODE.get(code, 500))


def _summary_to_dict(doc: DocumentSummary) -> dict:
    return {
        "id": doc.id,
        "sourceTag": doc.source_tag,
        "name": doc.name,
        "mimeType": doc.mime_type,
        "textCharacterCount": doc.text_character_count,
        "textByteCount": doc.text_byte_count,
        "createdAt": doc.created_at,
        "sentenceCount": doc.sentence_count,
    }


def _sentence_to_dict(sentence: Sentence, occurrence_count: int) -> dict:
    return {
        "id": sentence.id,
        "text": sentence.plain_text,
        "language": sentence.language_tag,
        "md5": sentence.md5hash,
        "occurrenceCount": occurrence_count,
    }


def create_app(
    store: SentenceStore,
    *,
    supported_pairs: Sequence[tuple[str, str]] = DEFAULT_LANGUAGE_PAIRS,
    upload_limit: int = DEFAULT_UPLOAD_LIMIT,
    cors_origins: Sequence[str] = ("*",),
    ui_dir: str | None = None,
) -> FastAPI:
    app = FastAPI(title="sentbank", version="1", docs_url=None, redoc_url=None)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=list(cors_origins),
        allow_methods=["*"],
        allow_headers=["*"],
    )
    engine = TranslationEngine(store, supported_pairs)

    # Concurrent uploads of the same (source, name) serialize on one lock.
    ingest_locks: dict[tuple[str, str], threading.Lock] = {}
    locks_guard = threading.Lock()

    def ingest_lock(key: tuple[str, str]) -> threading.Lock:
        with locks_guard:
            return ingest_locks.setdefault(key, threading.Lock())

    @app.exception_handler(SentbankError)
    async def sentbank_error(_request: Request, exc: SentbankError):
        return _error_response(exc.code, exc.message, exc.details)

    @app.exception_handler(RequestValidationError)
    async def request_error(_request: Request, exc: RequestValidationError):
        return _error_response(
            "validation_failed", "invalid request", {"errors": exc.errors()}
        )

    @app.exception_handler(StarletteHTTPException)
    async def http_error(_request: Request, exc: StarletteHTTPException):
        if exc.status_code in (404, 405):
            return _error_response("not_found", "no such route or resource")
        if exc.status_code == 415:
            return _error_response("unsupported_media", str(exc.detail))
        return _error_response("internal", str(exc.detail))

    @app.exception_handler(Exception)
    async def unexpected_error(_request: Request, exc: Exception):
        return _error_response("internal", f"{type(exc).__name__}: {exc}")

    @app.get(f"{API_PREFIX}/health")
    def health():
        return {"ok": True}

    @app.get(f"{API_PREFIX}/spec")
    def api_spec():
        return app.openapi()

    # -- documents -----------------------------------------------------------

    @app.post(f"{API_PREFIX}/documents")
    async def upload_document(
        request: Request,
        source: str | None = Query(None),
        name: str | None = Query(None),
        language: str = Query("en"),
    ):
        content_type = request.headers.get("content-type", "").split(";")[0].strip()
        if content_type == "multipart/form-data":
            form = await request.form()
            upload = form.get("file")
            if upload is None or isinstance(upload, str):
                raise ValidationFailedError("multipart body needs a 'file' part")
            file_type = (upload.content_type or "text/plain").split(";")[0].strip()
            if file_type not in ("text/plain", "application/octet-stream"):
                raise UnsupportedMediaError(
                    f"only plain text uploads are accepted, got {file_type!r}"
                )
            data = await upload.read()
            source = source or form.get("source")  # type: ignore[assignment]
            name = name or form.get("name") or upload.filename  # type: ignore[assignment]
            language = form.get("language") or language  # type: ignore[assignment]
        else:
            if content_type != "text/plain":
                raise UnsupportedMediaError(
                    f"only plain text uploads are accepted, got {content_type or 'no content type'!r}"
                )
            data = await request.body()
        if not source:
            raise ValidationFailedError("missing 'source' parameter")
        if not name:
            raise ValidationFailedError("missing 'name' parameter")
        if len(data) > upload_limit:
            raise ValidationFailedError(
                f"upload of {len(data)} bytes exceeds the {upload_limit} byte limit"
            )
        content = normalize_plain_text(data)

        def run():
            with ingest_lock((source, name)):
                return store.ingest_document(source, name, "text/plain", content, language)

        doc_id, stats = await run_in_threadpool(run)
        return {
            "documentId": doc_id,
            "ingestStats": {
                "sentences": stats.sentences,
                "newDistinct": stats.new_distinct,
                "reusedDistinct": stats.reused_distinct,
            },
        }

    @app.get(f"{API_PREFIX}/documents")
    def list_documents(
        query: str | None = None,
        source: str | None = None,
        page: int = Query(1, ge=1),
        pageSize: int = Query(20, ge=1, le=500),
    ):
        result = store.list_documents(
            source_tag=source, name_substring=query, page=page, page_size=pageSize
        )
        return {
            "items": [_summary_to_dict(d) for d in result.items],
            "page": result.page,
            "pageSize": result.page_size,
            "total": result.total,
        }

    @app.get(f"{API_PREFIX}/documents/{{document_id}}")
    def get_document(document_id: int):
        doc, detail = store.get_document_detail(document_id)
        sentences = []
        for occurrence, sentence, count in detail:
            entry = {
                "startOffset": occurrence.start_offset,
                "sentenceId": sentence.id,
                "text": sentence.plain_text,
                "occurrenceCount": count,
            }
            if count > 1:
                samples = store.documents_containing(sentence.id, limit=4)
                entry["documentsSample"] = [
                    {"id": s.id, "name": s.name}
                    for s in samples
                    if s.id != document_id
                ][:3]
            sentences.append(entry)
        return {
            "id": doc.id,
            "sourceTag": doc.source_tag,
            "name": doc.name,
            "mimeType": doc.mime_type,
            "textCharacterCount": doc.text_character_count,
            "textByteCount": doc.text_byte_count,
            "createdAt": doc.created_at,
            "sentences": sentences,
        }

    @app.get(f"{API_PREFIX}/documents/{{document_id}}/content")
    def get_document_content(document_id: int):
        doc = store.get_document(document_id)
        return PlainTextResponse(doc.content)

    # -- sentences -----------------------------------------------------------

    @app.get(f"{API_PREFIX}/sentences")
    def list_sentences(
        query: str | None = None,
        language: str | None = None,
        minOccurrences: int | None = Query(None, ge=0),
        page: int = Query(1, ge=1),
        pageSize: int = Query(20, ge=1, le=500),
    ):
        result = store.list_sentences(
            text_substring=query,
            language_tag=language,
            min_occurrences=minOccurrences,
            page=page,
            page_size=pageSize,
        )
        return {
            "items": [_sentence_to_dict(s, n) for s, n in result.items],
            "page": result.page,
            "pageSize": result.page_size,
            "total": result.total,
        }

    @app.get(f"{API_PREFIX}/sentences/{{sentence_id}}")
    def get_sentence(sentence_id: int):
        sentence, count, docs, translations = store.get_sentence_detail(sentence_id)
        payload = _sentence_to_dict(sentence, count)
        payload["documents"] = [_summary_to_dict(d) for d in docs]
        payload["translations"] = [translation_to_dict(t) for t in translations]
        return payload

    # -- translation -----------------------------------------------------------

    @app.post(f"{API_PREFIX}/translate")
    def translate(body: TranslateRequest):
        result = engine.translate_text(body.text, body.sourceLang, body.targetLang)
        return result_to_dict(result)

    @app.post(f"{API_PREFIX}/sentences/{{sentence_id}}/translations")
    def contribute_translation(sentence_id: int, body: ContributionRequest):
        record = engine.add_translation(
            sentence_id, body.targetLang, body.text, body.contributor
        )
        return translation_to_dict(record)

    @app.post(f"{API_PREFIX}/translations/{{translation_id}}/vote")
    def vote(translation_id: int):
        votes = engine.vote_translation(translation_id)
        return {"id": translation_id, "votes": votes}

    # -- metrics -----------------------------------------------------------------

    @app.get(f"{API_PREFIX}/metrics")
    def get_metrics(scope: str | None = None, validOnly: bool = False):
        metrics = metrics_mod.compute_metrics(store, scope, valid_only=validOnly)
        return metrics_mod.metrics_to_dict(metrics)

    @app.get(f"{API_PREFIX}/metrics/common")
    def get_common(sources: str):
        tags = [s for s in (t.strip() for t in sources.split(",")) if s]
        if not tags:
            raise ValidationFailedError("'sources' must list at least one source tag")
        return metrics_mod.common_matrix(store, tags)

    @app.get(f"{API_PREFIX}/validation")
    def get_validation(scope: str | None = None):
        report = validation_mod.validate_corpus(store, scope)
        out = {
            "distinctChecked": report.distinct_checked,
            "distinctValid": report.distinct_valid,
            "ruleSetVersion": report.rule_set_version,
        }
        if report.valid_pct is not None:
            out["validPct"] = report.valid_pct
        return out

    # -- limits ----------------------------------------------------------------

    @app.get(f"{API_PREFIX}/limits")
    def get_limits(
        vocab: int = Query(..., ge=1), maxWords: int = Query(..., ge=1, le=1000)
    ):
        return limits_mod.ceiling_to_dict(limits_mod.sentence_ceiling(vocab, maxWords))

    @app.get(f"{API_PREFIX}/limits/table")
    def get_limits_table():
        return {"rows": limits_mod.ceiling_table()}

    # -- projection ----------------------------------------------------------------

    @app.get(f"{API_PREFIX}/projection")
    def get_projection(
        targetPct: float = Query(..., gt=0),
        validOnly: bool = False,
        source: str | None = None,
        subsets: int = Query(5, ge=2, le=20),
    ):
        # Snapshot plan: documents in ingestion (id) order, split into
        # contiguous groups that accumulate into the cumulative series.
        doc_ids = store.document_ids(source)
        if len(doc_ids) < subsets:
            subsets = max(2, len(doc_ids))
        group_size = max(1, len(doc_ids) // subsets)
        plan = [
            doc_ids[i : i + group_size]
            for i in range(0, len(doc_ids), group_size)
        ]
        points = projection_mod.snapshot_series(store, plan, valid_only=validOnly)
        trend = projection_mod.fit_log_trend(points)
        estimate = projection_mod.required_volume(trend, targetPct)
        return {
            "fit": projection_mod.trend_to_dict(trend),
            "points": [
                {"textCharacters": p.text_characters, "repetitionPct": p.repetition_pct}
                for p in points
            ],
            "targetPct": targetPct,
            "requiredVolume": projection_mod.estimate_to_dict(estimate),
        }

    if ui_dir:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app
