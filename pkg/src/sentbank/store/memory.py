"""In-memory store backend.

Mutations happen under one lock; the ingest lookup phase reads committed
state and the commit publishes the whole document at once. Two workers can
therefore both miss a sentence and both insert it, exactly the duplicate
race the dedup pass exists to clean up.
"""

from __future__ import annotations

import threading
from typing import Iterator

from ..errors import AlreadyIngestedError, NotFoundError, UnknownScopeError
from .base import DocumentSummary, SentenceStore, rank_translations
from .models import (
    Document,
    IngestStats,
    Page,
    Sentence,
    SentenceSource,
    SentenceTranslation,
    compute_md5,
    utc_now_iso,
)


class MemoryStore(SentenceStore):
    def __init__(self, tokenizer=None):
        super().__init__(tokenizer)
        self._lock = threading.RLock()
        self._documents: dict[int, Document] = {}
        self._doc_index: dict[tuple[str, str], int] = {}
        self._sentences: dict[int, Sentence] = {}
        self._hash_index: dict[tuple[str, str], list[int]] = {}
        self._sources_by_doc: dict[int, list[SentenceSource]] = {}
        self._occurrences: dict[int, int] = {}
        self._translations: dict[int, SentenceTranslation] = {}
        self._translations_by_sentence: dict[int, list[int]] = {}
        self._translation_index: dict[tuple[int, str, str], int] = {}
        self._next_document_id = 1
        self._next_sentence_id = 1
        self._next_translation_id = 1

    # -- ingestion -----------------------------------------------------------

    def _commit_document(
        self, source_tag, name, mime_type, content, language_tag, sentences, hashes
    ):
        with self._lock:
            if (source_tag, name) in self._doc_index:
                raise AlreadyIngestedError(
                    f"document {name!r} already ingested under source {source_tag!r}"
                )

        # Lookup phase: committed reads plus local staging, outside the
        # commit lock. Concurrent committers may still insert the same text
        # after we looked; that duplicate is accepted and deduped later.
        resolved: dict[tuple[str, str], int | tuple[str, int]] = {}
        new_texts: list[tuple[str, str]] = []
        plan: list[int | tuple[str, int]] = []
        new = reused = 0
        for text, md5hash in zip(sentences, hashes):
            key = (md5hash, text)
            if key in resolved:
                reused += 1
            else:
                existing = self.find_sentence(text, language_tag)
                if existing is not None:
                    resolved[key] = existing.id
                    reused += 1
                else:
                    resolved[key] = ("new", len(new_texts))
                    new_texts.append((text, md5hash))
                    new += 1
            plan.append(resolved[key])

        with self._lock:
            if (source_tag, name) in self._doc_index:
                raise AlreadyIngestedError(
                    f"document {name!r} already ingested under source {source_tag!r}"
                )
            doc_id = self._next_document_id
            self._next_document_id += 1
            doc = Document(
                id=doc_id,
                source_tag=source_tag,
                name=name,
                mime_type=mime_type,
                content=content,
                text_character_count=len(content),
                text_byte_count=len(content.encode("utf-8")),
                created_at=utc_now_iso(),
            )
            self._documents[doc_id] = doc
            self._doc_index[(source_tag, name)] = doc_id

            new_ids = []
            for text, md5hash in new_texts:
                new_ids.append(self._insert_sentence(text, md5hash, language_tag))

            rows = []
            for offset, target in enumerate(plan):
                sid = new_ids[target[1]] if isinstance(target, tuple) else target
                rows.append(SentenceSource(doc_id, sid, offset))
                self._occurrences[sid] = self._occurrences.get(sid, 0) + 1
            self._sources_by_doc[doc_id] = rows
        return doc_id, IngestStats(len(sentences), new, reused)

    def _insert_sentence(self, plain_text, md5hash, language_tag) -> int:
        sid = self._next_sentence_id
        self._next_sentence_id += 1
        self._sentences[sid] = Sentence(sid, plain_text, md5hash, language_tag)
        self._hash_index.setdefault((language_tag, md5hash), []).append(sid)
        return sid

    def insert_sentence_raw(self, plain_text, md5hash, language_tag) -> Sentence:
        with self._lock:
            sid = self._insert_sentence(plain_text, md5hash, language_tag)
            self._occurrences.setdefault(sid, 0)
            return self._sentences[sid]

    # -- lookup ----------------------------------------------------------------

    def find_sentences_by_hash(self, md5hash, language_tag):
        with self._lock:
            ids = self._hash_index.get((language_tag, md5hash), [])
            return [self._sentences[i] for i in ids]

    # -- maintenance -------------------------------------------------------------

    def dedup_pass(self, language_tag=None):
        with self._lock:
            groups: dict[tuple[str, str], list[int]] = {}
            for sentence in self._sentences.values():
                if language_tag is not None and sentence.language_tag != language_tag:
                    continue
                groups.setdefault(
                    (sentence.language_tag, sentence.plain_text), []
                ).append(sentence.id)

            remap: dict[int, int] = {}
            for ids in groups.values():
                if len(ids) > 1:
                    ids.sort()
                    keep = ids[0]
                    for loser in ids[1:]:
                        remap[loser] = keep
            if not remap:
                return 0

            for doc_id, rows in self._sources_by_doc.items():
                self._sources_by_doc[doc_id] = [
                    SentenceSource(r.document_id, remap.get(r.sentence_id, r.sentence_id), r.start_offset)
                    for r in rows
                ]
            for loser, keep in remap.items():
                self._occurrences[keep] = self._occurrences.get(keep, 0) + self._occurrences.pop(loser, 0)

            for tid in list(self._translations):
                t = self._translations[tid]
                if t.sentence_id not in remap:
                    continue
                keep = remap[t.sentence_id]
                old_key = (t.sentence_id, t.target_language, t.translated_text)
                new_key = (keep, t.target_language, t.translated_text)
                self._translation_index.pop(old_key, None)
                self._translations_by_sentence[t.sentence_id].remove(tid)
                if new_key in self._translation_index:
                    del self._translations[tid]  # duplicate after merge: drop
                else:
                    t.sentence_id = keep
                    self._translation_index[new_key] = tid
                    self._translations_by_sentence.setdefault(keep, []).append(tid)

            for loser in remap:
                sentence = self._sentences.pop(loser)
                bucket = self._hash_index[(sentence.language_tag, sentence.md5hash)]
                bucket.remove(loser)
            return len(remap)

    def audit(self):
        with self._lock:
            records = []
            for doc_id, rows in self._sources_by_doc.items():
                for row in rows:
                    if row.document_id not in self._documents:
                        records.append(
                            {"record": "dangling_source_document",
                             "documentId": row.document_id,
                             "startOffset": row.start_offset}
                        )
                    if row.sentence_id not in self._sentences:
                        records.append(
                            {"record": "dangling_source_sentence",
                             "documentId": doc_id,
                             "sentenceId": row.sentence_id,
                             "startOffset": row.start_offset}
                        )
            for t in self._translations.values():
                if t.sentence_id not in self._sentences:
                    records.append(
                        {"record": "dangling_translation",
                         "translationId": t.id,
                         "sentenceId": t.sentence_id}
                    )
            for s in self._sentences.values():
                if compute_md5(s.plain_text) != s.md5hash:
                    records.append(
                        {"record": "hash_mismatch",
                         "sentenceId": s.id,
                         "stored": s.md5hash,
                         "computed": compute_md5(s.plain_text)}
                    )
            seen: dict[tuple[str, str], int] = {}
            duplicates = 0
            for s in self._sentences.values():
                key = (s.language_tag, s.plain_text)
                if key in seen:
                    duplicates += 1
                    records.append(
                        {"record": "duplicate_sentence",
                         "sentenceId": s.id,
                         "canonicalId": seen[key]}
                    )
                else:
                    seen[key] = s.id
            summary = self.counts()
            summary.update({"record": "summary", "violations": len(records) - duplicates, "duplicates": duplicates})
            records.append(summary)
            return records

    # -- browsing ------------------------------------------------------------------

    def _summarize(self, doc: Document) -> DocumentSummary:
        return DocumentSummary(
            id=doc.id,
            source_tag=doc.source_tag,
            name=doc.name,
            mime_type=doc.mime_type,
            text_character_count=doc.text_character_count,
            text_byte_count=doc.text_byte_count,
            created_at=doc.created_at,
            sentence_count=len(self._sources_by_doc.get(doc.id, [])),
        )

    @staticmethod
    def _paginate(items: list, page: int, page_size: int) -> Page:
        page = max(1, page)
        page_size = max(1, page_size)
        start = (page - 1) * page_size
        return Page(items[start : start + page_size], page, page_size, len(items))

    def list_documents(self, source_tag=None, name_substring=None, page=1, page_size=20):
        with self._lock:
            needle = name_substring.lower() if name_substring else None
            docs = [
                self._summarize(d)
                for d in sorted(self._documents.values(), key=lambda d: d.id)
                if (source_tag is None or d.source_tag == source_tag)
                and (needle is None or needle in d.name.lower())
            ]
            return self._paginate(docs, page, page_size)

    def get_document(self, document_id):
        with self._lock:
            try:
                return self._documents[document_id]
            except KeyError:
                raise NotFoundError(f"no document with id {document_id}") from None

    def document_occurrences(self, document_id):
        with self._lock:
            if document_id not in self._documents:
                raise NotFoundError(f"no document with id {document_id}")
            return sorted(
                self._sources_by_doc.get(document_id, []),
                key=lambda r: r.start_offset,
            )

    def list_sentences(
        self, text_substring=None, language_tag=None, min_occurrences=None,
        page=1, page_size=20,
    ):
        with self._lock:
            needle = text_substring.lower() if text_substring else None
            rows = []
            for s in sorted(self._sentences.values(), key=lambda s: s.id):
                if language_tag is not None and s.language_tag != language_tag:
                    continue
                if needle is not None and needle not in s.plain_text.lower():
                    continue
                count = self._occurrences.get(s.id, 0)
                if min_occurrences is not None and count < min_occurrences:
                    continue
                rows.append((s, count))
            return self._paginate(rows, page, page_size)

    def get_sentence(self, sentence_id):
        with self._lock:
            try:
                return self._sentences[sentence_id]
            except KeyError:
                raise NotFoundError(f"no sentence with id {sentence_id}") from None

    def get_sentences(self, sentence_ids):
        with self._lock:
            return [self._sentences[i] for i in sentence_ids if i in self._sentences]

    def iter_sentences(self, language_tag=None) -> Iterator[Sentence]:
        with self._lock:
            snapshot = sorted(self._sentences.values(), key=lambda s: s.id)
        for s in snapshot:
            if language_tag is None or s.language_tag == language_tag:
                yield s

    def occurrence_counts_for(self, sentence_ids):
        with self._lock:
            return {i: self._occurrences.get(i, 0) for i in sentence_ids}

    def documents_containing(self, sentence_id, limit=None):
        with self._lock:
            doc_ids = sorted(
                {
                    r.document_id
                    for rows in self._sources_by_doc.values()
                    for r in rows
                    if r.sentence_id == sentence_id
                }
            )
            if limit is not None:
                doc_ids = doc_ids[:limit]
            return [self._summarize(self._documents[d]) for d in doc_ids]

    # -- scope queries ------------------------------------------------------------

    def source_tags(self):
        with self._lock:
            return sorted({d.source_tag for d in self._documents.values()})

    def document_ids(self, source_tag=None):
        with self._lock:
            if source_tag is None:
                return sorted(self._documents)
            ids = sorted(
                d.id for d in self._documents.values() if d.source_tag == source_tag
            )
            if not ids:
                raise UnknownScopeError(f"unknown source tag {source_tag!r}")
            return ids

    def scope_totals(self, document_ids=None):
        with self._lock:
            if document_ids is None:
                docs = list(self._documents.values())
            else:
                docs = [self._require_document(i) for i in document_ids]
            return (
                len(docs),
                sum(d.text_character_count for d in docs),
                sum(d.text_byte_count for d in docs),
            )

    def _require_document(self, document_id) -> Document:
        try:
            return self._documents[document_id]
        except KeyError:
            raise UnknownScopeError(f"no document with id {document_id}") from None

    def occurrence_counts(self, document_ids=None):
        with self._lock:
            if document_ids is None:
                return dict(self._occurrences)
            counts: dict[int, int] = {}
            for doc_id in document_ids:
                self._require_document(doc_id)
                for row in self._sources_by_doc.get(doc_id, []):
                    counts[row.sentence_id] = counts.get(row.sentence_id, 0) + 1
            return counts

    # -- validation cache -----------------------------------------------------------

    def sentence_validity(self, sentence_ids):
        with self._lock:
            return {
                i: (self._sentences[i].valid, self._sentences[i].rule_set_version)
                for i in sentence_ids
                if i in self._sentences
            }

    def set_sentence_validity(self, sentence_id, valid, rule_set_version):
        with self._lock:
            sentence = self._sentences.get(sentence_id)
            if sentence is None:
                raise NotFoundError(f"no sentence with id {sentence_id}")
            sentence.valid = valid
            sentence.rule_set_version = rule_set_version

    # -- translations ------------------------------------------------------------------

    def add_translation(self, sentence_id, target_language, translated_text, contributor):
        with self._lock:
            if sentence_id not in self._sentences:
                raise NotFoundError(f"no sentence with id {sentence_id}")
            key = (sentence_id, target_language, translated_text)
            existing_id = self._translation_index.get(key)
            if existing_id is not None:
                existing = self._translations[existing_id]
                existing.votes += 1  # resubmission counts as endorsement
                return existing
            tid = self._next_translation_id
            self._next_translation_id += 1
            record = SentenceTranslation(
                id=tid,
                sentence_id=sentence_id,
                target_language=target_language,
                translated_text=translated_text,
                contributor=contributor,
            )
            self._translations[tid] = record
            self._translations_by_sentence.setdefault(sentence_id, []).append(tid)
            self._translation_index[key] = tid
            return record

    def vote_translation(self, translation_id, delta=1):
        with self._lock:
            record = self._translations.get(translation_id)
            if record is None:
                raise NotFoundError(f"no translation with id {translation_id}")
            record.votes += delta
            return record.votes

    def translations_for(self, sentence_id, target_language=None):
        with self._lock:
            ids = self._translations_by_sentence.get(sentence_id, [])
            rows = [
                self._translations[t]
                for t in ids
                if target_language is None
                or self._translations[t].target_language == target_language
            ]
            return rank_translations(rows)

    def counts(self):
        with self._lock:
            return {
                "documents": len(self._documents),
                "sentences": len(self._sentences),
                "sources": sum(len(v) for v in self._sources_by_doc.values()),
                "translations": len(self._translations),
            }
