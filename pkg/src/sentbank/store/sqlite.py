"""Embedded relational store backend (sqlite3).

One connection per thread (WAL journal, generous busy timeout); each
document ingests in a single IMMEDIATE transaction. There is deliberately
no uniqueness constraint on sentence text: very long sentences must stay
storable, so reads go through the (language, md5) index plus exact text
comparison, and duplicate rows from ingest races are merged by
``dedup_pass``.
"""

from __future__ import annotations

import sqlite3
import threading
from contextlib import contextmanager
from pathlib import Path
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

_SCHEMA = """
CREATE TABLE IF NOT EXISTS document (
    id INTEGER PRIMARY KEY,
    source_tag TEXT NOT NULL,
    name TEXT NOT NULL,
    mime_type TEXT NOT NULL,
    content TEXT NOT NULL,
    text_character_count INTEGER NOT NULL,
    text_byte_count INTEGER NOT NULL,
    created_at TEXT NOT NULL,
    UNIQUE (source_tag, name)
);
CREATE TABLE IF NOT EXISTS sentence (
    id INTEGER PRIMARY KEY,
    plain_text TEXT NOT NULL,
    md5hash TEXT NOT NULL,
    language_tag TEXT NOT NULL,
    valid INTEGER,
    rule_set_version TEXT
);
CREATE INDEX IF NOT EXISTS sentence_hash_idx
    ON sentence (language_tag, md5hash);
CREATE TABLE IF NOT EXISTS sentence_source (
    document_id INTEGER NOT NULL REFERENCES document (id),
    sentence_id INTEGER NOT NULL REFERENCES sentence (id),
    start_offset INTEGER NOT NULL,
    PRIMARY KEY (document_id, start_offset)
);
CREATE INDEX IF NOT EXISTS source_sentence_idx
    ON sentence_source (sentence_id);
CREATE TABLE IF NOT EXISTS sentence_translation (
    id INTEGER PRIMARY KEY,
    sentence_id INTEGER NOT NULL REFERENCES sentence (id),
    target_language TEXT NOT NULL,
    translated_text TEXT NOT NULL,
    contributor TEXT NOT NULL,
    votes INTEGER NOT NULL DEFAULT 0,
    created_at TEXT NOT NULL,
    UNIQUE (sentence_id, target_language, translated_text)
);
"""

_LOOKUP_CHUNK = 400  # keep IN () lists under sqlite's parameter limit


def _chunks(values: list, size: int) -> Iterator[list]:
    for i in range(0, len(values), size):
        yield values[i : i + size]


class SqliteStore(SentenceStore):
    def __init__(self, path: str | Path, tokenizer=None):
        super().__init__(tokenizer)
        self._path = str(path)
        self._memory = self._path == ":memory:"
        self._local = threading.local()
        self._conn_lock = threading.RLock()
        if self._memory:
            self._shared = self._open()
        else:
            Path(self._path).parent.mkdir(parents=True, exist_ok=True)
            self._open().close()
            self._local.conn = None

    def _open(self) -> sqlite3.Connection:
        conn = sqlite3.connect(
            self._path, isolation_level=None, check_same_thread=False
        )
        conn.execute("PRAGMA journal_mode=WAL")
        conn.execute("PRAGMA busy_timeout=30000")
        conn.execute("PRAGMA foreign_keys=ON")
        conn.execute("PRAGMA synchronous=NORMAL")
        conn.executescript(_SCHEMA)
        return conn

    @contextmanager
    def _connection(self):
        if self._memory:
            # A single shared in-memory database; serialize access.
            with self._conn_lock:
                yield self._shared
            return
        conn = getattr(self._local, "conn", None)
        if conn is None:
            conn = self._open()
            self._local.conn = conn
        yield conn

    @contextmanager
    def _transaction(self):
        with self._connection() as conn:
            conn.execute("BEGIN IMMEDIATE")
            try:
                yield conn
            except BaseException:
                conn.execute("ROLLBACK")
                raise
            conn.execute("COMMIT")

    def close(self):
        if self._memory:
            self._shared.close()
            return
        conn = getattr(self._local, "conn", None)
        if conn is not None:
            conn.close()
            self._local.conn = None

    # -- ingestion -----------------------------------------------------------

    def _commit_document(
        self, source_tag, name, mime_type, content, language_tag, sentences, hashes
    ):
        with self._transaction() as conn:
            row = conn.execute(
                "SELECT 1 FROM document WHERE source_tag = ? AND name = ?",
                (source_tag, name),
            ).fetchone()
            if row:
                raise AlreadyIngestedError(
                    f"document {name!r} already ingested under source {source_tag!r}"
                )
            cur = conn.execute(
                "INSERT INTO document (source_tag, name, mime_type, content,"
                " text_character_count, text_byte_count, created_at)"
                " VALUES (?, ?, ?, ?, ?, ?, ?)",
                (
                    source_tag,
                    name,
                    mime_type,
                    content,
                    len(content),
                    len(content.encode("utf-8")),
                    utc_now_iso(),
                ),
            )
            doc_id = cur.lastrowid

            # Resolve existing sentences in bulk via the hash index, lowest
            # id first so the canonical row wins.
            resolved: dict[tuple[str, str], int] = {}
            for chunk in _chunks(sorted(set(hashes)), _LOOKUP_CHUNK):
                marks = ",".join("?" * len(chunk))
                rows = conn.execute(
                    f"SELECT id, md5hash, plain_text FROM sentence"
                    f" WHERE language_tag = ? AND md5hash IN ({marks})"
                    f" ORDER BY id",
                    [language_tag, *chunk],
                )
                for sid, md5hash, text in rows:
                    resolved.setdefault((md5hash, text), sid)

            new = reused = 0
            source_rows = []
            for offset, (text, md5hash) in enumerate(zip(sentences, hashes)):
                key = (md5hash, text)
                sid = resolved.get(key)
                if sid is None:
                    cur = conn.execute(
                        "INSERT INTO sentence (plain_text, md5hash, language_tag)"
                        " VALUES (?, ?, ?)",
                        (text, md5hash, language_tag),
                    )
                    sid = cur.lastrowid
                    resolved[key] = sid
                    new += 1
                else:
                    reused += 1
                source_rows.append((doc_id, sid, offset))
            conn.executemany(
                "INSERT INTO sentence_source (document_id, sentence_id, start_offset)"
                " VALUES (?, ?, ?)",
                source_rows,
            )
        return doc_id, IngestStats(len(sentences), new, reused)

    def insert_sentence_raw(self, plain_text, md5hash, language_tag):
        with self._transaction() as conn:
            cur = conn.execute(
                "INSERT INTO sentence (plain_text, md5hash, language_tag)"
                " VALUES (?, ?, ?)",
                (plain_text, md5hash, language_tag),
            )
            return Sentence(cur.lastrowid, plain_text, md5hash, language_tag)

    # -- lookup ----------------------------------------------------------------

    def find_sentences_by_hash(self, md5hash, language_tag):
        with self._connection() as conn:
            rows = conn.execute(
                "SELECT id, plain_text, md5hash, language_tag, valid, rule_set_version"
                " FROM sentence WHERE language_tag = ? AND md5hash = ? ORDER BY id",
                (language_tag, md5hash),
            ).fetchall()
        return [self._sentence_from_row(r) for r in rows]

    @staticmethod
    def _sentence_from_row(row) -> Sentence:
        sid, text, md5hash, lang, valid, version = row
        return Sentence(
            id=sid,
            plain_text=text,
            md5hash=md5hash,
            language_tag=lang,
            valid=None if valid is None else bool(valid),
            rule_set_version=version,
        )

    # -- maintenance -------------------------------------------------------------

    def dedup_pass(self, language_tag=None):
        lang_clause = "" if language_tag is None else " WHERE language_tag = ?"
        params = [] if language_tag is None else [language_tag]
        with self._transaction() as conn:
            conn.execute("DROP TABLE IF EXISTS temp.dup_map")
            conn.execute(
                "CREATE TEMP TABLE dup_map AS"
                " SELECT s.id AS old_id, k.keep_id AS keep_id"
                " FROM sentence s JOIN ("
                "   SELECT language_tag, md5hash, plain_text, MIN(id) AS keep_id"
                f"   FROM sentence{lang_clause}"
                "   GROUP BY language_tag, md5hash, plain_text"
                "   HAVING COUNT(*) > 1"
                " ) k ON s.language_tag = k.language_tag"
                "   AND s.md5hash = k.md5hash"
                "   AND s.plain_text = k.plain_text"
                "   AND s.id != k.keep_id",
                params,
            )
            merged = conn.execute("SELECT COUNT(*) FROM dup_map").fetchone()[0]
            if merged:
                conn.execute(
                    "UPDATE sentence_source SET sentence_id ="
                    " (SELECT keep_id FROM dup_map WHERE old_id = sentence_id)"
                    " WHERE sentence_id IN (SELECT old_id FROM dup_map)"
                )
                conn.execute(
                    "UPDATE OR IGNORE sentence_translation SET sentence_id ="
                    " (SELECT keep_id FROM dup_map WHERE old_id = sentence_id)"
                    " WHERE sentence_id IN (SELECT old_id FROM dup_map)"
                )
                # Rows that could not repoint are duplicates of a surviving
                # translation: drop them.
                conn.execute(
                    "DELETE FROM sentence_translation"
                    " WHERE sentence_id IN (SELECT old_id FROM dup_map)"
                )
                conn.execute(
                    "DELETE FROM sentence WHERE id IN (SELECT old_id FROM dup_map)"
                )
            conn.execute("DROP TABLE dup_map")
        return merged

    def audit(self):
        records = []
        with self._connection() as conn:
            for (sid, doc_id, offset) in conn.execute(
                "SELECT ss.sentence_id, ss.document_id, ss.start_offset"
                " FROM sentence_source ss LEFT JOIN sentence s ON s.id = ss.sentence_id"
                " WHERE s.id IS NULL"
            ):
                records.append(
                    {"record": "dangling_source_sentence", "documentId": doc_id,
                     "sentenceId": sid, "startOffset": offset}
                )
            for (sid, doc_id, offset) in conn.execute(
                "SELECT ss.sentence_id, ss.document_id, ss.start_offset"
                " FROM sentence_source ss LEFT JOIN document d ON d.id = ss.document_id"
                " WHERE d.id IS NULL"
            ):
                records.append(
                    {"record": "dangling_source_document", "documentId": doc_id,
                     "sentenceId": sid, "startOffset": offset}
                )
            for (tid, sid) in conn.execute(
                "SELECT t.id, t.sentence_id FROM sentence_translation t"
                " LEFT JOIN sentence s ON s.id = t.sentence_id WHERE s.id IS NULL"
            ):
                records.append(
                    {"record": "dangling_translation", "translationId": tid,
                     "sentenceId": sid}
                )
            cursor = conn.execute("SELECT id, plain_text, md5hash FROM sentence ORDER BY id")
            while True:
                rows = cursor.fetchmany(10000)
                if not rows:
                    break
                for sid, text, stored in rows:
                    computed = compute_md5(text)
                    if computed != stored:
                        records.append(
                            {"record": "hash_mismatch", "sentenceId": sid,
                             "stored": stored, "computed": computed}
                        )
            duplicates = 0
            for (keep, extra) in conn.execute(
                "SELECT MIN(id), COUNT(*) - 1 FROM sentence"
                " GROUP BY language_tag, md5hash, plain_text HAVING COUNT(*) > 1"
            ):
                duplicates += extra
                records.append(
                    {"record": "duplicate_sentence_group", "canonicalId": keep,
                     "extraRows": extra}
                )
        violations = sum(
            1 for r in records if not r["record"].startswith("duplicate_sentence")
        )
        summary = self.counts()
        summary.update(
            {"record": "summary", "violations": violations, "duplicates": duplicates}
        )
        records.append(summary)
        return records

    # -- browsing ------------------------------------------------------------------

    _DOC_SUMMARY_SQL = (
        "SELECT d.id, d.source_tag, d.name, d.mime_type, d.text_character_count,"
        " d.text_byte_count, d.created_at,"
        " (SELECT COUNT(*) FROM sentence_source ss WHERE ss.document_id = d.id)"
        " FROM document d"
    )

    @staticmethod
    def _summary_from_row(row) -> DocumentSummary:
        return DocumentSummary(*row)

    def list_documents(self, source_tag=None, name_substring=None, page=1, page_size=20):
        page = max(1, page)
        page_size = max(1, page_size)
        clauses, params = [], []
        if source_tag is not None:
            clauses.append("d.source_tag = ?")
            params.append(source_tag)
        if name_substring:
            clauses.append("instr(lower(d.name), ?) > 0")
            params.append(name_substring.lower())
        where = f" WHERE {' AND '.join(clauses)}" if clauses else ""
        with self._connection() as conn:
            total = conn.execute(
                f"SELECT COUNT(*) FROM document d{where}", params
            ).fetchone()[0]
            rows = conn.execute(
                f"{self._DOC_SUMMARY_SQL}{where} ORDER BY d.id LIMIT ? OFFSET ?",
                [*params, page_size, (page - 1) * page_size],
            ).fetchall()
        return Page([self._summary_from_row(r) for r in rows], page, page_size, total)

    def get_document(self, document_id):
        with self._connection() as conn:
            row = conn.execute(
                "SELECT id, source_tag, name, mime_type, content,"
                " text_character_count, text_byte_count, created_at"
                " FROM document WHERE id = ?",
                (document_id,),
            ).fetchone()
        if row is None:
            raise NotFoundError(f"no document with id {document_id}")
        return Document(*row)

    def document_occurrences(self, document_id):
        self.get_document(document_id)
        with self._connection() as conn:
            rows = conn.execute(
                "SELECT document_id, sentence_id, start_offset FROM sentence_source"
                " WHERE document_id = ? ORDER BY start_offset",
                (document_id,),
            ).fetchall()
        return [SentenceSource(*r) for r in rows]

    def list_sentences(
        self, text_substring=None, language_tag=None, min_occurrences=None,
        page=1, page_size=20,
    ):
        page = max(1, page)
        page_size = max(1, page_size)
        clauses, params = [], []
        if text_substring:
            clauses.append("instr(lower(s.plain_text), ?) > 0")
            params.append(text_substring.lower())
        if language_tag is not None:
            clauses.append("s.language_tag = ?")
            params.append(language_tag)
        if min_occurrences is not None:
            clauses.append("COALESCE(c.n, 0) >= ?")
            params.append(min_occurrences)
        where = f" WHERE {' AND '.join(clauses)}" if clauses else ""
        base = (
            " FROM sentence s LEFT JOIN (SELECT sentence_id, COUNT(*) AS n"
            " FROM sentence_source GROUP BY sentence_id) c ON c.sentence_id = s.id"
        )
        with self._connection() as conn:
            total = conn.execute(
                f"SELECT COUNT(*){base}{where}", params
            ).fetchone()[0]
            rows = conn.execute(
                "SELECT s.id, s.plain_text, s.md5hash, s.language_tag, s.valid,"
                f" s.rule_set_version, COALESCE(c.n, 0){base}{where}"
                " ORDER BY s.id LIMIT ? OFFSET ?",
                [*params, page_size, (page - 1) * page_size],
            ).fetchall()
        items = [(self._sentence_from_row(r[:6]), r[6]) for r in rows]
        return Page(items, page, page_size, total)

    def get_sentence(self, sentence_id):
        with self._connection() as conn:
            row = conn.execute(
                "SELECT id, plain_text, md5hash, language_tag, valid, rule_set_version"
                " FROM sentence WHERE id = ?",
                (sentence_id,),
            ).fetchone()
        if row is None:
            raise NotFoundError(f"no sentence with id {sentence_id}")
        return self._sentence_from_row(row)

    def get_sentences(self, sentence_ids):
        out = []
        with self._connection() as conn:
            for chunk in _chunks(list(sentence_ids), _LOOKUP_CHUNK):
                marks = ",".join("?" * len(chunk))
                rows = conn.execute(
                    "SELECT id, plain_text, md5hash, language_tag, valid,"
                    f" rule_set_version FROM sentence WHERE id IN ({marks})"
                    " ORDER BY id",
                    chunk,
                ).fetchall()
                out.extend(self._sentence_from_row(r) for r in rows)
        return out

    def iter_sentences(self, language_tag=None):
        where = "" if language_tag is None else " WHERE language_tag = ?"
        params = [] if language_tag is None else [language_tag]
        with self._connection() as conn:
            cursor = conn.execute(
                "SELECT id, plain_text, md5hash, language_tag, valid, rule_set_version"
                f" FROM sentence{where} ORDER BY id",
                params,
            )
            while True:
                rows = cursor.fetchmany(5000)
                if not rows:
                    return
                for row in rows:
                    yield self._sentence_from_row(row)

    def occurrence_counts_for(self, sentence_ids):
        ids = list(sentence_ids)
        counts = {i: 0 for i in ids}
        with self._connection() as conn:
            for chunk in _chunks(ids, _LOOKUP_CHUNK):
                marks = ",".join("?" * len(chunk))
                for sid, n in conn.execute(
                    "SELECT sentence_id, COUNT(*) FROM sentence_source"
                    f" WHERE sentence_id IN ({marks}) GROUP BY sentence_id",
                    chunk,
                ):
                    counts[sid] = n
        return counts

    def documents_containing(self, sentence_id, limit=None):
        sql = (
            f"{self._DOC_SUMMARY_SQL} WHERE d.id IN"
            " (SELECT DISTINCT document_id FROM sentence_source WHERE sentence_id = ?)"
            " ORDER BY d.id"
        )
        params: list = [sentence_id]
        if limit is not None:
            sql += " LIMIT ?"
            params.append(limit)
        with self._connection() as conn:
            rows = conn.execute(sql, params).fetchall()
        return [self._summary_from_row(r) for r in rows]

    # -- scope queries ------------------------------------------------------------

    def source_tags(self):
        with self._connection() as conn:
            return [
                r[0]
                for r in conn.execute(
                    "SELECT DISTINCT source_tag FROM document ORDER BY source_tag"
                )
            ]

    def document_ids(self, source_tag=None):
        with self._connection() as conn:
            if source_tag is None:
                return [r[0] for r in conn.execute("SELECT id FROM document ORDER BY id")]
            ids = [
                r[0]
                for r in conn.execute(
                    "SELECT id FROM document WHERE source_tag = ? ORDER BY id",
                    (source_tag,),
                )
            ]
        if not ids:
            raise UnknownScopeError(f"unknown source tag {source_tag!r}")
        return ids

    def _scope_table(self, conn, document_ids) -> None:
        conn.execute("DROP TABLE IF EXISTS temp.scope_docs")
        conn.execute("CREATE TEMP TABLE scope_docs (id INTEGER PRIMARY KEY)")
        conn.executemany(
            "INSERT OR IGNORE INTO scope_docs (id) VALUES (?)",
            [(int(i),) for i in document_ids],
        )
        missing = conn.execute(
            "SELECT sd.id FROM scope_docs sd LEFT JOIN document d ON d.id = sd.id"
            " WHERE d.id IS NULL LIMIT 1"
        ).fetchone()
        if missing:
            conn.execute("DROP TABLE scope_docs")
            raise UnknownScopeError(f"no document with id {missing[0]}")

    def scope_totals(self, document_ids=None):
        with self._connection() as conn:
            if document_ids is None:
                row = conn.execute(
                    "SELECT COUNT(*), COALESCE(SUM(text_character_count), 0),"
                    " COALESCE(SUM(text_byte_count), 0) FROM document"
                ).fetchone()
                return tuple(row)
            self._scope_table(conn, document_ids)
            row = conn.execute(
                "SELECT COUNT(*), COALESCE(SUM(d.text_character_count), 0),"
                " COALESCE(SUM(d.text_byte_count), 0)"
                " FROM document d JOIN scope_docs sd ON sd.id = d.id"
            ).fetchone()
            conn.execute("DROP TABLE scope_docs")
            return tuple(row)

    def occurrence_counts(self, document_ids=None):
        with self._connection() as conn:
            if document_ids is None:
                rows = conn.execute(
                    "SELECT sentence_id, COUNT(*) FROM sentence_source"
                    " GROUP BY sentence_id"
                ).fetchall()
                return dict(rows)
            self._scope_table(conn, document_ids)
            rows = conn.execute(
                "SELECT ss.sentence_id, COUNT(*) FROM sentence_source ss"
                " JOIN scope_docs sd ON sd.id = ss.document_id"
                " GROUP BY ss.sentence_id"
            ).fetchall()
            conn.execute("DROP TABLE scope_docs")
            return dict(rows)

    # -- validation cache -----------------------------------------------------------

    def sentence_validity(self, sentence_ids):
        out: dict[int, tuple[bool | None, str | None]] = {}
        with self._connection() as conn:
            for chunk in _chunks(list(sentence_ids), _LOOKUP_CHUNK):
                marks = ",".join("?" * len(chunk))
                for sid, valid, version in conn.execute(
                    f"SELECT id, valid, rule_set_version FROM sentence WHERE id IN ({marks})",
                    chunk,
                ):
                    out[sid] = (None if valid is None else bool(valid), version)
        return out

    def set_sentence_validity(self, sentence_id, valid, rule_set_version):
        with self._connection() as conn:
            cur = conn.execute(
                "UPDATE sentence SET valid = ?, rule_set_version = ? WHERE id = ?",
                (int(valid), rule_set_version, sentence_id),
            )
            if cur.rowcount == 0:
                raise NotFoundError(f"no sentence with id {sentence_id}")

    # -- translations ------------------------------------------------------------------

    _TRANSLATION_COLS = (
        "id, sentence_id, target_language, translated_text, contributor,"
        " votes, created_at"
    )

    def add_translation(self, sentence_id, target_language, translated_text, contributor):
        self.get_sentence(sentence_id)
        with self._transaction() as conn:
            row = conn.execute(
                f"SELECT {self._TRANSLATION_COLS} FROM sentence_translation"
                " WHERE sentence_id = ? AND target_language = ? AND translated_text = ?",
                (sentence_id, target_language, translated_text),
            ).fetchone()
            if row:
                conn.execute(
                    "UPDATE sentence_translation SET votes = votes + 1 WHERE id = ?",
                    (row[0],),
                )
                record = SentenceTranslation(*row)
                record.votes += 1
                return record
            created = utc_now_iso()
            cur = conn.execute(
                "INSERT INTO sentence_translation"
                " (sentence_id, target_language, translated_text, contributor,"
                "  votes, created_at) VALUES (?, ?, ?, ?, 0, ?)",
                (sentence_id, target_language, translated_text, contributor, created),
            )
            return SentenceTranslation(
                cur.lastrowid, sentence_id, target_language, translated_text,
                contributor, 0, created,
            )

    def vote_translation(self, translation_id, delta=1):
        with self._transaction() as conn:
            cur = conn.execute(
                "UPDATE sentence_translation SET votes = votes + ? WHERE id = ?",
                (delta, translation_id),
            )
            if cur.rowcount == 0:
                raise NotFoundError(f"no translation with id {translation_id}")
            return conn.execute(
                "SELECT votes FROM sentence_translation WHERE id = ?",
                (translation_id,),
            ).fetchone()[0]

    def translations_for(self, sentence_id, target_language=None):
        clauses = ["sentence_id = ?"]
        params: list = [sentence_id]
        if target_language is not None:
            clauses.append("target_language = ?")
            params.append(target_language)
        with self._connection() as conn:
            rows = conn.execute(
                f"SELECT {self._TRANSLATION_COLS} FROM sentence_translation"
                f" WHERE {' AND '.join(clauses)}",
                params,
            ).fetchall()
        return rank_translations(SentenceTranslation(*r) for r in rows)

    def counts(self):
        with self._connection() as conn:
            return {
                "documents": conn.execute("SELECT COUNT(*) FROM document").fetchone()[0],
                "sentences": conn.execute("SELECT COUNT(*) FROM sentence").fetchone()[0],
                "sources": conn.execute("SELECT COUNT(*) FROM sentence_source").fetchone()[0],
                "translations": conn.execute(
                    "SELECT COUNT(*) FROM sentence_translation"
                ).fetchone()[0],
            }
