"""Abstract store contract plus the backend-independent operations.

Two implementations exist: :class:`~sentbank.store.memory.MemoryStore`
(tests, experiments) and :class:`~sentbank.store.sqlite.SqliteStore`
(embedded single-node persistence). Both tolerate transient duplicate
sentence rows created by concurrent ingestion; ``dedup_pass`` merges them.

Concurrency contract: distinct documents may be ingested concurrently and
each document commits atomically. A lookup during ingestion may miss a
sentence another worker is committing (accepted race). ``dedup_pass`` and
metric computation require a quiesced store for the affected language.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from ..tokenizer import SentenceTokenizer, default_tokenizer
from .models import (
    Document,
    IngestStats,
    Page,
    Sentence,
    SentenceSource,
    SentenceTranslation,
    compute_md5,
)


@dataclass(frozen=True)
class DocumentSummary:
    """Listing row: a document without its content payload."""

    id: int
    source_tag: str
    name: str
    mime_type: str
    text_character_count: int
    text_byte_count: int
    created_at: str
    sentence_count: int


class SentenceStore(ABC):
    """Operations over documents, sentences, occurrences and translations."""

    def __init__(self, tokenizer: SentenceTokenizer | None = None):
        self.tokenizer = tokenizer or default_tokenizer()

    # -- ingestion ---------------------------------------------------------

    def ingest_document(
        self,
        source_tag: str,
        name: str,
        mime_type: str,
        content: str,
        language_tag: str = "en",
    ) -> tuple[int, IngestStats]:
        """Tokenize *content* and commit the document atomically.

        *content* must already be normalized plain text. Sentences are
        resolved by hash lookup plus exact text comparison; existing rows
        are reused, missing ones inserted. Raises ``AlreadyIngestedError``
        for a (source_tag, name) pair that is already present.
        """
        sentences = self.tokenizer.split(content)
        hashes = [compute_md5(s) for s in sentences]
        return self._commit_document(
            source_tag, name, mime_type, content, language_tag, sentences, hashes
        )

    @abstractmethod
    def _commit_document(
        self,
        source_tag: str,
        name: str,
        mime_type: str,
        content: str,
        language_tag: str,
        sentences: list[str],
        hashes: list[str],
    ) -> tuple[int, IngestStats]:
        """Backend transaction: document row, sentence reuse/insert, one
        source row per occurrence. All-or-nothing."""

    # -- lookup ------------------------------------------------------------

    @abstractmethod
    def find_sentences_by_hash(
        self, md5hash: str, language_tag: str
    ) -> list[Sentence]:
        """All sentence rows indexed under (language, hash), ordered by id.
        Hash collisions mean several texts can share a bucket."""

    def find_sentence(self, plain_text: str, language_tag: str) -> Sentence | None:
        """Canonical (lowest-id) sentence with this exact text, if stored."""
        bucket = self.find_sentences_by_hash(
            compute_md5(plain_text), language_tag
        )
        for sentence in bucket:  # ordered by id, so first match is canonical
            if sentence.plain_text == plain_text:
                return sentence
        return None

    # -- maintenance -------------------------------------------------------

    @abstractmethod
    def dedup_pass(self, language_tag: str | None = None) -> int:
        """Merge duplicate (language, text) sentence rows: the lowest id
        survives, occurrences and translations are repointed (duplicate
        translations dropped). Returns the number of deleted rows.
        Idempotent."""

    @abstractmethod
    def audit(self) -> list[dict]:
        """Referential-integrity and hash-integrity report, one structured
        record per violation plus a trailing summary record."""

    # -- browsing ----------------------------------------------------------

    @abstractmethod
    def list_documents(
        self,
        source_tag: str | None = None,
        name_substring: str | None = None,
        page: int = 1,
        page_size: int = 20,
    ) -> Page:
        """Stable id-ordered page of :class:`DocumentSummary`."""

    @abstractmethod
    def get_document(self, document_id: int) -> Document:
        """Full document row; raises ``NotFoundError``."""

    @abstractmethod
    def document_occurrences(self, document_id: int) -> list[SentenceSource]:
        """Occurrences of one document ordered by start offset."""

    @abstractmethod
    def list_sentences(
        self,
        text_substring: str | None = None,
        language_tag: str | None = None,
        min_occurrences: int | None = None,
        page: int = 1,
        page_size: int = 20,
    ) -> Page:
        """Stable id-ordered page of (Sentence, occurrence_count) pairs."""

    @abstractmethod
    def get_sentence(self, sentence_id: int) -> Sentence:
        """Sentence row; raises ``NotFoundError``."""

    @abstractmethod
    def get_sentences(self, sentence_ids: Sequence[int]) -> list[Sentence]:
        """Sentence rows for the given ids (missing ids are skipped)."""

    @abstractmethod
    def iter_sentences(self, language_tag: str | None = None) -> Iterator[Sentence]:
        """All sentence rows, id order; used by audits and validation."""

    @abstractmethod
    def occurrence_counts_for(self, sentence_ids: Sequence[int]) -> dict[int, int]:
        """Global occurrence count per sentence id."""

    @abstractmethod
    def documents_containing(
        self, sentence_id: int, limit: int | None = None
    ) -> list[DocumentSummary]:
        """Distinct documents containing the sentence, id order."""

    def get_document_detail(
        self, document_id: int
    ) -> tuple[Document, list[tuple[SentenceSource, Sentence, int]]]:
        """Document plus its ordered occurrences, each with the sentence row
        and the sentence's global occurrence count."""
        doc = self.get_document(document_id)
        occurrences = self.document_occurrences(document_id)
        ids = sorted({o.sentence_id for o in occurrences})
        sentences = {s.id: s for s in self.get_sentences(ids)}
        counts = self.occurrence_counts_for(ids)
        detail = [
            (o, sentences[o.sentence_id], counts.get(o.sentence_id, 0))
            for o in occurrences
        ]
        return doc, detail

    def get_sentence_detail(
        self, sentence_id: int
    ) -> tuple[Sentence, int, list[DocumentSummary], list[SentenceTranslation]]:
        sentence = self.get_sentence(sentence_id)
        count = self.occurrence_counts_for([sentence_id]).get(sentence_id, 0)
        docs = self.documents_containing(sentence_id)
        translations = self.translations_for(sentence_id)
        return sentence, count, docs, translations

    # -- scope queries (metrics surface) ------------------------------------

    @abstractmethod
    def source_tags(self) -> list[str]:
        """Distinct source tags, sorted."""

    @abstractmethod
    def document_ids(self, source_tag: str | None = None) -> list[int]:
        """Ids of all documents, or of one source tag (raises
        ``UnknownScopeError`` for a tag with no documents)."""

    @abstractmethod
    def scope_totals(
        self, document_ids: Iterable[int] | None = None
    ) -> tuple[int, int, int]:
        """(documents, text characters, text bytes) over a document scope."""

    @abstractmethod
    def occurrence_counts(
        self, document_ids: Iterable[int] | None = None
    ) -> dict[int, int]:
        """sentence id -> occurrence count within the document scope
        (whole store when None)."""

    def distinct_sentence_ids(self, source_tag: str) -> set[int]:
        """Distinct sentence ids referenced by a source tag."""
        return set(self.occurrence_counts(self.document_ids(source_tag)))

    # -- validation cache ----------------------------------------------------

    @abstractmethod
    def sentence_validity(
        self, sentence_ids: Sequence[int]
    ) -> dict[int, tuple[bool | None, str | None]]:
        """Cached (valid, rule_set_version) per sentence id."""

    @abstractmethod
    def set_sentence_validity(
        self, sentence_id: int, valid: bool, rule_set_version: str
    ) -> None:
        """Cache one verdict; atomic per sentence."""

    # -- translations --------------------------------------------------------

    @abstractmethod
    def add_translation(
        self,
        sentence_id: int,
        target_language: str,
        translated_text: str,
        contributor: str,
    ) -> SentenceTranslation:
        """Store a candidate translation. An identical resubmission
        increments the existing record's votes (endorsement) instead of
        creating a duplicate."""

    @abstractmethod
    def vote_translation(self, translation_id: int, delta: int = 1) -> int:
        """Increment votes; returns the new count."""

    @abstractmethod
    def translations_for(
        self, sentence_id: int, target_language: str | None = None
    ) -> list[SentenceTranslation]:
        """Candidates ranked best first: votes desc, then newest."""

    # -- admin hooks ---------------------------------------------------------

    @abstractmethod
    def insert_sentence_raw(
        self, plain_text: str, md5hash: str, language_tag: str
    ) -> Sentence:
        """Low-level insert with a caller-supplied hash. Used by audits and
        tests (e.g. forcing hash collisions); bypasses hash computation."""

    @abstractmethod
    def counts(self) -> dict[str, int]:
        """Row counts: documents, sentences, sources, translations."""

    def close(self) -> None:  # pragma: no cover - trivial default
        pass


def rank_translations(
    translations: Iterable[SentenceTranslation],
) -> list[SentenceTranslation]:
    """Deterministic candidate order: votes desc, newest first, id desc."""
    return sorted(translations, key=lambda t: (t.votes, t.created_at, t.id), reverse=True)
