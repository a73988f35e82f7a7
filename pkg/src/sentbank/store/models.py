"""Rows of the sentence data model and the content-address hash."""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Any


def compute_md5(text: str) -> str:
    """MD5 of the UTF-8 bytes of *text*, as 32 lowercase hex chars.

    MD5 is a deliberate choice: small, fast, identical across ecosystems.
    It is a read index, not a security boundary; collisions are expected
    and resolved by exact text comparison.
    """
    return hashlib.md5(text.encode("utf-8")).hexdigest()


def utc_now_iso() -> str:
    return datetime.now(timezone.utc).isoformat()


@dataclass
class Document:
    """One ingested text artifact with its full plain-text content."""

    id: int
    source_tag: str
    name: str
    mime_type: str
    content: str
    text_character_count: int
    text_byte_count: int
    created_at: str


@dataclass
class Sentence:
    """A distinct plain-text sentence, content-addressed by MD5.

    ``valid``/``rule_set_version`` cache the validation verdict for the
    rule-set version that produced it.
    """

    id: int
    plain_text: str
    md5hash: str
    language_tag: str
    valid: bool | None = None
    rule_set_version: str | None = None


@dataclass(frozen=True)
class SentenceSource:
    """One occurrence of a sentence in a document at a sequence position."""

    document_id: int
    sentence_id: int
    start_offset: int


@dataclass
class SentenceTranslation:
    """A possible (context-free) translation of a sentence."""

    id: int
    sentence_id: int
    target_language: str
    translated_text: str
    contributor: str
    votes: int = 0
    created_at: str = field(default_factory=utc_now_iso)


@dataclass(frozen=True)
class IngestStats:
    """Per-occurrence lookup outcomes for one document ingestion.

    ``new_distinct`` counts occurrences that inserted a sentence row,
    ``reused_distinct`` counts occurrences that matched an existing row
    (including one staged earlier in the same document). The two always
    sum to ``sentences``.
    """

    sentences: int
    new_distinct: int
    reused_distinct: int


@dataclass(frozen=True)
class Page:
    """One page of a stable, id-ordered listing."""

    items: list[Any]
    page: int
    page_size: int
    total: int
