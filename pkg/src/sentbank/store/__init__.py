"""Persistent sentence store: documents, distinct sentences, occurrences,
translations; hash-indexed lookup, concurrent ingestion, duplicate
elimination."""

from .models import (
    Document,
    IngestStats,
    Page,
    Sentence,
    SentenceSource,
    SentenceTranslation,
    compute_md5,
)
from .base import SentenceStore
from .memory import MemoryStore
from .sqlite import SqliteStore

__all__ = [
    "Document",
    "IngestStats",
    "Page",
    "Sentence",
    "SentenceSource",
    "SentenceTranslation",
    "SentenceStore",
    "MemoryStore",
    "SqliteStore",
    "compute_md5",
]
