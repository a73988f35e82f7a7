"""Search-only translation.

Input text is split with the same tokenizer used at ingestion, each
sentence is looked up by exact match, and the result is a list of per-
sentence segments: translated (with ranked candidates) or missing. There
is deliberately no fuzzy matching and no paragraph reconstruction; the
segment list is the result.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import (
    NotFoundError,
    UnsupportedLanguagePairError,
    ValidationFailedError,
)
from .store.base import SentenceStore
from .store.models import SentenceTranslation

# Open site defaults; engines may be constructed with any pair set.
DEFAULT_LANGUAGE_PAIRS = (("en", "pt"), ("pt", "en"))

STATUS_TRANSLATED = "translated"
STATUS_MISSING = "missing"


@dataclass(frozen=True)
class TranslationSegment:
    sentence_text: str
    start_offset: int
    status: str
    candidates: tuple[SentenceTranslation, ...]
    sentence_id: int | None = None


@dataclass(frozen=True)
class TranslationResult:
    segments: tuple[TranslationSegment, ...]
    coverage_pct: float | None
    source_language: str
    target_language: str


class TranslationEngine:
    """Binds a store to a set of supported language pairs."""

    def __init__(
        self,
        store: SentenceStore,
        supported_pairs: Sequence[tuple[str, str]] = DEFAULT_LANGUAGE_PAIRS,
    ):
        self.store = store
        self.supported_pairs = [tuple(p) for p in supported_pairs]

    def translate_text(
        self, text: str, source_language: str, target_language: str
    ) -> TranslationResult:
        """Tokenize, look up each sentence, report per-segment status.

        A segment is translated iff its sentence is stored and has at least
        one candidate for the target language; candidates come best first
        (votes, then newest).
        """
        if (source_language, target_language) not in self.supported_pairs:
            raise UnsupportedLanguagePairError(
                source_language, target_language, self.supported_pairs
            )
        segments = []
        translated = 0
        for offset, sentence_text in enumerate(self.store.tokenizer.split(text)):
            sentence = self.store.find_sentence(sentence_text, source_language)
            candidates: tuple[SentenceTranslation, ...] = ()
            if sentence is not None:
                candidates = tuple(
                    self.store.translations_for(sentence.id, target_language)
                )
            status = STATUS_TRANSLATED if candidates else STATUS_MISSING
            translated += status == STATUS_TRANSLATED
            segments.append(
                TranslationSegment(
                    sentence_text=sentence_text,
                    start_offset=offset,
                    status=status,
                    candidates=candidates,
                    sentence_id=None if sentence is None else sentence.id,
                )
            )
        coverage = 100.0 * translated / len(segments) if segments else None
        return TranslationResult(
            segments=tuple(segments),
            coverage_pct=coverage,
            source_language=source_language,
            target_language=target_language,
        )

    def add_translation(
        self,
        sentence_id: int,
        target_language: str,
        translated_text: str,
        contributor: str,
    ) -> SentenceTranslation:
        """Store a candidate; an identical resubmission endorses the
        existing record (votes + 1) instead of duplicating it."""
        if not translated_text or not translated_text.strip():
            raise ValidationFailedError("translated text must not be empty")
        # Existence check up front so a missing sentence reads as not_found,
        # not as a storage error.
        self.store.get_sentence(sentence_id)
        return self.store.add_translation(
            sentence_id, target_language, translated_text, contributor
        )

    def vote_translation(self, translation_id: int, delta: int = 1) -> int:
        if delta != 1:
            raise ValidationFailedError("votes increment by exactly 1")
        try:
            return self.store.vote_translation(translation_id, delta)
        except NotFoundError:
            raise


# -- presentation ------------------------------------------------------------

def translation_to_dict(record: SentenceTranslation) -> dict:
    return {
        "id": record.id,
        "sentenceId": record.sentence_id,
        "targetLanguage": record.target_language,
        "text": record.translated_text,
        "contributor": record.contributor,
        "votes": record.votes,
        "createdAt": record.created_at,
    }


def result_to_dict(result: TranslationResult) -> dict:
    out: dict = {
        "sourceLanguage": result.source_language,
        "targetLanguage": result.target_language,
        "segments": [
            {
                "text": s.sentence_text,
                "startOffset": s.start_offset,
                "status": s.status,
                "sentenceId": s.sentence_id,
                "candidates": [translation_to_dict(c) for c in s.candidates],
            }
            for s in result.segments
        ],
    }
    if result.coverage_pct is not None:
        out["coveragePct"] = result.coverage_pct
    return out
