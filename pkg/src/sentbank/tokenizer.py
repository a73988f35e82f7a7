"""Deterministic rule-based sentence splitting.

The split rules:

- ``.`` ``!`` ``?`` (optionally followed by closing quotes/brackets) end a
  sentence when followed by whitespace and then an uppercase letter, a
  digit, or an opening quote/bracket;
- a token from the abbreviation list suppresses the boundary;
- an ellipsis (two or more dots) ends a sentence only before whitespace
  plus an uppercase letter;
- a blank line always ends a sentence;
- end of text ends a sentence even without a terminator.

Output sentences are trimmed and have interior whitespace runs (including
single line breaks) collapsed to one space; the position of a sentence in
the returned list is its 0-based sequence order number within the text.

The same tokenizer instance must be used for ingestion and for translation
lookups: the repetition metrics are only meaningful if splitting is
consistent across all measurements.
"""

from __future__ import annotations

import re
from importlib import resources
from pathlib import Path
from typing import Iterable

_PARAGRAPH_SPLIT_RE = re.compile(r"\n(?:[ \t]*\n)+")
_WHITESPACE_RUN_RE = re.compile(r"\s+")
# Terminator run, optional closing punctuation, then the whitespace that
# separates it from the next sentence candidate.
_CANDIDATE_RE = re.compile(r"([.!?]+)([)\]}\"'”’»]*)(\s+)")
_LAST_TOKEN_RE = re.compile(r"(\S+)\Z")
_LAST_TWO_TOKENS_RE = re.compile(r"(\S+)\s+(\S+)\Z")

# Abbreviation lookbehind window. A token that overruns it cannot match any
# realistic abbreviation entry anyway, and bounding the slice keeps the
# split linear in text size (whole-prefix slices made it quadratic).
_ABBREV_WINDOW = 80

_OPENERS = frozenset("\"'([{“‘«")


def load_abbreviations(path: str | Path | None = None) -> frozenset[str]:
    """Load the abbreviation list: one token per line, ``#`` comments.

    Entries are stored lowercased; multi-word entries are kept with single
    spaces between words.
    """
    if path is None:
        text = (
            resources.files("sentbank.data")
            .joinpath("abbreviations.txt")
            .read_text("utf-8")
        )
    else:
        text = Path(path).read_text("utf-8")
    entries = set()
    for line in text.splitlines():
        entry = line.split("#", 1)[0].strip()
        if entry:
            entries.add(" ".join(entry.lower().split()))
    return frozenset(entries)


class SentenceTokenizer:
    """Splits normalized plain text into sentences; pure and thread-safe."""

    def __init__(self, abbreviations: Iterable[str] | None = None):
        if abbreviations is None:
            self.abbreviations = load_abbreviations()
        else:
            self.abbreviations = frozenset(
                " ".join(a.lower().split()) for a in abbreviations
            )

    def split(self, text: str) -> list[str]:
        """Ordered sentences; the list index is the sequence order number."""
        sentences: list[str] = []
        for paragraph in _PARAGRAPH_SPLIT_RE.split(text):
            self._split_paragraph(paragraph, sentences)
        return sentences

    def _split_paragraph(self, paragraph: str, out: list[str]) -> None:
        start = 0
        for match in _CANDIDATE_RE.finditer(paragraph):
            if match.start() < start:
                continue
            if not self._is_boundary(paragraph, match):
                continue
            span = paragraph[start : match.end(2)]
            start = match.end()
            sentence = _WHITESPACE_RUN_RE.sub(" ", span).strip()
            if sentence:
                out.append(sentence)
        tail = _WHITESPACE_RUN_RE.sub(" ", paragraph[start:]).strip()
        if tail:
            out.append(tail)

    def _is_boundary(self, paragraph: str, match: re.Match) -> bool:
        if match.end() >= len(paragraph):
            # Trailing whitespace; the paragraph flush handles the tail.
            return False
        nxt = paragraph[match.end()]
        terminators = match.group(1)
        if terminators.count(".") >= 2:
            # Ellipsis: only an uppercase letter restarts a sentence.
            return nxt.isupper()
        if not (nxt.isupper() or nxt.isdigit() or nxt in _OPENERS):
            return False
        if terminators == ".":
            return not self._is_abbreviation(paragraph, match.start())
        return True

    def _is_abbreviation(self, paragraph: str, dot_pos: int) -> bool:
        before = paragraph[max(0, dot_pos - _ABBREV_WINDOW) : dot_pos]
        m = _LAST_TOKEN_RE.search(before)
        if not m:
            return False
        token = (m.group(1) + ".").lower().lstrip("\"'([{“‘«")
        if token in self.abbreviations:
            return True
        m2 = _LAST_TWO_TOKENS_RE.search(before)
        if m2:
            pair = f"{m2.group(1)} {m2.group(2)}.".lower()
            if pair in self.abbreviations:
                return True
        return False


_default_tokenizer: SentenceTokenizer | None = None


def default_tokenizer() -> SentenceTokenizer:
    """Shared instance backed by the packaged abbreviation list."""
    global _default_tokenizer
    if _default_tokenizer is None:
        _default_tokenizer = SentenceTokenizer()
    return _default_tokenizer


def split_sentences(text: str) -> list[str]:
    """Convenience wrapper over :func:`default_tokenizer`."""
    return default_tokenizer().split(text)
