"""Convert raw input content (plain text, HTML) into normalized plain text.

Normalized plain text ("PlainText") is an ordinary ``str`` guaranteed to:

- contain no C0 control characters other than LF and TAB,
- use LF line endings only,
- carry no leading byte-order mark.

Paragraph breaks are preserved as blank lines; the sentence tokenizer
treats them as unconditional boundaries.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from html.parser import HTMLParser
from pathlib import Path

from .errors import UnsupportedMediaError

PLAIN_TEXT_MIME = "text/plain"
HTML_MIME = "text/html"

_MIME_BY_EXTENSION = {
    ".txt": PLAIN_TEXT_MIME,
    ".text": PLAIN_TEXT_MIME,
    ".html": HTML_MIME,
    ".htm": HTML_MIME,
}

# C0 controls except LF (0x0A) and TAB (0x09); CR is rewritten before this
# strip runs. DEL is removed as well.
_DISALLOWED_CONTROL_RE = re.compile(r"[\x00-\x08\x0b\x0c\x0e-\x1f\x7f]")


@dataclass(frozen=True)
class RawContent:
    """Undecoded input bytes plus the MIME type they claim to be."""

    data: bytes
    mime_type: str
    name: str = ""


def guess_mime_type(name: str, override: str | None = None) -> str:
    """MIME type from the file extension, unless an override is given."""
    if override:
        return override
    ext = Path(name).suffix.lower()
    try:
        return _MIME_BY_EXTENSION[ext]
    except KeyError:
        raise UnsupportedMediaError(
            f"cannot determine format of {name!r}; pass an explicit format",
            details={"supported": sorted(_MIME_BY_EXTENSION)},
        ) from None


def is_plain_text(text: str) -> bool:
    """Check the PlainText invariants (used by tests and the audit)."""
    return (
        "\r" not in text
        and not text.startswith("﻿")
        and _DISALLOWED_CONTROL_RE.search(text) is None
    )


def normalize_plain_text(data: bytes | str) -> str:
    """Decode and normalize plain text. Lossy by design: invalid UTF-8
    byte sequences become U+FFFD rather than failing the whole batch."""
    if isinstance(data, bytes):
        text = data.decode("utf-8", errors="replace")
    else:
        text = data
    if text.startswith("﻿"):
        text = text[1:]
    text = text.replace("\r\n", "\n").replace("\r", "\n")
    return _DISALLOWED_CONTROL_RE.sub("", text)


# Tags whose start or end forces a paragraph break so sentences never merge
# across blocks. Fixed, conservative list; per-source chrome is handled by
# exclusion selectors, not by growing this set.
BLOCK_TAGS = frozenset(
    {
        "p", "div", "li", "ul", "ol", "h1", "h2", "h3", "h4", "h5", "h6",
        "table", "tr", "td", "th", "blockquote", "pre", "br", "hr",
    }
)

# Content of these elements never reaches the output.
_SUPPRESSED_TAGS = frozenset({"script", "style", "head"})

# Elements that never contain content; they must not affect nesting depth.
_VOID_TAGS = frozenset(
    {
        "area", "base", "br", "col", "embed", "hr", "img", "input",
        "link", "meta", "param", "source", "track", "wbr",
    }
)

_SELECTOR_RE = re.compile(r"^([a-zA-Z][a-zA-Z0-9]*)?(?:([.#])([\w-]+))?$")


@dataclass(frozen=True)
class ExclusionSelector:
    """One entry of a per-source exclusion list.

    Supports the selector subset needed to drop navigation chrome:
    ``tag``, ``.class``, ``#id``, ``tag.class`` and ``tag#id``.
    """

    tag: str | None = None
    class_name: str | None = None
    element_id: str | None = None

    @classmethod
    def parse(cls, selector: str) -> "ExclusionSelector":
        m = _SELECTOR_RE.match(selector.strip())
        if not m or not m.group(0):
            raise ValueError(f"unsupported exclusion selector: {selector!r}")
        tag, kind, name = m.groups()
        if not tag and not kind:
            raise ValueError(f"unsupported exclusion selector: {selector!r}")
        return cls(
            tag=tag.lower() if tag else None,
            class_name=name if kind == "." else None,
            element_id=name if kind == "#" else None,
        )

    def matches(self, tag: str, attrs: dict[str, str | None]) -> bool:
        if self.tag and tag != self.tag:
            return False
        if self.element_id is not None and attrs.get("id") != self.element_id:
            return False
        if self.class_name is not None:
            classes = (attrs.get("class") or "").split()
            if self.class_name not in classes:
                return False
        return True


@dataclass
class HtmlExtractionConfig:
    """Per-source tuning for :func:`extract_html`."""

    exclude: list[ExclusionSelector] = field(default_factory=list)

    @classmethod
    def from_selectors(cls, selectors: list[str]) -> "HtmlExtractionConfig":
        return cls(exclude=[ExclusionSelector.parse(s) for s in selectors])


class _TextExtractor(HTMLParser):
    """Best-effort tree walk: tolerates malformed markup, decodes entities
    (convert_charrefs), and emits block boundaries as paragraph breaks."""

    def __init__(self, config: HtmlExtractionConfig):
        super().__init__(convert_charrefs=True)
        self._config = config
        self._suppress_depth = 0
        self._exclude_depth = 0
        self._parts: list[str] = []
        self._buffer: list[str] = []

    def _flush_block(self) -> None:
        text = "".join(self._buffer).strip()
        self._buffer.clear()
        if text:
            self._parts.append(text)

    def _hidden(self) -> bool:
        return self._suppress_depth > 0 or self._exclude_depth > 0

    def handle_starttag(self, tag, attrs):
        attr_map = dict(attrs)
        if self._exclude_depth > 0:
            if tag not in _VOID_TAGS:
                self._exclude_depth += 1
            return
        if any(sel.matches(tag, attr_map) for sel in self._config.exclude):
            if tag not in _VOID_TAGS:
                self._exclude_depth = 1
            return
        if tag in _SUPPRESSED_TAGS:
            self._suppress_depth += 1
            return
        if tag in BLOCK_TAGS and not self._hidden():
            self._flush_block()

    def handle_startendtag(self, tag, attrs):
        # <br/>, <hr/> and friends: block break without nesting.
        if tag in BLOCK_TAGS and not self._hidden():
            self._flush_block()

    def handle_endtag(self, tag):
        if self._exclude_depth > 0:
            if tag not in _VOID_TAGS:
                self._exclude_depth -= 1
            return
        if tag in _SUPPRESSED_TAGS:
            self._suppress_depth = max(0, self._suppress_depth - 1)
            return
        if tag in BLOCK_TAGS and not self._hidden():
            self._flush_block()

    def handle_data(self, data):
        if not self._hidden():
            self._buffer.append(data)

    def result(self) -> str:
        self._flush_block()
        return "\n\n".join(self._parts)


def extract_html(
    data: bytes | str, config: HtmlExtractionConfig | None = None
) -> str:
    """Extract plain text from HTML.

    Block-level elements are separated by blank lines so sentences never
    merge across blocks; inline tags are stripped without inserting breaks;
    script/style/head content and excluded subtrees are dropped.
    """
    if isinstance(data, bytes):
        markup = data.decode("utf-8", errors="replace")
    else:
        markup = data
    parser = _TextExtractor(config or HtmlExtractionConfig())
    parser.feed(markup)
    parser.close()
    return normalize_plain_text(parser.result())


def extract_content(
    raw: RawContent, html_config: HtmlExtractionConfig | None = None
) -> str:
    """Route by MIME type; unknown types are rejected."""
    mime = raw.mime_type.split(";")[0].strip().lower()
    if mime == PLAIN_TEXT_MIME:
        return normalize_plain_text(raw.data)
    if mime == HTML_MIME:
        return extract_html(raw.data, html_config)
    raise UnsupportedMediaError(
        f"unsupported media type {raw.mime_type!r}",
        details={"supported": [PLAIN_TEXT_MIME, HTML_MIME]},
    )


def extract_file(
    path: str | Path,
    mime_override: str | None = None,
    html_config: HtmlExtractionConfig | None = None,
) -> str:
    """Read a file and extract plain text, detecting the MIME type from the
    extension unless overridden."""
    p = Path(path)
    mime = guess_mime_type(p.name, mime_override)
    return extract_content(RawContent(p.read_bytes(), mime, p.name), html_config)
