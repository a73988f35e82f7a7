"""Sentence-repetition metrics over any scope of the store.

A scope is the whole store (``None``), one source tag (``str``), or an
explicit collection of document ids. "Repetition" is counted strictly
within the requested scope: a sentence is *with repetitions* iff it is
referenced more than once inside the scope, regardless of which documents
reference it.

Percentages are carried at full precision and rounded to two decimals only
at presentation; when a denominator is zero the percentage is absent
(``None``), never 0 or NaN.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import UnknownScopeError
from .store.base import SentenceStore

Scope = None | str | Iterable[int]


@dataclass(frozen=True)
class CorpusMetrics:
    documents: int
    text_characters: int
    text_bytes: int
    sentences: int
    distinct_sentences: int
    d_sentences_with_repetitions: int
    unique_d_sentences: int
    distinct_pct: float | None
    with_repetitions_pct: float | None
    unique_pct: float | None
    non_unique_pct: float | None
    valid_only: bool = False
    rule_set_version: str | None = None


def resolve_scope(store: SentenceStore, scope: Scope) -> list[int] | None:
    """Scope -> document ids (None means the whole store)."""
    if scope is None:
        return None
    if isinstance(scope, str):
        return store.document_ids(scope)
    return sorted(int(i) for i in scope)


def _pct(numerator: int, denominator: int) -> float | None:
    return 100.0 * numerator / denominator if denominator else None


def compute_metrics(
    store: SentenceStore,
    scope: Scope = None,
    valid_only: bool = False,
    rule_set=None,
) -> CorpusMetrics:
    """Counts over occurrences and the distinct sentences they reference.

    Requires a quiesced, deduplicated store. With ``valid_only``, distinct
    sentences are filtered through the validation pipeline first and the
    occurrence counts restricted accordingly; document and character totals
    are unchanged (they describe the scope, not the filter).
    """
    doc_ids = resolve_scope(store, scope)
    documents, characters, byte_count = store.scope_totals(doc_ids)
    counts = store.occurrence_counts(doc_ids)

    version = None
    if valid_only:
        from . import validation

        rules = rule_set or validation.default_rule_set()
        version = rules.version
        valid_ids = validation.ensure_validity(store, list(counts), rules)
        counts = {sid: n for sid, n in counts.items() if sid in valid_ids}

    sentences = sum(counts.values())
    distinct = len(counts)
    repeated = sum(1 for n in counts.values() if n > 1)
    unique = distinct - repeated

    return CorpusMetrics(
        documents=documents,
        text_characters=characters,
        text_bytes=byte_count,
        sentences=sentences,
        distinct_sentences=distinct,
        d_sentences_with_repetitions=repeated,
        unique_d_sentences=unique,
        distinct_pct=_pct(distinct, sentences),
        with_repetitions_pct=_pct(repeated, distinct),
        unique_pct=_pct(unique, distinct),
        non_unique_pct=_pct(sentences - unique, sentences),
        valid_only=valid_only,
        rule_set_version=version,
    )


def common_distinct_sentences(
    store: SentenceStore, scope_a: str, scope_b: str
) -> int:
    """Distinct sentences referenced in both source tags. Symmetric;
    ``common(X, X)`` equals the distinct count of X."""
    ids_a = store.distinct_sentence_ids(scope_a)
    if scope_a == scope_b:
        return len(ids_a)
    return len(ids_a & store.distinct_sentence_ids(scope_b))


def common_distinct_all(store: SentenceStore, scopes: Sequence[str]) -> int:
    """Size of the distinct-sentence intersection across all the scopes."""
    if not scopes:
        raise UnknownScopeError("no source tags given")
    common: set[int] | None = None
    for tag in scopes:
        ids = store.distinct_sentence_ids(tag)
        common = ids if common is None else common & ids
        if not common:
            return 0
    return len(common)


def common_matrix(store: SentenceStore, sources: Sequence[str]) -> dict:
    """Pairwise common counts plus the all-sources intersection."""
    n = len(sources)
    id_sets = [store.distinct_sentence_ids(tag) for tag in sources]
    matrix = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1):
            if i == j:
                matrix[i][j] = len(id_sets[i])
            else:
                matrix[i][j] = matrix[j][i] = len(id_sets[i] & id_sets[j])
    all_common = len(set.intersection(*id_sets)) if id_sets else 0
    return {"sources": list(sources), "matrix": matrix, "allCommon": all_common}


# -- presentation ------------------------------------------------------------

_ROWS = [
    ("#documents", "documents", False),
    ("#text characters (UTF-8)", "text_characters", False),
    ("#text bytes (UTF-8)", "text_bytes", False),
    ("#sentences", "sentences", False),
    ("#distinct sentences", "distinct_sentences", False),
    ("#distinct sentences %", "distinct_pct", True),
    ("#d.sentences with repetitions", "d_sentences_with_repetitions", False),
    ("#d.sentences with repetitions %", "with_repetitions_pct", True),
    ("#unique d.sentences", "unique_d_sentences", False),
    ("#unique d.sentences %", "unique_pct", True),
    ("#non-unique sentences %", "non_unique_pct", True),
]


def format_pct(value: float | None) -> str:
    return "-" if value is None else f"{value:.2f}%"


def render_metrics(metrics: CorpusMetrics, title: str = "") -> str:
    """Aligned two-column table in the layout of the metric definitions."""
    label_width = max(len(label) for label, _, _ in _ROWS)
    lines = []
    if title:
        lines.append(title)
    for label, attr, is_pct in _ROWS:
        value = getattr(metrics, attr)
        rendered = format_pct(value) if is_pct else f"{value:,}"
        lines.append(f"{label:<{label_width}}  {rendered:>18}")
    if metrics.valid_only:
        lines.append(
            f"{'(valid sentences only, rule set ' + str(metrics.rule_set_version) + ')':<{label_width}}"
        )
    return "\n".join(lines)


def metrics_to_dict(metrics: CorpusMetrics) -> dict:
    """JSON shape; absent percentages are omitted rather than null."""
    out: dict = {
        "documents": metrics.documents,
        "textCharacters": metrics.text_characters,
        "textBytes": metrics.text_bytes,
        "sentences": metrics.sentences,
        "distinctSentences": metrics.distinct_sentences,
        "dSentencesWithRepetitions": metrics.d_sentences_with_repetitions,
        "uniqueDSentences": metrics.unique_d_sentences,
        "validOnly": metrics.valid_only,
    }
    for key, value in [
        ("distinctPct", metrics.distinct_pct),
        ("withRepetitionsPct", metrics.with_repetitions_pct),
        ("uniquePct", metrics.unique_pct),
        ("nonUniquePct", metrics.non_unique_pct),
    ]:
        if value is not None:
            out[key] = value
    if metrics.rule_set_version is not None:
        out["ruleSetVersion"] = metrics.rule_set_version
    return out


def render_common_matrix(store: SentenceStore, sources: Sequence[str]) -> str:
    """Lower-triangular common-sentence matrix plus the full intersection."""
    data = common_matrix(store, sources)
    names = data["sources"]
    width = max([len(s) for s in names] + [14])
    lines = []
    header = " " * width + "".join(f"  {s:>{width}}" for s in names)
    lines.append(header)
    for i, row_name in enumerate(names):
        cells = []
        for j in range(len(names)):
            if j > i:
                cells.append(f"  {'':>{width}}")
            else:
                cells.append(f"  {data['matrix'][i][j]:>{width},}")
        lines.append(f"{row_name:<{width}}" + "".join(cells))
    lines.append(f"common #distinct sentences (all sources): {data['allCommon']:,}")
    return "\n".join(lines)
