"""Rule-based sentence validation.

Classifies sentences as valid/invalid through a configurable pipeline of
cheap deterministic checks aimed at extraction debris (broken tokenizer
output, formula fragments, tabular data read as text). This is not a
grammar checker and makes no claim that a valid sentence reads sensibly.

Every enabled rule is evaluated (no short-circuit) so reports carry the
full failure list. A rule set has a version string, by default a digest of
its canonical serialization, so cached per-sentence verdicts invalidate
automatically when the configuration changes.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Mapping, Sequence

from .errors import ValidationFailedError
from .metrics import Scope, resolve_scope
from .store.base import SentenceStore

_OPENING_QUOTES = "\"'([{“‘«"
_TERMINATORS = ".!?"
_CLOSING_QUOTES = "\"')]}”’»"


@dataclass(frozen=True)
class ValidationRule:
    rule_id: str
    description: str
    enabled: bool = True
    parameters: Mapping[str, object] = field(default_factory=dict)


@dataclass(frozen=True)
class ValidationReport:
    valid: bool
    failed_rule_ids: tuple[str, ...]


@dataclass(frozen=True)
class CorpusValidation:
    distinct_checked: int
    distinct_valid: int
    valid_pct: float | None
    rule_set_version: str


# -- rule implementations (True = pass) ---------------------------------------

def _rule_non_empty(text: str, params: Mapping) -> bool:
    return bool(text.strip())


def _rule_max_chars(text: str, params: Mapping) -> bool:
    return len(text) <= int(params.get("maxChars", 2000))


def _rule_token_count(text: str, params: Mapping) -> bool:
    n = len(text.split())
    return int(params.get("minTokens", 1)) <= n <= int(params.get("maxTokens", 200))


def _rule_alpha_ratio(text: str, params: Mapping) -> bool:
    chars = [c for c in text if not c.isspace()]
    if not chars:
        return False
    ratio = sum(1 for c in chars if c.isalpha()) / len(chars)
    return ratio >= float(params.get("minRatio", 0.5))


def _rule_starts_well(text: str, params: Mapping) -> bool:
    stripped = text.strip()
    if not stripped:
        return False
    first = stripped[0]
    return first.isalpha() or first.isdigit() or first in _OPENING_QUOTES


def _rule_ends_well(text: str, params: Mapping) -> bool:
    stripped = text.rstrip()
    if not stripped:
        return False
    last = stripped[-1]
    if last in _TERMINATORS:
        return True
    return (
        last in _CLOSING_QUOTES
        and len(stripped) >= 2
        and stripped[-2] in _TERMINATORS
    )


def _rule_single_char_run(text: str, params: Mapping) -> bool:
    limit = int(params.get("maxRunLength", 4))
    run = 0
    for token in text.split():
        run = run + 1 if len(token) == 1 else 0
        if run > limit:
            return False
    return True


def _rule_balanced_pairs(text: str, params: Mapping) -> bool:
    depth = 0
    for c in text:
        if c == "(":
            depth += 1
        elif c == ")":
            depth -= 1
            if depth < 0:
                return False
    return depth == 0 and text.count('"') % 2 == 0


def _rule_max_token_chars(text: str, params: Mapping) -> bool:
    limit = int(params.get("maxTokenChars", 50))
    return all(len(token) <= limit for token in text.split())


_RULE_FUNCTIONS: dict[str, Callable[[str, Mapping], bool]] = {
    "non_empty": _rule_non_empty,
    "max_chars": _rule_max_chars,
    "token_count": _rule_token_count,
    "alpha_ratio": _rule_alpha_ratio,
    "starts_well": _rule_starts_well,
    "ends_well": _rule_ends_well,
    "single_char_run": _rule_single_char_run,
    "balanced_pairs": _rule_balanced_pairs,
    "max_token_chars": _rule_max_token_chars,
}

_DEFAULT_RULES = [
    ValidationRule("non_empty", "non-empty after trimming whitespace"),
    ValidationRule("max_chars", "character count within limit", parameters={"maxChars": 2000}),
    ValidationRule("token_count", "token count within range", parameters={"minTokens": 1, "maxTokens": 200}),
    ValidationRule("alpha_ratio", "alphabetic ratio of non-space chars", parameters={"minRatio": 0.5}),
    ValidationRule("starts_well", "starts with a letter, digit or opening quote"),
    ValidationRule("ends_well", "ends with a terminator or closing quote after one"),
    ValidationRule("single_char_run", "no long runs of single-character tokens", parameters={"maxRunLength": 4}),
    ValidationRule("balanced_pairs", "balanced round brackets and double quotes"),
    ValidationRule("max_token_chars", "longest token within limit", parameters={"maxTokenChars": 50}),
]


class RuleSet:
    """An ordered, versioned collection of validation rules."""

    def __init__(self, rules: Sequence[ValidationRule], version: str | None = None):
        ids = [r.rule_id for r in rules]
        if len(set(ids)) != len(ids):
            raise ValidationFailedError("duplicate rule ids in rule set")
        unknown = [r.rule_id for r in rules if r.rule_id not in _RULE_FUNCTIONS]
        if unknown:
            raise ValidationFailedError(
                f"unknown rule ids: {', '.join(unknown)}",
                details={"known": sorted(_RULE_FUNCTIONS)},
            )
        self.rules = list(rules)
        self.version = version or self._digest()

    def _digest(self) -> str:
        canonical = json.dumps(self.to_config(), sort_keys=True)
        return hashlib.md5(canonical.encode("utf-8")).hexdigest()[:12]

    def to_config(self) -> dict:
        return {
            "rules": [
                {
                    "id": r.rule_id,
                    "description": r.description,
                    "enabled": r.enabled,
                    "parameters": dict(r.parameters),
                }
                for r in self.rules
            ]
        }

    def save(self, path: str | Path) -> None:
        config = self.to_config()
        config["version"] = self.version
        Path(path).write_text(json.dumps(config, indent=2) + "\n", "utf-8")

    @classmethod
    def load(cls, path: str | Path) -> "RuleSet":
        config = json.loads(Path(path).read_text("utf-8"))
        rules = [
            ValidationRule(
                rule_id=entry["id"],
                description=entry.get("description", ""),
                enabled=bool(entry.get("enabled", True)),
                parameters=entry.get("parameters", {}),
            )
            for entry in config["rules"]
        ]
        return cls(rules, version=config.get("version"))


def default_rule_set() -> RuleSet:
    return RuleSet(_DEFAULT_RULES)


def validate_sentence(text: str, rule_set: RuleSet | None = None) -> ValidationReport:
    """Evaluate all enabled rules; the report lists every failed rule."""
    rules = (rule_set or default_rule_set()).rules
    failed = tuple(
        rule.rule_id
        for rule in rules
        if rule.enabled and not _RULE_FUNCTIONS[rule.rule_id](text, rule.parameters)
    )
    return ValidationReport(valid=not failed, failed_rule_ids=failed)


def ensure_validity(
    store: SentenceStore, sentence_ids: Sequence[int], rule_set: RuleSet
) -> set[int]:
    """Return the valid ids among *sentence_ids*, recomputing and caching
    verdicts whose stored rule-set version is stale."""
    cached = store.sentence_validity(sentence_ids)
    stale = [
        sid
        for sid, (valid, version) in cached.items()
        if valid is None or version != rule_set.version
    ]
    for sentence in store.get_sentences(stale):
        verdict = validate_sentence(sentence.plain_text, rule_set).valid
        store.set_sentence_validity(sentence.id, verdict, rule_set.version)
        cached[sentence.id] = (verdict, rule_set.version)
    return {sid for sid, (valid, _) in cached.items() if valid}


def validate_corpus(
    store: SentenceStore, scope: Scope = None, rule_set: RuleSet | None = None
) -> CorpusValidation:
    """Validity over the distinct sentences of a scope, with caching."""
    rules = rule_set or default_rule_set()
    doc_ids = resolve_scope(store, scope)
    distinct_ids = list(store.occurrence_counts(doc_ids))
    valid_ids = ensure_validity(store, distinct_ids, rules)
    checked = len(distinct_ids)
    valid = len(valid_ids)
    return CorpusValidation(
        distinct_checked=checked,
        distinct_valid=valid,
        valid_pct=100.0 * valid / checked if checked else None,
        rule_set_version=rules.version,
    )
