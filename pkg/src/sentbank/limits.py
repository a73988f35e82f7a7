"""Theoretical sentence-count ceilings in exact big-integer arithmetic.

The ceiling for a vocabulary of V words and sentences of at most N words
is the number of word sequences of length 1..N, i.e. the geometric sum
V + V^2 + ... + V^N. Exponents reach hundreds of digits, so everything is
computed on Python integers; floats appear only in display mantissas.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from decimal import ROUND_HALF_EVEN, Decimal, localcontext
from importlib import resources
from pathlib import Path

from .errors import ValidationFailedError

# Named sentence-length defaults: the recommended cap for effective
# communication, and the length beyond which comprehension collapses.
RECOMMENDED_MAX_WORDS = 25
COMPREHENSIBILITY_LIMIT_WORDS = 43


@dataclass(frozen=True)
class WordList:
    name: str
    total_words: int
    coverage_pct: float | None = None
    citation: str = ""


@dataclass(frozen=True)
class CeilingResult:
    """Exact ceiling plus its engineering-notation decomposition.

    ``mantissa`` is in [1, 1000) and ``exponent`` is a multiple of 3
    (mantissa digits group in threes). ``dominant_term`` is V^N, the term
    that carries virtually all of the sum's mass; renderings at a few
    significant digits are indistinguishable between the two for large V.
    """

    vocabulary_size: int
    max_words: int
    exact: int
    mantissa: float
    exponent: int
    dominant_term: int

    @property
    def digit_count(self) -> int:
        return len(str(self.exact))

    def rendered(self, significant_digits: int = 5) -> str:
        return format_scientific(self.exact, significant_digits)


def _ceiling_sum(vocabulary_size: int, max_words: int) -> int:
    total = 0
    power = 1
    for _ in range(max_words):
        power *= vocabulary_size
        total += power
    return total


def _ceiling_closed_form(vocabulary_size: int, max_words: int) -> int:
    if vocabulary_size == 1:
        return max_words
    v = vocabulary_size
    return v * (v**max_words - 1) // (v - 1)


def _engineering_parts(exact: int) -> tuple[float, int]:
    digits = len(str(exact))
    exponent = ((digits - 1) // 3) * 3
    with localcontext() as ctx:
        ctx.prec = digits + 10
        mantissa = float(Decimal(exact).scaleb(-exponent))
    return mantissa, exponent


def sentence_ceiling(vocabulary_size: int, max_words: int) -> CeilingResult:
    """Exact count of word sequences of length 1..max_words.

    Computed by both the running sum and the closed form; the two must
    agree (cheap self-check, they share no code path).
    """
    if vocabulary_size < 1 or max_words < 1:
        raise ValidationFailedError(
            "vocabulary size and max words must both be at least 1"
        )
    exact = _ceiling_sum(vocabulary_size, max_words)
    if exact != _ceiling_closed_form(vocabulary_size, max_words):
        raise AssertionError("ceiling sum and closed form disagree")
    mantissa, exponent = _engineering_parts(exact)
    return CeilingResult(
        vocabulary_size=vocabulary_size,
        max_words=max_words,
        exact=exact,
        mantissa=mantissa,
        exponent=exponent,
        dominant_term=vocabulary_size**max_words,
    )


def format_scientific(exact: int, significant_digits: int = 5) -> str:
    """Engineering-style rendering: mantissa in [1, 1000) times a power of
    ten that is a multiple of 3, rounded half-even at the requested digits.
    Small integer values (< 1000) render as plain integers."""
    if significant_digits < 1:
        raise ValidationFailedError("significant_digits must be at least 1")
    if exact < 0:
        return "-" + format_scientific(-exact, significant_digits)
    if exact < 1000:
        return str(exact)
    digits = len(str(exact))
    with localcontext() as ctx:
        ctx.prec = max(digits, significant_digits) + 10
        d = Decimal(exact)
        # Round to the requested significant digits first; the carry can
        # push the value into the next group of three.
        quantum = Decimal(1).scaleb(digits - significant_digits)
        rounded = d.quantize(quantum, rounding=ROUND_HALF_EVEN)
        digits = len(str(int(rounded)))
        exponent = ((digits - 1) // 3) * 3
        mantissa = rounded.scaleb(-exponent)
        decimals = significant_digits - (digits - exponent)
        if decimals > 0:
            mantissa_str = f"{mantissa:.{decimals}f}"
        else:
            mantissa_str = str(int(mantissa))
    if exponent == 0:
        return mantissa_str
    return f"{mantissa_str}×10^{exponent}"


def load_word_lists(path: str | Path | None = None) -> list[WordList]:
    """Word-list table shipped as data; editable, citations included."""
    if path is None:
        raw = (
            resources.files("sentbank.data")
            .joinpath("wordlists.json")
            .read_text("utf-8")
        )
    else:
        raw = Path(path).read_text("utf-8")
    config = json.loads(raw)
    lists = []
    for entry in config["wordLists"]:
        total = int(entry["totalWords"])
        if total < 1:
            raise ValidationFailedError(
                f"word list {entry.get('name')!r} has non-positive size"
            )
        lists.append(
            WordList(
                name=entry["name"],
                total_words=total,
                coverage_pct=entry.get("coveragePct"),
                citation=entry.get("citation", ""),
            )
        )
    return lists


def ceiling_table(
    word_lists: list[WordList] | None = None,
    word_limits: tuple[int, ...] = (RECOMMENDED_MAX_WORDS, COMPREHENSIBILITY_LIMIT_WORDS),
) -> list[dict]:
    """Ceilings for each word list at each sentence-length limit."""
    rows = []
    for wl in word_lists or load_word_lists():
        row = {
            "name": wl.name,
            "totalWords": wl.total_words,
            "coveragePct": wl.coverage_pct,
        }
        row["ceilings"] = {
            str(n): ceiling_to_dict(sentence_ceiling(wl.total_words, n))
            for n in word_limits
        }
        rows.append(row)
    return rows


def render_ceiling_table(rows: list[dict]) -> str:
    limits_keys = list(next(iter(rows))["ceilings"]) if rows else []
    header = f"{'word list':<12} {'#words':>8}" + "".join(
        f"  {'ceiling @' + k + ' words':>22}" for k in limits_keys
    )
    lines = [header]
    for row in rows:
        cells = "".join(
            f"  {row['ceilings'][k]['rendered']:>22}" for k in limits_keys
        )
        lines.append(f"{row['name']:<12} {row['totalWords']:>8}{cells}")
    return "\n".join(lines)


def ceiling_to_dict(result: CeilingResult, significant_digits: int = 5) -> dict:
    """JSON shape; the exact value goes out as a decimal string, never as a
    float (it does not fit any machine word)."""
    return {
        "vocabularySize": result.vocabulary_size,
        "maxWords": result.max_words,
        "mantissa": result.mantissa,
        "exponent": result.exponent,
        "decimalString": str(result.exact),
        "digitCount": result.digit_count,
        "rendered": result.rendered(significant_digits),
    }
