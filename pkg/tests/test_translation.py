import pytest
from hypothesis import given, strategies as st

from sentbank.errors import (
    NotFoundError,
    UnsupportedLanguagePairError,
    ValidationFailedError,
)
from sentbank.store import MemoryStore
from sentbank.translation import (
    STATUS_MISSING,
    STATUS_TRANSLATED,
    TranslationEngine,
    result_to_dict,
)

from conftest import EXAMPLE_TEXT, PARROT_SENTENCE


@pytest.fixture
def engine(example_store):
    return TranslationEngine(example_store)


def _parrot_id(engine):
    return engine.store.find_sentence(PARROT_SENTENCE, "en").id


class TestTranslateText:
    def test_example_scenario_half_covered(self, engine):
        engine.add_translation(
            _parrot_id(engine), "pt", "Quando os papagaios o fazem.", "ana"
        )
        result = engine.translate_text(EXAMPLE_TEXT, "en", "pt")
        assert len(result.segments) == 4
        statuses = [s.status for s in result.segments]
        assert statuses == [
            STATUS_TRANSLATED,
            STATUS_MISSING,
            STATUS_MISSING,
            STATUS_TRANSLATED,
        ]
        assert [s.start_offset for s in result.segments] == [0, 1, 2, 3]
        assert result.coverage_pct == 50.0

    def test_empty_input(self, engine):
        result = engine.translate_text("", "en", "pt")
        assert result.segments == ()
        assert result.coverage_pct is None

    def test_full_coverage(self, engine):
        for sentence_id in {
            engine.store.find_sentence(text, "en").id
            for text in engine.store.tokenizer.split(EXAMPLE_TEXT)
        }:
            engine.add_translation(sentence_id, "pt", f"T{sentence_id}.", "ana")
        result = engine.translate_text(EXAMPLE_TEXT, "en", "pt")
        assert result.coverage_pct == 100.0

    def test_unknown_text_is_missing(self, engine):
        result = engine.translate_text("Entirely new sentence.", "en", "pt")
        assert result.segments[0].status == STATUS_MISSING
        assert result.segments[0].sentence_id is None

    def test_stored_but_untranslated_is_missing_with_id(self, engine):
        result = engine.translate_text(PARROT_SENTENCE, "en", "pt")
        segment = result.segments[0]
        assert segment.status == STATUS_MISSING
        assert segment.sentence_id == _parrot_id(engine)

    def test_unsupported_pair_lists_supported(self, engine):
        with pytest.raises(UnsupportedLanguagePairError) as excinfo:
            engine.translate_text("Hello.", "en", "de")
        assert "en->pt" in excinfo.value.details["supportedPairs"]

    def test_candidates_ranked_votes_then_newest(self, engine):
        sid = _parrot_id(engine)
        first = engine.add_translation(sid, "pt", "Primeira escolha.", "ana")
        second = engine.add_translation(sid, "pt", "Segunda escolha.", "rui")
        engine.vote_translation(second.id)
        result = engine.translate_text(PARROT_SENTENCE, "en", "pt")
        ranked = [c.id for c in result.segments[0].candidates]
        assert ranked == [second.id, first.id]

    @given(st.text(alphabet=st.sampled_from("abC .!?\n"), max_size=200))
    def test_segment_count_equals_tokenizer_count(self, text):
        store = MemoryStore()
        engine = TranslationEngine(store)
        result = engine.translate_text(text, "en", "pt")
        assert len(result.segments) == len(store.tokenizer.split(text))

    def test_coverage_monotone_under_new_translations(self, engine):
        before = engine.translate_text(EXAMPLE_TEXT, "en", "pt").coverage_pct
        sid = engine.store.find_sentence(
            "When children do it, it's imitation.", "en"
        ).id
        engine.add_translation(sid, "pt", "Quando as crianças o fazem.", "ana")
        after = engine.translate_text(EXAMPLE_TEXT, "en", "pt").coverage_pct
        assert after >= before


class TestContribute:
    def test_add_and_endorse(self, engine):
        sid = _parrot_id(engine)
        record = engine.add_translation(sid, "pt", "Papagaios imitam.", "ana")
        assert record.votes == 0
        again = engine.add_translation(sid, "pt", "Papagaios imitam.", "rui")
        assert again.id == record.id and again.votes == 1

    def test_empty_text_rejected(self, engine):
        with pytest.raises(ValidationFailedError):
            engine.add_translation(_parrot_id(engine), "pt", "   ", "ana")

    def test_unknown_sentence_rejected(self, engine):
        with pytest.raises(NotFoundError):
            engine.add_translation(10**9, "pt", "Texto.", "ana")

    def test_vote_increments(self, engine):
        record = engine.add_translation(_parrot_id(engine), "pt", "Texto.", "ana")
        assert engine.vote_translation(record.id) == 1

    def test_vote_delta_restricted(self, engine):
        record = engine.add_translation(_parrot_id(engine), "pt", "Texto.", "ana")
        with pytest.raises(ValidationFailedError):
            engine.vote_translation(record.id, delta=5)

    def test_vote_unknown(self, engine):
        with pytest.raises(NotFoundError):
            engine.vote_translation(10**9)


class TestSerialization:
    def test_result_dict_shape(self, engine):
        engine.add_translation(_parrot_id(engine), "pt", "Tradução.", "ana")
        payload = result_to_dict(engine.translate_text(EXAMPLE_TEXT, "en", "pt"))
        assert payload["sourceLanguage"] == "en"
        assert payload["coveragePct"] == 50.0
        segment = payload["segments"][0]
        assert segment["status"] == STATUS_TRANSLATED
        assert segment["candidates"][0]["text"] == "Tradução."

    def test_empty_result_omits_coverage(self, engine):
        payload = result_to_dict(engine.translate_text("", "en", "pt"))
        assert "coveragePct" not in payload
        assert payload["segments"] == []
