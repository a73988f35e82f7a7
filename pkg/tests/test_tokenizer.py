from collections import Counter
from concurrent.futures import ThreadPoolExecutor

from hypothesis import given, strategies as st

from sentbank.tokenizer import SentenceTokenizer, load_abbreviations, split_sentences

from conftest import EXAMPLE_TEXT, PARROT_SENTENCE


class TestBasicSplitting:
    def test_example_text_four_sentences(self):
        sentences = split_sentences(EXAMPLE_TEXT)
        assert len(sentences) == 4
        assert sentences[0] == PARROT_SENTENCE
        assert sentences[3] == PARROT_SENTENCE

    def test_empty_input(self):
        assert split_sentences("") == []
        assert split_sentences("   \n \n ") == []

    def test_abbreviation_suppresses_boundary(self):
        assert split_sentences("Dr. Smith arrived. He left.") == [
            "Dr. Smith arrived.",
            "He left.",
        ]

    def test_trailing_fragment_without_terminator(self):
        assert split_sentences("No terminator") == ["No terminator"]

    def test_terminator_then_lowercase_does_not_split(self):
        assert split_sentences("It was v. good weather.") == [
            "It was v. good weather."
        ]

    def test_question_and_exclamation(self):
        assert split_sentences("Really? Yes! Fine.") == ["Really?", "Yes!", "Fine."]

    def test_digit_starts_sentence(self):
        assert split_sentences("See below. 42 is the answer.") == [
            "See below.",
            "42 is the answer.",
        ]

    def test_opening_quote_starts_sentence(self):
        assert split_sentences('He paused. "Go on," she said.') == [
            "He paused.",
            '"Go on," she said.',
        ]

    def test_closing_quote_stays_with_sentence(self):
        assert split_sentences('He said "Stop." Then he left.') == [
            'He said "Stop."',
            "Then he left.",
        ]

    def test_more_abbreviations(self):
        assert split_sentences("See Fig. 3 for details.") == ["See Fig. 3 for details."]
        assert split_sentences("They cite Kaufmann et al. Nobody minded.") == [
            "They cite Kaufmann et al. Nobody minded."
        ]
        assert split_sentences("Compare, e.g. Apples and pears.") == [
            "Compare, e.g. Apples and pears."
        ]

    def test_ellipsis_before_uppercase_splits(self):
        assert split_sentences("Wait... Then go.") == ["Wait...", "Then go."]

    def test_ellipsis_before_lowercase_or_digit_does_not_split(self):
        assert split_sentences("Wait... then go.") == ["Wait... then go."]
        assert split_sentences("It grew... 5 times.") == ["It grew... 5 times."]

    def test_blank_line_is_unconditional_boundary(self):
        assert split_sentences("no terminator here\n\nNext paragraph.") == [
            "no terminator here",
            "Next paragraph.",
        ]

    def test_single_line_break_is_interior_whitespace(self):
        assert split_sentences("first half\nsecond half.") == [
            "first half second half."
        ]

    def test_interior_whitespace_collapsed_and_trimmed(self):
        assert split_sentences("  A   b\tc.  ") == ["A b c."]

    def test_decimal_numbers_not_split(self):
        assert split_sentences("Pi is 3.14 roughly. Yes.") == [
            "Pi is 3.14 roughly.",
            "Yes.",
        ]


class TestCustomAbbreviations:
    def test_custom_list(self):
        tok = SentenceTokenizer(abbreviations=["approx."])
        assert tok.split("It took approx. Ten minutes.") == [
            "It took approx. Ten minutes."
        ]
        # Without the entry the same text splits.
        bare = SentenceTokenizer(abbreviations=[])
        assert bare.split("It took approx. Ten minutes.") == [
            "It took approx.",
            "Ten minutes.",
        ]

    def test_load_abbreviations_file(self, tmp_path):
        path = tmp_path / "abbrev.txt"
        path.write_text("# comment\nDr.\n\nFoo.  # trailing comment\n", "utf-8")
        entries = load_abbreviations(path)
        assert entries == frozenset({"dr.", "foo."})

    def test_packaged_list_loads(self):
        entries = load_abbreviations()
        assert "dr." in entries and "et al." in entries


class TestProperties:
    def test_determinism_across_threads(self):
        texts = [EXAMPLE_TEXT, "Dr. Who? Yes! No.", "a. b. C. D."] * 8
        expected = [split_sentences(t) for t in texts]
        with ThreadPoolExecutor(max_workers=8) as pool:
            results = list(pool.map(split_sentences, texts))
        assert results == expected

    @given(
        st.text(
            alphabet=st.sampled_from("aAbB .!?\n\t\"'()…"),
            max_size=300,
        )
    )
    def test_word_conservation(self, text):
        sentences = split_sentences(text)
        assert Counter(text.split()) == Counter(
            token for s in sentences for token in s.split()
        )

    @given(st.data())
    def test_boundary_soundness_on_synthesized_corpus(self, data):
        # Sentences of clean words (no abbreviation can occur), each ending
        # with a terminator, each starting uppercase.
        words = st.text(alphabet="abcdefgh", min_size=2, max_size=8)
        sentence = st.builds(
            lambda first, rest, term: " ".join([first.capitalize()] + rest) + term,
            words,
            st.lists(words, min_size=0, max_size=6),
            st.sampled_from(".!?"),
        )
        sentences = data.draw(st.lists(sentence, min_size=1, max_size=10))
        joined = " ".join(sentences)
        assert split_sentences(joined) == sentences

    @given(st.text(max_size=300))
    def test_no_empty_sentences(self, text):
        assert all(s.strip() == s and s for s in split_sentences(text))
