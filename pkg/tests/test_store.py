import random
import threading
from concurrent.futures import ThreadPoolExecutor

import pytest

from sentbank.errors import AlreadyIngestedError, NotFoundError, UnknownScopeError
from sentbank.store import MemoryStore, compute_md5
from sentbank.store.base import rank_translations
from sentbank.store.models import SentenceTranslation

from conftest import EXAMPLE_TEXT, PARROT_SENTENCE
from reference_md5 import md5_hex_text


class TestComputeMd5:
    def test_empty_string(self):
        assert compute_md5("") == "d41d8cd98f00b204e9800998ecf8427e"

    def test_abc(self):
        assert compute_md5("abc") == "900150983cd24fb0d6963f7d28e17f72"

    def test_million_a_cross_check(self):
        text = "a" * 1_000_000
        assert compute_md5(text) == md5_hex_text(text)

    def test_unicode_goes_through_utf8(self):
        text = "olá mundo"
        assert compute_md5(text) == md5_hex_text(text)


class TestIngest:
    def test_example_document_stats(self, store):
        _, stats = store.ingest_document("t", "ex.txt", "text/plain", EXAMPLE_TEXT)
        assert (stats.sentences, stats.new_distinct, stats.reused_distinct) == (4, 3, 1)

    def test_reingest_same_name_rejected(self, example_store):
        with pytest.raises(AlreadyIngestedError):
            example_store.ingest_document(
                "example", "example.txt", "text/plain", EXAMPLE_TEXT
            )

    def test_same_content_different_name_reuses_everything(self, example_store):
        _, stats = example_store.ingest_document(
            "example", "copy.txt", "text/plain", EXAMPLE_TEXT
        )
        assert (stats.sentences, stats.new_distinct, stats.reused_distinct) == (4, 0, 4)

    def test_empty_content_creates_document(self, store):
        doc_id, stats = store.ingest_document("t", "empty.txt", "text/plain", "")
        assert (stats.sentences, stats.new_distinct, stats.reused_distinct) == (0, 0, 0)
        doc = store.get_document(doc_id)
        assert doc.text_character_count == 0

    def test_character_and_byte_counts(self, store):
        content = "olá.\n"
        doc_id, _ = store.ingest_document("t", "pt.txt", "text/plain", content, "pt")
        doc = store.get_document(doc_id)
        assert doc.text_character_count == 5
        assert doc.text_byte_count == 6

    def test_offsets_consecutive_from_zero(self, example_store):
        doc_id = example_store.document_ids()[0]
        occurrences = example_store.document_occurrences(doc_id)
        assert [o.start_offset for o in occurrences] == [0, 1, 2, 3]

    def test_conservation_sources_equal_per_document_sums(self, store):
        store.ingest_document("a", "1.txt", "text/plain", "One. Two. Three.")
        store.ingest_document("b", "2.txt", "text/plain", "Two. Four.")
        per_doc = sum(
            len(store.document_occurrences(d)) for d in store.document_ids()
        )
        assert per_doc == store.counts()["sources"]


class TestFindSentence:
    def test_found_with_occurrences(self, example_store):
        sentence = example_store.find_sentence(PARROT_SENTENCE, "en")
        assert sentence is not None
        counts = example_store.occurrence_counts_for([sentence.id])
        assert counts[sentence.id] == 2

    def test_not_found(self, example_store):
        assert example_store.find_sentence("Never ingested.", "en") is None

    def test_language_tag_separates_hash_spaces(self, store):
        store.ingest_document("t", "en.txt", "text/plain", "Same text.", "en")
        assert store.find_sentence("Same text.", "pt") is None

    def test_forced_hash_collision_resolved_by_exact_text(self, store):
        fake = "00" * 16
        store.insert_sentence_raw("First colliding text.", fake, "en")
        store.insert_sentence_raw("Second colliding text.", fake, "en")
        first = store.find_sentence("First colliding text.", "en")
        second = store.find_sentence("Second colliding text.", "en")
        # find_sentence computes the real hash, so go through the bucket.
        bucket = store.find_sentences_by_hash(fake, "en")
        assert {s.plain_text for s in bucket} == {
            "First colliding text.",
            "Second colliding text.",
        }
        assert first is None and second is None  # real-hash lookup misses the fakes


class TestDedup:
    def test_clean_store_is_noop(self, example_store):
        assert example_store.dedup_pass() == 0

    def test_raw_duplicates_merge_to_lowest_id(self, store):
        text = "Duplicated row."
        md5 = compute_md5(text)
        s1 = store.insert_sentence_raw(text, md5, "en")
        s2 = store.insert_sentence_raw(text, md5, "en")
        assert store.dedup_pass() == 1
        survivor = store.find_sentence(text, "en")
        assert survivor.id == min(s1.id, s2.id)
        assert store.dedup_pass() == 0  # idempotent

    def test_language_filter(self, store):
        for lang in ("en", "pt"):
            md5 = compute_md5("Dup.")
            store.insert_sentence_raw("Dup.", md5, lang)
            store.insert_sentence_raw("Dup.", md5, lang)
        assert store.dedup_pass("en") == 1
        assert store.dedup_pass() == 1  # the pt pair is still there

    def test_translations_repointed_and_duplicates_dropped(self, store):
        text = "Translated duplicate."
        md5 = compute_md5(text)
        s1 = store.insert_sentence_raw(text, md5, "en")
        s2 = store.insert_sentence_raw(text, md5, "en")
        shared = store.add_translation(s2.id, "pt", "Tradução.", "ana")
        store.add_translation(s1.id, "pt", "Tradução.", "rui")
        only_s2 = store.add_translation(s2.id, "pt", "Outra tradução.", "ana")
        assert store.dedup_pass() == 1
        texts = {t.translated_text for t in store.translations_for(s1.id, "pt")}
        assert texts == {"Tradução.", "Outra tradução."}
        assert shared.id != only_s2.id

    def test_occurrences_repointed_to_survivor(self, tmp_path):
        # Force the insert race deterministically: lookups report a miss, so
        # every document inserts its own copy of the shared sentence.
        store = MemoryStore()
        store.find_sentence = lambda text, lang: None
        store.ingest_document("t", "1.txt", "text/plain", "Shared line.")
        store.ingest_document("t", "2.txt", "text/plain", "Shared line.")
        store.ingest_document("t", "3.txt", "text/plain", "Shared line.")
        del store.find_sentence
        assert store.counts()["sentences"] == 3
        assert store.dedup_pass() == 2
        survivor = store.find_sentence("Shared line.", "en")
        assert store.occurrence_counts_for([survivor.id])[survivor.id] == 3
        for s in store.iter_sentences():
            assert store.find_sentence(s.plain_text, s.language_tag).id == s.id

    def test_sqlite_sources_repointed(self, tmp_path):
        from sentbank.store import SqliteStore

        store = SqliteStore(tmp_path / "x.db")
        doc_id, _ = store.ingest_document("t", "1.txt", "text/plain", "Row one.")
        dup = store.insert_sentence_raw("Row one.", compute_md5("Row one."), "en")
        with store._connection() as conn:
            conn.execute(
                "UPDATE sentence_source SET sentence_id = ? WHERE document_id = ?",
                (dup.id, doc_id),
            )
        assert store.dedup_pass() == 1
        survivor = store.find_sentence("Row one.", "en")
        assert store.occurrence_counts_for([survivor.id])[survivor.id] == 1
        assert [r["record"] for r in store.audit()] == ["summary"]


class TestBrowsing:
    def test_list_documents_filters_and_pages(self, store):
        for i in range(5):
            tag = "odd" if i % 2 else "even"
            store.ingest_document(tag, f"doc-{i}.txt", "text/plain", f"Number {i}.")
        page = store.list_documents(page=1, page_size=2)
        assert [d.name for d in page.items] == ["doc-0.txt", "doc-1.txt"]
        assert page.total == 5
        beyond = store.list_documents(page=9, page_size=2)
        assert beyond.items == [] and beyond.total == 5
        odd = store.list_documents(source_tag="odd")
        assert [d.name for d in odd.items] == ["doc-1.txt", "doc-3.txt"]
        named = store.list_documents(name_substring="DOC-4")
        assert [d.name for d in named.items] == ["doc-4.txt"]

    def test_get_document_not_found(self, store):
        with pytest.raises(NotFoundError):
            store.get_document(424242)

    def test_document_detail_counts(self, example_store):
        doc_id = example_store.document_ids()[0]
        doc, detail = example_store.get_document_detail(doc_id)
        assert doc.text_character_count == 140
        counts = [count for _, _, count in detail]
        assert counts == [2, 1, 1, 2]
        texts = [s.plain_text for _, s, _ in detail]
        assert texts[0] == texts[3] == PARROT_SENTENCE

    def test_list_sentences_filters(self, example_store):
        page = example_store.list_sentences(text_substring="parrot")
        assert [s.plain_text for s, _ in page.items] == [PARROT_SENTENCE]
        repeated = example_store.list_sentences(min_occurrences=2)
        assert [n for _, n in repeated.items] == [2]
        none = example_store.list_sentences(language_tag="pt")
        assert none.total == 0

    def test_sentence_detail(self, example_store):
        sentence = example_store.find_sentence(PARROT_SENTENCE, "en")
        s, count, docs, translations = example_store.get_sentence_detail(sentence.id)
        assert count == 2
        assert [d.name for d in docs] == ["example.txt"]
        assert translations == []

    def test_get_sentence_not_found(self, store):
        with pytest.raises(NotFoundError):
            store.get_sentence(999999)

    def test_documents_containing_limit(self, store):
        for i in range(4):
            store.ingest_document("t", f"{i}.txt", "text/plain", "Shared.")
        sid = store.find_sentence("Shared.", "en").id
        assert len(store.documents_containing(sid)) == 4
        assert len(store.documents_containing(sid, limit=2)) == 2


class TestScopeQueries:
    def test_unknown_source_tag(self, store):
        with pytest.raises(UnknownScopeError):
            store.document_ids("missing-tag")

    def test_unknown_document_id_in_scope(self, example_store):
        with pytest.raises(UnknownScopeError):
            example_store.occurrence_counts([31337])

    def test_occurrence_counts_scoped(self, store):
        a, _ = store.ingest_document("t", "a.txt", "text/plain", "One. Two.")
        b, _ = store.ingest_document("t", "b.txt", "text/plain", "Two. Three.")
        all_counts = store.occurrence_counts()
        assert sorted(all_counts.values()) == [1, 1, 2]
        only_a = store.occurrence_counts([a])
        assert sorted(only_a.values()) == [1, 1]

    def test_scope_totals(self, store):
        store.ingest_document("x", "a.txt", "text/plain", "abcd.")
        store.ingest_document("y", "b.txt", "text/plain", "efgh.")
        assert store.scope_totals() == (2, 10, 10)
        assert store.scope_totals(store.document_ids("x")) == (1, 5, 5)

    def test_distinct_sentence_ids(self, store):
        store.ingest_document("x", "a.txt", "text/plain", "One. Two. One. Two.")
        assert len(store.distinct_sentence_ids("x")) == 2


class TestValidityCache:
    def test_set_and_read(self, example_store):
        sid = example_store.find_sentence(PARROT_SENTENCE, "en").id
        example_store.set_sentence_validity(sid, True, "v1")
        assert example_store.sentence_validity([sid])[sid] == (True, "v1")

    def test_set_unknown_sentence(self, store):
        with pytest.raises(NotFoundError):
            store.set_sentence_validity(5555, True, "v1")


class TestTranslations:
    def _sentence(self, store):
        store.ingest_document("t", "d.txt", "text/plain", "Hello world.")
        return store.find_sentence("Hello world.", "en")

    def test_first_submission_has_zero_votes(self, store):
        s = self._sentence(store)
        record = store.add_translation(s.id, "pt", "Olá mundo.", "ana")
        assert record.votes == 0

    def test_identical_resubmission_endorses(self, store):
        s = self._sentence(store)
        first = store.add_translation(s.id, "pt", "Olá mundo.", "ana")
        second = store.add_translation(s.id, "pt", "Olá mundo.", "rui")
        assert second.id == first.id and second.votes == 1
        assert store.counts()["translations"] == 1

    def test_different_texts_become_candidates(self, store):
        s = self._sentence(store)
        store.add_translation(s.id, "pt", "Olá mundo.", "ana")
        store.add_translation(s.id, "pt", "Viva, mundo.", "rui")
        assert len(store.translations_for(s.id, "pt")) == 2

    def test_vote_and_ranking(self, store):
        s = self._sentence(store)
        low = store.add_translation(s.id, "pt", "Primeira.", "ana")
        high = store.add_translation(s.id, "pt", "Segunda.", "rui")
        for _ in range(3):
            store.vote_translation(high.id)
        ranked = store.translations_for(s.id, "pt")
        assert [t.id for t in ranked] == [high.id, low.id]

    def test_vote_unknown(self, store):
        with pytest.raises(NotFoundError):
            store.vote_translation(98765)

    def test_add_to_unknown_sentence(self, store):
        with pytest.raises(NotFoundError):
            store.add_translation(123456, "pt", "x", "ana")

    def test_rank_is_votes_then_newest(self):
        rows = [
            SentenceTranslation(1, 1, "pt", "a", "x", votes=1, created_at="2024-01-01"),
            SentenceTranslation(2, 1, "pt", "b", "x", votes=1, created_at="2024-06-01"),
            SentenceTranslation(3, 1, "pt", "c", "x", votes=5, created_at="2023-01-01"),
        ]
        assert [t.id for t in rank_translations(rows)] == [3, 2, 1]


class TestAudit:
    def test_clean_store(self, example_store):
        records = example_store.audit()
        assert [r["record"] for r in records] == ["summary"]
        assert records[-1]["violations"] == 0

    def test_hash_mismatch_detected(self, store):
        store.insert_sentence_raw("Text with wrong hash.", "ab" * 16, "en")
        kinds = [r["record"] for r in store.audit()]
        assert "hash_mismatch" in kinds

    def test_duplicates_reported_not_counted_as_violations(self, store):
        md5 = compute_md5("Twice.")
        store.insert_sentence_raw("Twice.", md5, "en")
        store.insert_sentence_raw("Twice.", md5, "en")
        records = store.audit()
        assert records[-1]["violations"] == 0
        assert records[-1]["duplicates"] == 1

    def test_hash_integrity_invariant(self, example_store):
        for sentence in example_store.iter_sentences():
            assert sentence.md5hash == compute_md5(sentence.plain_text)


def _build_documents(rng: random.Random, count: int) -> list[tuple[str, str]]:
    pool = [f"Topic {i} sentence number {i * 7}." for i in range(40)]
    docs = []
    for d in range(count):
        k = rng.randint(2, 12)
        chosen = [pool[min(int(rng.paretovariate(1.2)) % 40, 39)] for _ in range(k)]
        docs.append((f"doc-{d}.txt", "\n".join(chosen) + "\n"))
    return docs


class TestConcurrency:
    @pytest.mark.parametrize("seed", [0, 1, 2])
    def test_concurrent_ingest_plus_dedup_equals_serial(self, seed):
        docs = _build_documents(random.Random(seed), 100)

        serial = MemoryStore()
        for name, content in docs:
            serial.ingest_document("t", name, "text/plain", content)

        concurrent = MemoryStore()
        with ThreadPoolExecutor(max_workers=8) as pool:
            list(
                pool.map(
                    lambda item: concurrent.ingest_document(
                        "t", item[0], "text/plain", item[1]
                    ),
                    docs,
                )
            )
        concurrent.dedup_pass()

        def observation(store):
            texts = {}
            for sid, n in store.occurrence_counts().items():
                texts[store.get_sentence(sid).plain_text] = n
            return store.counts()["documents"], texts

        assert observation(concurrent) == observation(serial)

    def test_concurrent_distinct_documents_all_commit(self, store):
        names = [f"par-{i}.txt" for i in range(20)]
        with ThreadPoolExecutor(max_workers=8) as pool:
            list(
                pool.map(
                    lambda n: store.ingest_document(
                        "t", n, "text/plain", f"Unique {n}. Shared tail."
                    ),
                    names,
                )
            )
        store.dedup_pass()
        assert store.counts()["documents"] == 20
        shared = store.find_sentence("Shared tail.", "en")
        assert store.occurrence_counts_for([shared.id])[shared.id] == 20

    def test_duplicate_name_race_single_winner(self, store):
        errors = []
        barrier = threading.Barrier(4)

        def attempt(i):
            try:
                barrier.wait()
                store.ingest_document("t", "same.txt", "text/plain", f"Attempt {i}.")
            except AlreadyIngestedError as exc:
                errors.append(exc)

        threads = [threading.Thread(target=attempt, args=(i,)) for i in range(4)]
        for t in threads:
            t.start()
        for t in threads:
            t.join()
        assert len(errors) == 3
        assert store.counts()["documents"] == 1
