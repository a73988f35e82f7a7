import pytest

from sentbank.store import MemoryStore, SqliteStore

# Worked-example document: four lines, one repeated, trailing newline
# included (140 characters in total).
EXAMPLE_TEXT = (
    "When parrots do it, it's parroting.\n"
    "When children do it, it's imitation.\n"
    "When computers do it, it's AI.\n"
    "When parrots do it, it's parroting.\n"
)
PARROT_SENTENCE = "When parrots do it, it's parroting."


@pytest.fixture(params=["memory", "sqlite"])
def store(request, tmp_path):
    if request.param == "memory":
        s = MemoryStore()
    else:
        s = SqliteStore(tmp_path / "store.db")
    yield s
    s.close()


@pytest.fixture
def memory_store():
    return MemoryStore()


@pytest.fixture
def example_store(store):
    store.ingest_document("example", "example.txt", "text/plain", EXAMPLE_TEXT)
    return store
