from pathlib import Path

import pytest

from mf import Store, extract_propositions, iter_sentences, load_taxonomy, load_topic_matrix

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def corpus_path(fixtures_dir) -> Path:
    return fixtures_dir / "poverty.conllu"


@pytest.fixture(scope="session")
def corpus_sentences(corpus_path):
    return list(iter_sentences(corpus_path))


@pytest.fixture(scope="session")
def corpus_store(corpus_sentences) -> Store:
    store = Store()
    for sent in corpus_sentences:
        store.update(extract_propositions(sent))
    return store.freeze()


@pytest.fixture(scope="session")
def taxonomy(fixtures_dir):
    return load_taxonomy(fixtures_dir / "taxonomy.tsv")


@pytest.fixture(scope="session")
def topic_matrix(fixtures_dir):
    return load_topic_matrix(fixtures_dir / "topics.tsv")
