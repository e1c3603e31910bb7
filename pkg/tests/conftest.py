import os

import pytest

from amr2sparql import evaluation, grounding, store

FIXTURES = os.path.join(os.path.dirname(os.path.abspath(__file__)), "fixtures")


def fixture_path(name):
    return os.path.join(FIXTURES, name)


@pytest.fixture(scope="session")
def kb():
    return grounding.WIKIDATA


@pytest.fixture(scope="session")
def lexicon():
    return grounding.Lexicon.load(fixture_path("lexicon.json"))


@pytest.fixture(scope="session")
def corrupted_lexicon():
    return grounding.Lexicon.load(fixture_path("lexicon_corrupted.json"))


@pytest.fixture(scope="session")
def triple_store():
    return store.TripleStore.from_file(fixture_path("fixture.nt"))


@pytest.fixture(scope="session")
def dataset():
    return evaluation.load_dataset(fixture_path("dataset.jsonl"))
