import os

import pytest

from semkit import load_grammar, load_kb

FIXTURES = os.path.join(os.path.dirname(__file__), "fixtures")


def fixture_path(*parts: str) -> str:
    return os.path.join(FIXTURES, *parts)


@pytest.fixture
def fixtures_dir():
    return FIXTURES


@pytest.fixture
def toy_kb():
    return load_kb(fixture_path("kb_toy"))


@pytest.fixture
def cycle_kb():
    return load_kb(fixture_path("kb_cycle"))


@pytest.fixture
def learn_kb():
    return load_kb(fixture_path("kb_learn"))


@pytest.fixture
def seed_grammar(toy_kb):
    return load_grammar(fixture_path("grammar_seed"), toy_kb)


def write_kb_files(path, concepts="", methods="", words="", relations=""):
    """Write the four store files with the given record lines appended to
    the headers."""
    headers = {
        "concepts.tsv": "id\tname\tproperties\tmethods\tmethod_exclusions",
        "methods.tsv": "id\tname\tobjects\tcode",
        "words.tsv": "surface\tobject_id\tobject_kind\tpos",
        "relations.tsv": "head_id\ttail_id\trel_type",
    }
    bodies = {
        "concepts.tsv": concepts,
        "methods.tsv": methods,
        "words.tsv": words,
        "relations.tsv": relations,
    }
    os.makedirs(path, exist_ok=True)
    for name, header in headers.items():
        body = bodies[name]
        with open(os.path.join(path, name), "w", encoding="utf-8") as fh:
            fh.write(header + "\n")
            if body:
                fh.write(body if body.endswith("\n") else body + "\n")
