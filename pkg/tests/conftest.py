from pathlib import Path

import pytest

from vdm_oracle import Context, bundled_spec_text, parse_class, parse_document
from vdm_oracle.harness import load_suite

CORPUS = Path(__file__).parent / "corpus"
FIXTURES = Path(__file__).parent / "fixtures"


def corpus_files():
    return sorted(CORPUS.glob("*.vdmpp"))


def load_corpus(path):
    classes = parse_document(path.read_text(encoding="utf-8"))
    return classes, {c.name: c for c in classes}


@pytest.fixture(scope="session")
def triangle_text():
    return bundled_spec_text()


@pytest.fixture(scope="session")
def triangle(triangle_text):
    return parse_class(triangle_text)


@pytest.fixture(scope="session")
def tctx(triangle):
    return Context(triangle)


@pytest.fixture(scope="session")
def table8():
    return load_suite("table8")


def corpus_class(filename, name=None):
    classes, lib = load_corpus(CORPUS / filename)
    cls = classes[0] if name is None else lib[name]
    return cls, lib
