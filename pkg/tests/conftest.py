import os
import sys

import pytest

from kernscan import ingest, pipeline

HERE = os.path.dirname(os.path.abspath(__file__))
CORPUS = os.path.join(os.path.dirname(HERE), "corpus")
CORPUS_MANIFEST = os.path.join(CORPUS, "manifest.json")

sys.path.insert(0, HERE)


@pytest.fixture(scope="session")
def corpus_manifest():
    return ingest.load_manifest(CORPUS_MANIFEST)


@pytest.fixture(scope="session")
def corpus_db(tmp_path_factory, corpus_manifest):
    """A db holding check and correlate output for the shipped corpus."""
    db = str(tmp_path_factory.mktemp("db"))
    pipeline.save_manifest(db, corpus_manifest)
    for v in corpus_manifest.versions:
        pipeline.check_version(v, db)
    pipeline.correlate_all(db, corpus_manifest)
    return db


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(results):
        terminalreporter.write_line(results[n])
