from pathlib import Path

import pytest

from flagquiz import load_default_registry
from flagquiz.nlu import load_default_nlu_config
from flagquiz.simulation import bundled_transcript_path, parse_transcript

DATA = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def registry():
    return load_default_registry()


@pytest.fixture(scope="session")
def nlu_config():
    return load_default_nlu_config()


@pytest.fixture(scope="session")
def table1():
    return parse_transcript(bundled_transcript_path("table1.jsonl"))


@pytest.fixture(scope="session")
def fixture_dir():
    return DATA
