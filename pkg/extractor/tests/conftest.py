import json
from pathlib import Path

import pytest

DATA = Path(__file__).parent / "data"
GOLDEN = Path(__file__).parent / "golden"


@pytest.fixture(scope="session")
def smoke_stories():
    return json.loads((DATA / "smoke_stories.json").read_text())["stories"]


@pytest.fixture(scope="session")
def np_oracle():
    return json.loads((DATA / "np_oracle.json").read_text())["sentences"]


@pytest.fixture(scope="session")
def golden_dir():
    return GOLDEN
