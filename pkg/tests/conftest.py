import json
from pathlib import Path

import pytest

REPO = Path(__file__).resolve().parent.parent
SPECS = REPO / "specs"


@pytest.fixture(scope="session")
def specs_dir() -> Path:
    return SPECS


@pytest.fixture()
def write_spec(tmp_path):
    """Write a spec dict to a temp JSON file and return its path."""

    def _write(d: dict, name: str = "spec.json") -> str:
        path = tmp_path / name
        path.write_text(json.dumps(d))
        return str(path)

    return _write
