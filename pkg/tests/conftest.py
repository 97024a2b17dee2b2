import importlib.util
import sys
from pathlib import Path

import pytest

try:
    import tropcy as tc
except ImportError:
    _src = Path(__file__).resolve().parents[1] / "src"
    _spec = importlib.util.spec_from_file_location(
        "tropcy", _src / "__init__.py", submodule_search_locations=[str(_src)]
    )
    tc = importlib.util.module_from_spec(_spec)
    sys.modules["tropcy"] = tc
    _spec.loader.exec_module(tc)


@pytest.fixture(scope="session")
def sq():
    return tc.load("sq")


@pytest.fixture(scope="session")
def p2():
    return tc.load("p2")


@pytest.fixture(scope="session")
def p3_22():
    return tc.load("p3_22")


@pytest.fixture(scope="session")
def quartic():
    return tc.load("quartic")


@pytest.fixture
def write_scenario(tmp_path):
    """Writes a scenario dict (or raw text) to a file and returns its path."""
    import json

    def write(data, name="scenario.json"):
        path = tmp_path / name
        path.write_text(data if isinstance(data, str) else json.dumps(data))
        return path

    return write
