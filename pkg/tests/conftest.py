import pytest

from batchcolor.core.config import get_settings
from batchcolor.core.graph import Graph


@pytest.fixture(autouse=True)
def fresh_settings(monkeypatch):
    """Settings are cached; drop the cache so env overrides in a test take effect."""
    monkeypatch.delenv("BATCHCOLOR_ORACLE_LIMIT", raising=False)
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.fixture
def triangle() -> Graph:
    return Graph.from_edges("abc", [("a", "b"), ("b", "c"), ("a", "c")])


@pytest.fixture
def path3() -> Graph:
    return Graph.from_edges("abc", [("a", "b"), ("b", "c")])


@pytest.fixture
def star() -> Graph:
    return Graph.from_edges(["c", "l1", "l2", "l3"], [("c", "l1"), ("c", "l2"), ("c", "l3")])
