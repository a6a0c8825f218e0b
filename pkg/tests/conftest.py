import json

import pytest

from tests.families import F1, F2, F3, F4, F5, shifted_jordan


@pytest.fixture
def f1():
    return F1


@pytest.fixture
def f2():
    return F2


@pytest.fixture
def f3():
    return F3


@pytest.fixture
def f4():
    return F4


@pytest.fixture
def f5():
    return F5


@pytest.fixture
def jordan3():
    return shifted_jordan(3)


@pytest.fixture
def write_document(tmp_path):
    """Write an input document and return its path."""

    def _write(payload, name: str = "family.json"):
        path = tmp_path / name
        path.write_text(payload if isinstance(payload, str) else json.dumps(payload), encoding="utf-8")
        return path

    return _write


@pytest.fixture(autouse=True)
def _clean_environment(monkeypatch):
    for name in ("LOCAL_SMITH_BACKEND", "LOCAL_SMITH_TOLERANCE", "LOCAL_SMITH_K_MAX", "LOCAL_SMITH_SAMPLES"):
        monkeypatch.delenv(name, raising=False)
