import pytest

import goalgraph as gg
from goalgraph import dsl


@pytest.fixture(scope="session")
def alignment():
    """Parsed bundled fixture: (model, scenarios)."""
    result = dsl.parse(gg.fixture_path("alignment.goal").read_text(encoding="utf-8"))
    assert result.ok, result.errors
    return result.model, result.scenarios


@pytest.fixture(scope="session")
def alignment_interval():
    result = dsl.parse(
        gg.fixture_path("alignment_interval.goal").read_text(encoding="utf-8"))
    assert result.ok, result.errors
    return result.model, result.scenarios


@pytest.fixture(scope="session")
def hump():
    result = dsl.parse(gg.fixture_path("hump.goal").read_text(encoding="utf-8"))
    assert result.ok, result.errors
    return result.model, result.scenarios


@pytest.fixture(scope="session")
def or_choice():
    result = dsl.parse(gg.fixture_path("or_choice.goal").read_text(encoding="utf-8"))
    assert result.ok, result.errors
    return result.model, result.scenarios
