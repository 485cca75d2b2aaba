from __future__ import annotations

from importlib import resources
from pathlib import Path

import pytest

from cnc.dialectica import BiclosedPoset, boolean_poset

FIXTURES = Path(str(resources.files("cnc") / "fixtures"))
CORPUS = FIXTURES / "corpus"
POSETS = FIXTURES / "posets"


def load_poset(name: str) -> BiclosedPoset:
    return BiclosedPoset.from_json((POSETS / name).read_text())


@pytest.fixture(scope="session")
def boolean() -> BiclosedPoset:
    return boolean_poset()


@pytest.fixture(scope="session")
def nc4() -> BiclosedPoset:
    return load_poset("noncommutative4.json")


@pytest.fixture(scope="session", params=["boolean", "noncommutative4"])
def poset(request) -> BiclosedPoset:
    return boolean_poset() if request.param == "boolean" else load_poset("noncommutative4.json")


# one line per acceptance criterion, filled in by test_acceptance.py
ACCEPTANCE_LINES: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[n])
