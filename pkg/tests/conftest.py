from __future__ import annotations

import numpy as np
import pytest

from helpers import ACCEPTANCE_LINES


def pytest_addoption(parser):
    parser.addoption(
        "--extended", action="store_true", default=False, help="run long, memory-hungry tests"
    )


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


@pytest.fixture(autouse=True)
def _default_cap(monkeypatch):
    monkeypatch.delenv("UNIQUE_MEM_CAP", raising=False)
