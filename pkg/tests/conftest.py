import os

import pytest
from hypothesis import settings

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

ACCEPTANCE_LINES = []


@pytest.fixture
def record_acceptance():
    def record(number, title, ok, detail=""):
        line = f"ACCEPTANCE {number} [{'PASS' if ok else 'FAIL'}] {title}" + (f" -- {detail}" if detail else "")
        ACCEPTANCE_LINES.append(line)
        print(line)
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return __import__("numpy").random.default_rng(12345)


@pytest.fixture(autouse=True)
def _single_thread_default(monkeypatch):
    # keep sweeps deterministic and light unless a test opts in
    if "FREQLOSS_THREADS" not in os.environ:
        monkeypatch.setenv("FREQLOSS_THREADS", "2")
