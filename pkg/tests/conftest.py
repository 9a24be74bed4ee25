import pytest

from cmcongruence import cache

# one line per acceptance criterion, filled in by test_acceptance.py
ACCEPTANCE_LINES: dict[int, str] = {}


@pytest.fixture(autouse=True)
def _no_disk_cache(monkeypatch):
    """Tests never touch a user's cache unless they set one up themselves."""
    monkeypatch.delenv(cache.ENV_VAR, raising=False)
    cache.set_default_cache(None)
    yield
    cache.set_default_cache(None)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[n])
