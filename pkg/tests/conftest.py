import pytest

_LINES = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[_LINES] = []


@pytest.fixture
def criterion(request):
    """Record one acceptance criterion and fail the test if it does not hold."""
    lines = request.config.stash[_LINES]

    def record(number, title, ok, detail=""):
        lines.append(f"[{'PASS' if ok else 'FAIL'}] criterion {number:>2}: {title} -- {detail}")
        assert ok, f"criterion {number} ({title}) failed: {detail}"

    return record


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(_LINES, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split("criterion")[1].split(":")[0])):
            terminalreporter.write_line(line)
