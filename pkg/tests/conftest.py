import mpmath
import pytest

_REPORT = pytest.StashKey[list]()


@pytest.fixture(autouse=True)
def prec256():
    with mpmath.workprec(256):
        yield


def pytest_configure(config):
    config.stash[_REPORT] = []


@pytest.fixture
def acceptance_line(request):
    """Record one pass/fail line; all lines are repeated in the terminal summary."""

    def record(criterion: int, ok: bool, detail: str) -> None:
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {criterion}: {detail}"
        print(line)
        request.config.stash[_REPORT].append(line)

    return record


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(_REPORT, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split("criterion ")[1].split(":")[0])):
            terminalreporter.write_line(line)
