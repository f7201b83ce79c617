import pytest

_ACCEPTANCE = []


@pytest.fixture
def acceptance_log():
    """Collects one summary line per acceptance criterion."""
    def log(number, title, ok, detail, seconds):
        line = f"[{'PASS' if ok else 'FAIL'}] {number}. {title}: {detail} ({seconds:.2f} s)"
        _ACCEPTANCE.append((number, line))
        print(line)
        return ok
    return log


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for _, line in sorted(_ACCEPTANCE):
        terminalreporter.write_line(line)
