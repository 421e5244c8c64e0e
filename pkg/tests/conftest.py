import pytest

ACCEPTANCE_RESULTS = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in ACCEPTANCE_RESULTS:
        terminalreporter.write_line(line)


@pytest.fixture
def record_criterion():
    def record(name, passed, detail=""):
        ACCEPTANCE_RESULTS.append(f"[{'PASS' if passed else 'FAIL'}] {name}: {detail}")
        return passed

    return record
