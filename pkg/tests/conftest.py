import pytest

# Filled by tests/test_acceptance.py; printed once at the end of the session.
ACCEPTANCE_LINES = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])


@pytest.fixture
def sim_partition():
    from mobvpa import partition, sample

    return partition(sample((0.1, 0.2, 0.4), 1000, seed=20240101))
