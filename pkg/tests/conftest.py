import pytest

from lwrarz import ref1, ref2


@pytest.fixture(scope="session")
def m1():
    return ref1()


@pytest.fixture(scope="session")
def m2():
    return ref2()


ACCEPTANCE = []


@pytest.fixture
def acceptance_line():
    """Record the one-line verdict of an acceptance criterion."""

    def record(number, passed, detail):
        line = f"criterion {number}: {'PASS' if passed else 'FAIL'} - {detail}"
        ACCEPTANCE.append(line)
        print(line)
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE):
            terminalreporter.write_line(line)
