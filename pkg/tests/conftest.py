import pytest

from nlsup.setcore import FinitePairSet, Geometry

_acceptance = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    if report.when == "call" or report.outcome != "passed":
        name = report.nodeid.split("::")[-1].split("[")[0]
        prev = _acceptance.get(name, "PASS")
        _acceptance[name] = "PASS" if report.passed and prev == "PASS" else "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_acceptance, key=lambda n: int(n.split("_")[2])):
        terminalreporter.write_line(f"{_acceptance[name]}  {name}")


@pytest.fixture
def K5():
    return FinitePairSet.from_pairs([(1, 0), (0, 1), (-1, 0), (0, -1)])


@pytest.fixture
def K6():
    return FinitePairSet.from_pairs([(-1, -1), (-1, 1), (1, -1), (1, 1)])


@pytest.fixture
def grid41():
    # cell centres at multiples of 0.1 on [-2, 2]
    return Geometry.square(1, -2.05, 2.05, 41)
