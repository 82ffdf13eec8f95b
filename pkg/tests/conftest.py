import pytest

_criteria = []


def pytest_runtest_makereport(item, call):
    marker = item.get_closest_marker("criterion")
    if marker is None or call.when != "call":
        return
    passed = call.excinfo is None
    _criteria.append((str(marker.args[0]), item.name, passed))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number, name, passed in sorted(_criteria, key=lambda c: (int(c[0]), c[1])):
        status = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"criterion {number:>2} {status}  {name}")


@pytest.fixture
def rng():
    import numpy as np

    return np.random.default_rng(12345)
