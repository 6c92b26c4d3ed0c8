import pytest

from alg2d.field import make_field


@pytest.fixture(scope="session")
def gf():
    """``gf(p, n=1)`` with caching left to make_field."""
    return make_field


_criteria: dict[str, list[str]] = {}


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    name = report.nodeid.split("::")[-1]
    if not name.startswith("test_criterion_"):
        return
    key = name[len("test_"):].split("[")[0]
    _criteria.setdefault(key, []).append(report.outcome)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(_criteria):
        status = "PASS" if all(o == "passed" for o in _criteria[key]) else "FAIL"
        terminalreporter.write_line(f"{status}  {key}")
