import pytest
from hypothesis import HealthCheck, settings

from qforge.rootdata import build_datum
from qforge.uqminus import UMinus
from qforge.modules import Modules

settings.register_profile("qforge", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("qforge")


def a1():
    return build_datum(["1"], [])


def a2():
    return build_datum(["1", "2"], [("1", "2")])


def a3():
    return build_datum(["1", "2", "3"], [("1", "2"), ("2", "3")])


def kronecker():
    return build_datum(["1", "2"], [("1", "2"), ("1", "2")])


_MODS = {}


def mods_for(name):
    # shared across tests; every object here is immutable or an append-only cache
    if name not in _MODS:
        D = {"A1": a1, "A2": a2, "A3": a3, "K": kronecker}[name]()
        _MODS[name] = Modules(D, umin=UMinus(D))
    return _MODS[name]


@pytest.fixture
def A1():
    return mods_for("A1")


@pytest.fixture
def A2():
    return mods_for("A2")


@pytest.fixture
def A3():
    return mods_for("A3")


@pytest.fixture
def Kr():
    return mods_for("K")


# one summary line per acceptance criterion

_CRITERIA = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py::test_criterion_" not in report.nodeid:
        return
    num = int(report.nodeid.rsplit("test_criterion_", 1)[1].split("_")[0])
    if report.when == "call" or report.failed:
        ok = report.passed and _CRITERIA.get(num, True)
        _CRITERIA[num] = ok


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_CRITERIA):
        terminalreporter.write_line(f"criterion {num}: {'PASS' if _CRITERIA[num] else 'FAIL'}")
