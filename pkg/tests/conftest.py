import pytest

from mtmm import CavityConfig, MembraneArray, SlabMembrane

# two 100 nm membranes, n = 2, 9 um apart, inside a 5 mm cavity of finesse 3000
N_INDEX, THICKNESS, SPACING = 2.0, 100.0, 9000.0
CAVITY_LENGTH, FINESSE = 5.0e6, 3000.0

_acceptance = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(number, title): acceptance criterion")


def pytest_runtest_makereport(item, call):
    mark = item.get_closest_marker("acceptance")
    if mark is None:
        return
    number, title = mark.args
    entry = _acceptance.setdefault(number, {"title": title, "ok": True, "ran": False})
    if call.when == "call":
        entry["ran"] = True
    if call.excinfo is not None and not call.excinfo.errisinstance(pytest.skip.Exception):
        entry["ok"] = False


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_acceptance):
        e = _acceptance[number]
        status = "PASS" if e["ok"] and e["ran"] else "FAIL"
        terminalreporter.write_line(f"[{status}] {number}. {e['title']}")


@pytest.fixture(scope="session")
def membrane():
    return SlabMembrane(N_INDEX, THICKNESS)


@pytest.fixture(scope="session")
def pair(membrane):
    return MembraneArray(membrane, 2, SPACING)


@pytest.fixture(scope="session")
def cavity(pair):
    return CavityConfig(CAVITY_LENGTH, pair, finesse=FINESSE)
